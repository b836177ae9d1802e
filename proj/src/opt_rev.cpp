// Copyright 2026 The mechrev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mechrev/opt_rev.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mechrev/error.hpp"
#include "mechrev/simple_rev.hpp"
#include "mechrev/simplex.hpp"

namespace mechrev {

namespace {

constexpr double kCutTol = 1e-9;
constexpr std::size_t kCutsPerType = 1;
constexpr std::size_t kMaxRounds = 2000;
constexpr double kPruneSlack = 1e-6;

double dot(const std::vector<double> &a, const std::vector<double> &b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    s += a[i] * b[i];
  }
  return s;
}

}  // namespace

double MenuMechanism::max_violation() const
{
  double worst = 0.0;
  for (std::size_t t = 0; t < types.size(); ++t)
  {
    double const own = dot(types[t], alloc[t]) - pay[t];
    worst = std::max(worst, -own);
    for (std::size_t s = 0; s < types.size(); ++s)
    {
      worst = std::max(worst, dot(types[t], alloc[s]) - pay[s] - own);
    }
  }
  return worst;
}

void to_json(nlohmann::json &j, const MenuMechanism &menu)
{
  j = nlohmann::json{{"types", menu.types}, {"alloc", menu.alloc}, {"pay", menu.pay}, {"revenue", menu.objective}};
}

MenuMechanism rev_lp(const JointDist &joint, std::size_t type_cap)
{
  std::size_t const T = joint.size();
  std::size_t const n = joint.dim();
  if (T > type_cap)
  {
    throw SizeError("LP types", T, type_cap);
  }
  auto const &types = joint.points();
  auto const &f = joint.probs();
  std::size_t const vars = T * n + T;
  auto xi = [n](std::size_t t, std::size_t i) { return t * n + i; };
  auto ui = [T, n](std::size_t t) { return T * n + t; };

  std::vector<double> c(vars, 0.0);
  for (std::size_t t = 0; t < T; ++t)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      c[xi(t, i)] = f[t] * types[t][i];
    }
    c[ui(t)] = -f[t];
  }
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (std::size_t k = 0; k < T * n; ++k)
  {
    std::vector<double> row(vars, 0.0);
    row[k] = 1.0;
    A.push_back(std::move(row));
    b.push_back(1.0);
  }

  // u_s - u_t + (t - s).x_s <= 0: type t does not envy type s
  auto ic_gap = [&](const std::vector<double> &x, std::size_t t, std::size_t s) {
    double g = x[ui(s)] - x[ui(t)];
    for (std::size_t i = 0; i < n; ++i)
    {
      g += (types[t][i] - types[s][i]) * x[xi(s, i)];
    }
    return g;
  };

  // cut k (row T*n + k) is the pair cut_pair[k]; present marks the pairs currently in the tableau
  std::vector<std::pair<std::size_t, std::size_t>> cut_pair;
  std::vector<char> present(T * T, 0);
  std::size_t const base_rows = A.size();
  auto cut_row = [&](std::size_t t, std::size_t s) {
    std::vector<double> row(vars, 0.0);
    row[ui(s)] += 1.0;
    row[ui(t)] -= 1.0;
    for (std::size_t i = 0; i < n; ++i)
    {
      row[xi(s, i)] += types[t][i] - types[s][i];
    }
    return row;
  };
  // rebuild from the bounds and the cuts still present
  auto cold = [&] {
    std::vector<std::vector<double>> rows(A.begin(), A.begin() + static_cast<std::ptrdiff_t>(base_rows));
    std::vector<double> rhs(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(base_rows));
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    for (auto const &[t, s] : cut_pair)
    {
      if (present[t * T + s])
      {
        rows.push_back(cut_row(t, s));
        rhs.push_back(0.0);
        kept.push_back({t, s});
      }
    }
    cut_pair = std::move(kept);
    IncrementalLp fresh(rows, rhs, c);
    LpResult r = fresh.solve();
    return std::make_pair(std::move(fresh), r);
  };

  IncrementalLp lp(A, b, c);
  LpResult res = lp.solve();
  for (std::size_t round = 0;; ++round)
  {
    if (round == kMaxRounds)
    {
      throw InternalError("rev_lp: constraint generation did not converge");
    }
    if (res.status != LpResult::Status::optimal)
    {
      auto fresh = cold();
      lp = std::move(fresh.first);
      res = fresh.second;
    }
    if (res.status != LpResult::Status::optimal)
    {
      throw InternalError("rev_lp: simplex did not reach an optimum (status " +
                          std::to_string(static_cast<int>(res.status)) + ", round " + std::to_string(round) + ")");
    }
    std::vector<std::vector<double>> cuts_A;
    std::vector<double> cuts_b;
    for (std::size_t t = 0; t < T; ++t)
    {
      std::vector<std::pair<double, std::size_t>> cuts;
      for (std::size_t s = 0; s < T; ++s)
      {
        double const g = s == t || present[t * T + s] ? 0.0 : ic_gap(res.x, t, s);
        if (g > kCutTol)
        {
          cuts.emplace_back(-g, s);
        }
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.resize(std::min(cuts.size(), kCutsPerType));
      for (auto const &[g, s] : cuts)
      {
        present[t * T + s] = 1;
        cut_pair.push_back({t, s});
        cuts_A.push_back(cut_row(t, s));
        cuts_b.push_back(0.0);
      }
    }
    if (cuts_A.empty())
    {
      break;
    }
    // slack cuts leave before the new ones come in; the pair may return later
    if (round > 0)
    {
      for (std::size_t k : lp.prune(base_rows, kPruneSlack))
      {
        auto const [t, s] = cut_pair[k - base_rows];
        present[t * T + s] = 0;
      }
    }
    res = lp.add_rows(cuts_A, cuts_b);
  }

  MenuMechanism menu;
  menu.types = types;
  menu.probs = f;
  menu.alloc.assign(T, std::vector<double>(n));
  menu.pay.assign(T, 0.0);
  for (std::size_t t = 0; t < T; ++t)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      menu.alloc[t][i] = std::clamp(res.x[xi(t, i)], 0.0, 1.0);
    }
    menu.pay[t] = dot(types[t], menu.alloc[t]) - std::max(res.x[ui(t)], 0.0);
    menu.objective += f[t] * menu.pay[t];
  }
  if (double const v = menu.max_violation(); v > kMenuTol)
  {
    throw InternalError("rev_lp: menu fails IC/IR certification by " + std::to_string(v));
  }
  return menu;
}

MenuMechanism rev_lp(const MarketInstance &inst, std::size_t type_cap)
{
  return rev_lp(inst.to_joint(type_cap), type_cap);
}

JointDist joint_product(const JointDist &a, const JointDist &b, std::size_t support_cap)
{
  if (a.size() > support_cap / b.size())
  {
    throw SizeError("joint support", a.size() * b.size(), support_cap);
  }
  std::vector<std::vector<double>> points;
  std::vector<double> probs;
  points.reserve(a.size() * b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
  {
    for (std::size_t l = 0; l < b.size(); ++l)
    {
      std::vector<double> p = a.point(k);
      p.insert(p.end(), b.point(l).begin(), b.point(l).end());
      points.push_back(std::move(p));
      probs.push_back(a.probs()[k] * b.probs()[l]);
    }
  }
  return JointDist(std::move(points), std::move(probs));
}

double welfare(const JointDist &joint)
{
  double w = 0.0;
  for (std::size_t k = 0; k < joint.size(); ++k)
  {
    w += joint.probs()[k] * std::accumulate(joint.point(k).begin(), joint.point(k).end(), 0.0);
  }
  return w;
}

MarginalReport check_marginal_mechanism(const JointDist &a, const JointDist &b)
{
  MarginalReport r;
  r.lhs = rev_lp(joint_product(a, b, kRevTypeCap)).objective;
  r.rhs = welfare(a) + rev_lp(b).objective;
  r.pass = r.lhs <= r.rhs + 1e-6;
  return r;
}

RevVsSrevReport check_rev_vs_srev(const MarketInstance &inst)
{
  if (inst.n_buyers() != 1)
  {
    throw PreconditionError("check_rev_vs_srev needs a single buyer");
  }
  RevVsSrevReport r;
  r.rev = rev_lp(inst).objective;
  r.srev = srev(inst).value;
  r.n = inst.n_items();
  double const n = static_cast<double>(r.n);
  r.within_n = r.rev <= n * r.srev + 1e-6;
  r.within_log = r.rev <= (std::log(n) + 3.0) * r.srev + 1e-6;
  return r;
}

StitchReport check_subdomain_stitching(const JointDist &joint, const std::vector<std::size_t> &part)
{
  if (part.size() != joint.size())
  {
    throw ValidationError("part", "need one label per support point");
  }
  std::size_t const k = part.empty() ? 0 : *std::max_element(part.begin(), part.end()) + 1;
  StitchReport r;
  r.rev = rev_lp(joint).objective;
  r.mass.assign(k, 0.0);
  r.stitched = 0.0;
  for (std::size_t s = 0; s < k; ++s)
  {
    std::vector<std::vector<double>> points;
    std::vector<double> probs;
    for (std::size_t t = 0; t < joint.size(); ++t)
    {
      if (part[t] == s)
      {
        points.push_back(joint.point(t));
        probs.push_back(joint.probs()[t]);
        r.mass[s] += joint.probs()[t];
      }
    }
    if (points.empty())
    {
      continue;
    }
    for (double &p : probs)
    {
      p /= r.mass[s];
    }
    r.stitched += r.mass[s] * rev_lp(JointDist(std::move(points), std::move(probs))).objective;
  }
  r.pass = r.stitched >= r.rev - 1e-6;
  return r;
}

}  // namespace mechrev
