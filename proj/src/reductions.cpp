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

#include "mechrev/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mechrev/error.hpp"
#include "mechrev/single_item.hpp"

namespace mechrev {

double joint_srev(const JointDist &joint)
{
  double total = 0.0;
  for (std::size_t i = 0; i < joint.dim(); ++i)
  {
    total += monopoly_price(joint.marginal(i)).revenue;
  }
  return total;
}

double joint_brev(const JointDist &joint)
{
  return monopoly_price(joint.sum_all()).revenue;
}

PointMassReduction to_pointmass_in_sum(const JointDist &joint)
{
  DiscreteDist const sums = joint.sum_all();
  double const p = monopoly_price(sums).price;
  double const q = sums.prob_at_least(p);
  if (!(p > 0.0) || !(q > 0.0))
  {
    throw PreconditionError("grand bundle never sells at a positive price");
  }
  std::size_t const n = joint.dim();
  std::vector<std::vector<double>> lowered;
  std::vector<double> probs;
  std::vector<std::vector<double>> on_price;
  std::vector<double> on_price_probs;
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < joint.size(); ++k)
  {
    std::vector<double> v = joint.point(k);
    double const s = std::accumulate(v.begin(), v.end(), 0.0);
    if (!at_least(s, p))
    {
      std::fill(v.begin(), v.end(), 0.0);
    }
    else
    {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
      double excess = s - p;
      for (std::size_t i : order)
      {
        if (excess <= 0.0)
        {
          break;
        }
        double const cut = std::min(v[i], excess);
        v[i] -= cut;
        excess -= cut;
      }
      on_price.push_back(v);
      on_price_probs.push_back(joint.probs()[k] / q);
    }
    lowered.push_back(std::move(v));
    probs.push_back(joint.probs()[k]);
  }
  return PointMassReduction{p, q, JointDist(std::move(lowered), std::move(probs)),
                            JointDist(std::move(on_price), std::move(on_price_probs))};
}

JointDist symmetrize(const JointDist &joint, std::size_t support_budget)
{
  std::size_t const n = joint.dim();
  if (n > 6)
  {
    throw SizeError("symmetrize item count", n, 6);
  }
  std::size_t perms = 1;
  for (std::size_t k = 2; k <= n; ++k)
  {
    perms *= k;
  }
  if (joint.size() > support_budget / perms)
  {
    throw SizeError("symmetrized support", joint.size() * perms, support_budget);
  }
  std::vector<std::size_t> pi(n);
  std::iota(pi.begin(), pi.end(), std::size_t{0});
  std::vector<std::vector<double>> points;
  std::vector<double> probs;
  points.reserve(joint.size() * perms);
  do
  {
    for (std::size_t k = 0; k < joint.size(); ++k)
    {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i)
      {
        v[i] = joint.point(k)[pi[i]];
      }
      points.push_back(std::move(v));
      probs.push_back(joint.probs()[k] / static_cast<double>(perms));
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return JointDist(std::move(points), std::move(probs));
}

void to_json(nlohmann::json &j, const CorBoundReport &r)
{
  j = nlohmann::json{{"brev", r.brev}, {"srev", r.srev}, {"bound", r.bound}, {"pass", r.pass}};
}

CorBoundReport check_cor_bound(const JointDist &joint)
{
  if (joint.dim() < 2)
  {
    throw PreconditionError("the correlated bound needs at least two items");
  }
  CorBoundReport r;
  r.brev = joint_brev(joint);
  r.srev = joint_srev(joint);
  r.bound = 5.0 * std::log(static_cast<double>(joint.dim())) * r.srev;
  r.pass = r.brev <= r.bound + 1e-6;
  return r;
}

void to_json(nlohmann::json &j, const PointMassWelfareReport &r)
{
  j = nlohmann::json{{"p", r.p}, {"limit", r.limit}, {"pass", r.pass}};
}

PointMassWelfareReport check_pointmass_welfare(const JointDist &joint)
{
  DiscreteDist const sums = joint.sum_all();
  if (!sums.is_point_mass())
  {
    throw PreconditionError("joint is not point-mass in sum");
  }
  double const s = joint_srev(joint);
  if (!(s > 0.0))
  {
    throw PreconditionError("SRev is zero");
  }
  double const n = static_cast<double>(joint.dim());
  PointMassWelfareReport r;
  r.p = sums.min() * n / s;
  r.limit = n + n * std::log(r.p);
  r.pass = r.p <= r.limit + 1e-9 * std::max(1.0, r.p);
  return r;
}

}  // namespace mechrev
