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

#include "mechrev/single_item.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mechrev {

RevenueCurve revenue_curve(const DiscreteDist &d)
{
  std::size_t const n = d.size();
  RevenueCurve c;
  c.q.assign(n + 1, 0.0);
  c.revenue.assign(n + 1, 0.0);
  double tail = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
  {
    std::size_t const a = n - k;
    tail += d.probs()[a];
    c.q[k] = k == n ? 1.0 : tail;
    c.revenue[k] = d.support()[a] * c.q[k];
  }
  return c;
}

IronedVirtuals ironed_virtuals(const DiscreteDist &d)
{
  RevenueCurve const c = revenue_curve(d);
  std::size_t const n = d.size();

  // upper hull over the curve points, left to right
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k <= n; ++k)
  {
    while (hull.size() >= 2)
    {
      std::size_t const a = hull[hull.size() - 2];
      std::size_t const b = hull.back();
      double const cross =
        (c.q[b] - c.q[a]) * (c.revenue[k] - c.revenue[a]) - (c.revenue[b] - c.revenue[a]) * (c.q[k] - c.q[a]);
      if (cross < 0.0)
      {
        break;
      }
      hull.pop_back();
    }
    hull.push_back(k);
  }

  IronedVirtuals out;
  out.phi.assign(n, 0.0);
  out.ironed.assign(n, false);
  std::size_t h = 0;
  for (std::size_t k = 1; k <= n; ++k)
  {
    while (hull[h + 1] < k)
    {
      ++h;
    }
    std::size_t const a = hull[h];
    std::size_t const b = hull[h + 1];
    double const slope = (c.revenue[b] - c.revenue[a]) / (c.q[b] - c.q[a]);
    out.phi[n - k] = slope;
    out.ironed[n - k] = b - a > 1;
  }
  // top-down slopes are nonincreasing in q, so nondecreasing in value;
  // enforce it against rounding
  for (std::size_t a = 1; a < n; ++a)
  {
    out.phi[a] = std::max(out.phi[a], out.phi[a - 1]);
  }
  return out;
}

MonopolyPrice monopoly_price(const DiscreteDist &d)
{
  std::vector<double> tail(d.size());
  double acc = 0.0;
  for (std::size_t a = d.size(); a-- > 0;)
  {
    acc += d.probs()[a];
    tail[a] = a == 0 ? 1.0 : acc;
  }
  MonopolyPrice best{d.support()[0], -1.0};
  double max_rev = -1.0;
  for (std::size_t a = 0; a < d.size(); ++a)
  {
    double const rev = d.support()[a] * tail[a];
    if (rev > best.revenue && !same_value(rev, best.revenue))
    {
      best = {d.support()[a], rev};
    }
    max_rev = std::max(max_rev, rev);
  }
  best.revenue = max_rev;
  return best;
}

RevenueEstimate optimal_item_rev(std::span<const DiscreteDist> bidders)
{
  if (bidders.empty())
  {
    throw ValidationError("bidders", "need at least one bidder");
  }
  struct Virtuals
  {
    std::vector<double> phi;
    std::vector<double> prob;
  };
  std::vector<Virtuals> vs;
  vs.reserve(bidders.size());
  std::vector<double> levels;
  for (const DiscreteDist &d : bidders)
  {
    IronedVirtuals iv = ironed_virtuals(d);
    for (double x : iv.phi)
    {
      if (x > 0.0)
      {
        levels.push_back(x);
      }
    }
    vs.push_back({std::move(iv.phi), std::vector<double>(d.probs().begin(), d.probs().end())});
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // E[max(0, M)] = sum over level gaps of (z_k - z_{k-1}) Pr[M > z_{k-1}],
  // with Pr[M > z] = 1 - prod_j (1 - Pr[phi_j > z]) kept accurate for tiny tails
  std::vector<std::vector<double>> above(vs.size());
  for (std::size_t j = 0; j < vs.size(); ++j)
  {
    auto &up = above[j];
    up.assign(vs[j].phi.size() + 1, 0.0);
    for (std::size_t a = vs[j].phi.size(); a-- > 0;)
    {
      up[a] = up[a + 1] + vs[j].prob[a];
    }
  }
  std::vector<std::size_t> pos(vs.size(), 0);
  double revenue = 0.0;
  double prev = 0.0;
  for (double z : levels)
  {
    double log_none = 0.0;
    for (std::size_t j = 0; j < vs.size(); ++j)
    {
      while (pos[j] < vs[j].phi.size() && vs[j].phi[pos[j]] <= prev)
      {
        ++pos[j];
      }
      log_none += std::log1p(-std::min(above[j][pos[j]], 1.0));
    }
    revenue += (z - prev) * -std::expm1(log_none);
    prev = z;
  }
  return RevenueEstimate::exact(revenue);
}

double posted_price_rev(std::span<const DiscreteDist> bidders, double p)
{
  if (!(p >= 0.0))
  {
    throw ValidationError("p", "price must be nonnegative");
  }
  double none = 1.0;
  for (const DiscreteDist &d : bidders)
  {
    none *= 1.0 - d.prob_at_least(p);
  }
  return p * (1.0 - none);
}

double posted_profile_rev(std::span<const double> values, double p)
{
  for (double v : values)
  {
    if (at_least(v, p))
    {
      return p;
    }
  }
  return 0.0;
}

double second_price_profile_rev(std::span<const double> values, double p)
{
  std::size_t willing = 0;
  double first = -1.0;
  double second = -1.0;
  for (double v : values)
  {
    if (!at_least(v, p))
    {
      continue;
    }
    ++willing;
    if (v > first)
    {
      second = first;
      first = v;
    }
    else if (v > second)
    {
      second = v;
    }
  }
  if (willing == 0)
  {
    return 0.0;
  }
  if (willing == 1)
  {
    return p;
  }
  return std::max(second, p);
}

double second_price_reserve_rev(std::span<const DiscreteDist> bidders, double p, std::size_t profile_cap)
{
  if (!(p >= 0.0))
  {
    throw ValidationError("p", "reserve must be nonnegative");
  }
  double total = 0.0;
  double comp = 0.0;
  for_each_profile(bidders, profile_cap, [&](std::span<const double> values, double prob) {
    double const y = prob * second_price_profile_rev(values, p) - comp;
    double const t = total + y;
    comp = (t - total) - y;
    total = t;
  });
  return total;
}

SplitAudit audit_split(std::span<const DiscreteDist> bidders, double p, std::size_t profile_cap)
{
  SplitAudit audit;
  audit.worst_slack = std::numeric_limits<double>::infinity();
  for_each_profile(bidders, profile_cap, [&](std::span<const double> values, double) {
    double const lhs = second_price_profile_rev(values, p);
    double const rhs = posted_profile_rev(values, p) + second_price_profile_rev(values, 0.0);
    audit.worst_slack = std::min(audit.worst_slack, rhs - lhs);
    ++audit.profiles;
  });
  audit.pass = audit.worst_slack >= -kValueTol * std::max(1.0, p);
  return audit;
}

}  // namespace mechrev
