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

#include "mechrev/core_tail.hpp"

#include <cmath>

#include "mechrev/error.hpp"
#include "mechrev/opt_rev.hpp"
#include "mechrev/simple_rev.hpp"
#include "mechrev/single_item.hpp"

namespace mechrev {

namespace {

constexpr double kCheckTol = 1e-6;

DiscreteDist highest_value(const MarketInstance &inst, std::size_t item)
{
  const auto &bidders = inst.item_bidders(item);
  DiscreteDist acc = bidders.front();
  for (std::size_t j = 1; j < bidders.size(); ++j)
  {
    acc = max_dist(acc, bidders[j]);
  }
  return acc;
}

JointDist one_dim(const DiscreteDist &d)
{
  std::vector<std::vector<double>> points;
  for (double v : d.support())
  {
    points.push_back({v});
  }
  return JointDist(std::move(points), std::vector<double>(d.probs().begin(), d.probs().end()));
}

}  // namespace

bool CoreTailSplit::ly1_holds(double tol) const
{
  for (std::size_t i = 0; i < n(); ++i)
  {
    if (p[i] > 1.0 / t[i] + tol)
    {
      return false;
    }
  }
  return true;
}

double CoreTailSplit::core_welfare() const
{
  double w = 0.0;
  for (const auto &c : core)
  {
    if (c)
    {
      w += welfare(*c);
    }
  }
  return w;
}

CoreTailSplit build_split(const MarketInstance &inst, ThresholdSpec spec)
{
  if (inst.is_correlated())
  {
    throw PreconditionError("core/tail split needs independent items");
  }
  if (!(spec.c > 0.0))
  {
    throw ValidationError("c", "must be positive");
  }
  if (!(spec.a > 0.0))
  {
    throw ValidationError("a", "must be positive");
  }
  std::size_t const n = inst.n_items();
  CoreTailSplit s;
  s.spec = spec;
  s.r_item.resize(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    s.r_item[i] = optimal_item_rev(inst.item_bidders(i)).value;
    s.r += s.r_item[i];
  }
  double const nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    double t = 0.0;
    switch (spec.mode)
    {
    case ThresholdMode::uniform:
      t = spec.c * nd;
      break;
    case ThresholdMode::uniform_amplified:
      t = spec.c * spec.a * nd;
      break;
    case ThresholdMode::adaptive:
      if (!(s.r_item[i] > 0.0))
      {
        throw ValidationError("items/" + std::to_string(i), "zero revenue item cannot take an adaptive threshold");
      }
      t = spec.c * s.r / s.r_item[i];
      break;
    }
    s.t.push_back(t);
    // adaptive thresholds are c r by construction; avoid the round trip
    double const theta = spec.mode == ThresholdMode::adaptive ? spec.c * s.r : t * s.r_item[i];
    s.thresholds.push_back(theta);
    ConditionalSplit cs = condition_split(highest_value(inst, i), theta);
    s.p.push_back(cs.p_tail);
    s.core.push_back(std::move(cs.core));
    s.tail.push_back(std::move(cs.tail));
  }
  return s;
}

std::vector<TailEvent> tail_events(const CoreTailSplit &split)
{
  std::vector<std::size_t> sure;
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < split.n(); ++i)
  {
    if (!split.tail[i])
    {
      continue;
    }
    (split.core[i] ? open : sure).push_back(i);
  }
  if (open.size() > kTailItemCap)
  {
    throw SizeError("tail-subset enumeration over uncertain items", open.size(), kTailItemCap);
  }
  std::vector<TailEvent> events;
  for (std::uint32_t mask = 0; mask < (1U << open.size()); ++mask)
  {
    TailEvent e;
    e.p = 1.0;
    std::vector<bool> in(split.n(), false);
    for (std::size_t i : sure)
    {
      in[i] = true;
    }
    for (std::size_t k = 0; k < open.size(); ++k)
    {
      in[open[k]] = (mask >> k & 1U) != 0;
    }
    for (std::size_t i = 0; i < split.n(); ++i)
    {
      e.p *= in[i] ? split.p[i] : 1.0 - split.p[i];
      if (in[i])
      {
        e.items.push_back(i);
      }
    }
    events.push_back(std::move(e));
  }
  return events;
}

JointDist tail_product(const CoreTailSplit &split, const std::vector<std::size_t> &items)
{
  std::vector<DiscreteDist> parts;
  for (std::size_t i : items)
  {
    if (!split.tail.at(i))
    {
      throw PreconditionError("item " + std::to_string(i) + " has a null tail");
    }
    parts.push_back(*split.tail[i]);
  }
  return JointDist::product(parts, kRevTypeCap);
}

double lp_rev(const JointDist &joint)
{
  return rev_lp(joint).objective;
}

DecompositionReport core_decomposition_bound(const MarketInstance &inst, const CoreTailSplit &split,
                                             const RevOracle &oracle)
{
  if (inst.n_buyers() != 1)
  {
    throw PreconditionError("core decomposition check needs a single buyer");
  }
  DecompositionReport rep{};
  rep.lhs = oracle(inst.to_joint(kRevTypeCap));
  rep.core_welfare = split.core_welfare();
  rep.tail_sum = 0.0;
  rep.p_total = 0.0;
  for (const TailEvent &e : tail_events(split))
  {
    rep.p_total += e.p;
    if (!e.items.empty())
    {
      rep.tail_sum += e.p * oracle(tail_product(split, e.items));
    }
  }
  rep.rhs = rep.core_welfare + rep.tail_sum;
  rep.pass = rep.lhs <= rep.rhs + kCheckTol;

  rep.ly2_pass = true;
  for (std::size_t i = 0; i < split.n(); ++i)
  {
    Ly2Check c{i, std::nullopt, std::nullopt, true};
    if (split.core[i])
    {
      c.core_rev = oracle(one_dim(*split.core[i]));
      c.pass = c.pass && *c.core_rev <= split.r_item[i] + kCheckTol;
    }
    if (split.tail[i])
    {
      c.tail_rev = oracle(one_dim(*split.tail[i]));
      c.pass = c.pass && *c.tail_rev <= split.r_item[i] / split.p[i] + kCheckTol;
    }
    rep.ly2_pass = rep.ly2_pass && c.pass;
    rep.ly2.push_back(c);
  }
  return rep;
}

BoundCheck tail_bound_check(const CoreTailSplit &split, const DecompositionReport &rep, double srev)
{
  double const c = split.spec.c;
  BoundCheck b{"", rep.tail_sum, 0.0, true, true};
  switch (split.spec.mode)
  {
  case ThresholdMode::uniform:
    b.name = "tail <= (1 + 1/c) SRev";
    b.bound = (1.0 + 1.0 / c) * srev;
    break;
  case ThresholdMode::adaptive:
    b.name = c == 1.0 ? "tail <= 2 SRev" : "tail <= (1 + 1/c) SRev";
    b.bound = (1.0 + 1.0 / c) * srev;
    break;
  case ThresholdMode::uniform_amplified: {
    double const a = split.spec.a;
    b.name = "tail <= (1 + 2 e^{1/(ca)} / c) SRev";
    b.bound = (1.0 + 2.0 * std::exp(1.0 / (c * a)) / c) * srev;
    b.applicable = rep.lhs <= a * static_cast<double>(split.n()) * srev + kCheckTol;
    break;
  }
  }
  b.pass = !b.applicable || b.value <= b.bound + kCheckTol;
  return b;
}

BoundCheck core_welfare_bound_check(const CoreTailSplit &split, double srev, double brev)
{
  double const c = split.spec.c;
  double const ln_n = std::log(static_cast<double>(split.n()));
  BoundCheck b{"", split.core_welfare(), 0.0, true, true};
  switch (split.spec.mode)
  {
  case ThresholdMode::uniform:
    b.name = "core welfare <= (1 + ln c + ln n) SRev";
    b.bound = (1.0 + std::log(c) + ln_n) * srev;
    b.applicable = c >= 1.0;
    break;
  case ThresholdMode::uniform_amplified:
    b.name = "core welfare <= (1 + ln c + ln a + ln n) SRev";
    b.bound = (1.0 + std::log(c) + std::log(split.spec.a) + ln_n) * srev;
    b.applicable = c >= 1.0 && split.spec.a >= 1.0;
    break;
  case ThresholdMode::adaptive:
    b.name = "core welfare <= 4 max(SRev, BRev)";
    b.bound = 4.0 * std::max(srev, brev);
    b.applicable = c == 1.0;
    break;
  }
  b.pass = !b.applicable || b.value <= b.bound + kCheckTol;
  return b;
}

BoundCheck variance_bound_check(const DiscreteDist &d, double c, double t)
{
  if (!(c >= 0.0) || !(t >= 0.0))
  {
    throw ValidationError(c >= 0.0 ? "t" : "c", "must be nonnegative");
  }
  if (d.max() > t * c + kValueTol * std::max(1.0, t * c))
  {
    throw PreconditionError("distribution exceeds [0, t c]");
  }
  if (monopoly_price(d).revenue > c + kValueTol * std::max(1.0, c))
  {
    throw PreconditionError("monopoly revenue exceeds c");
  }
  BoundCheck b{"Var <= (2t - 1) c^2", variance(d), (2.0 * t - 1.0) * c * c, true, true};
  b.pass = b.value <= b.bound + 1e-9;
  return b;
}

std::vector<BoundCheck> core_variance_checks(const CoreTailSplit &split)
{
  std::vector<BoundCheck> out;
  for (std::size_t i = 0; i < split.n(); ++i)
  {
    if (!split.core[i])
    {
      continue;
    }
    double const ri = split.r_item[i];
    BoundCheck b{"Var(core_" + std::to_string(i) + ") <= 2 t_i r_i^2", variance(*split.core[i]),
                 2.0 * split.t[i] * ri * ri, true, true};
    b.pass = b.value <= b.bound + 1e-9;
    out.push_back(std::move(b));
  }
  return out;
}

double concentration_report(const DiscreteDist &welfare_dist, double C)
{
  double const lo = C / 2.0;
  double const hi = 1.5 * C;
  double mass = 0.0;
  for (std::size_t k = 0; k < welfare_dist.size(); ++k)
  {
    double const v = welfare_dist.support()[k];
    if (at_least(v, lo) && at_least(hi, v))
    {
      mass += welfare_dist.probs()[k];
    }
  }
  return std::min(mass, 1.0);
}

ManyMaxReport many_max_check(const MarketInstance &inst, double c, std::size_t support_cap)
{
  if (!(c >= 4.0 * std::sqrt(2.0) - 1e-12))
  {
    throw ValidationError("c", "must be at least 4 sqrt(2)");
  }
  CoreTailSplit const split = build_split(inst, {ThresholdMode::adaptive, 4.0, 1.0});
  std::vector<DiscreteDist> highest;
  for (std::size_t i = 0; i < inst.n_items(); ++i)
  {
    highest.push_back(highest_value(inst, i));
  }
  DiscreteDist const total = convolve_all(highest, support_cap);

  ManyMaxReport rep{};
  rep.c = c;
  rep.srev = split.r;
  rep.core_welfare = split.core_welfare();
  rep.center = rep.core_welfare;
  rep.mass = concentration_report(total, rep.center);
  double const n = static_cast<double>(inst.n_items());
  rep.rev_surrogate = (2.0 + 2.0 * std::exp(0.25) + std::log(4.0) + std::log(n)) * rep.srev;
  rep.mass_required = 0.75 - 24.0 / (c * c);
  rep.revenue_branch = (c + 5.0) * rep.srev >= rep.rev_surrogate - kCheckTol;
  rep.concentration_branch = rep.mass >= rep.mass_required - 1e-12;
  rep.pass = rep.revenue_branch || rep.concentration_branch;
  return rep;
}

AmplificationReport amplification_check(const MarketInstance &inst, double a, double c, const RevOracle &oracle)
{
  if (!(a > 1.0))
  {
    throw ValidationError("a", "must exceed 1");
  }
  if (!(c >= 1.0))
  {
    throw ValidationError("c", "must be at least 1");
  }
  AmplificationReport rep{};
  rep.a = a;
  rep.c = c;
  rep.rev = oracle(inst.to_joint(kRevTypeCap));
  rep.srev = srev(inst).value;
  double const n = static_cast<double>(inst.n_items());
  rep.premise = rep.rev <= a * n * rep.srev + kCheckTol;
  double const factor = 2.0 + 2.0 * std::exp(1.0 / (c * a)) / c + std::log(c) + std::log(a) + std::log(n);
  rep.conclusion = rep.rev <= factor * rep.srev + kCheckTol;
  rep.pass = !rep.premise || rep.conclusion;
  return rep;
}

}  // namespace mechrev
