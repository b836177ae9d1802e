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

#include "mechrev/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "mechrev/error.hpp"
#include "mechrev/rng.hpp"

namespace mechrev {

namespace {

DiscreteDist set_value(const std::vector<DiscreteDist> &items, const std::vector<std::size_t> &S)
{
  DiscreteDist acc = DiscreteDist::point_mass(0.0);
  for (std::size_t i : S)
  {
    acc = convolve(acc, items.at(i));
  }
  return acc;
}

DiscreteDist highest(std::span<const DiscreteDist> bidders)
{
  DiscreteDist acc = bidders.front();
  for (std::size_t j = 1; j < bidders.size(); ++j)
  {
    acc = max_dist(acc, bidders[j]);
  }
  return acc;
}

std::vector<double> price_grid(std::span<const DiscreteDist> bidders)
{
  std::vector<double> grid{0.0};
  for (const DiscreteDist &d : bidders)
  {
    grid.insert(grid.end(), d.support().begin(), d.support().end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return same_value(a, b); }), grid.end());
  return grid;
}

void require_bidders(std::span<const DiscreteDist> bidders)
{
  if (bidders.empty())
  {
    throw ValidationError("bidders", "need at least one bidder");
  }
}

}  // namespace

void PricingScheme::validate(std::size_t n_items) const
{
  if (items.empty())
  {
    throw ValidationError("items", "scheme must contain an item");
  }
  if (!(price >= 0.0))
  {
    throw ValidationError("price", "must be nonnegative");
  }
  for (std::size_t i : items)
  {
    if (i >= n_items)
    {
      throw ValidationError("items", "item " + std::to_string(i) + " out of range");
    }
  }
}

void to_json(nlohmann::json &j, const PricingScheme &s)
{
  j = nlohmann::json{{"items", s.items}, {"price", s.price}};
}

double purchase_prob(const std::vector<DiscreteDist> &items, const PricingScheme &scheme)
{
  scheme.validate(items.size());
  return set_value(items, scheme.items).prob_at_least(scheme.price);
}

void to_json(nlohmann::json &j, const BundleResult &r)
{
  j = nlohmann::json{{"q", r.q},
                     {"c", r.c},
                     {"c1", r.c1},
                     {"d", r.d},
                     {"combined", r.combined},
                     {"revenue", r.revenue},
                     {"guarantee_c1", r.guarantee_c1},
                     {"guarantee_c", r.guarantee_c},
                     {"pass", r.pass},
                     {"markov", {{"applicable", r.markov_applicable},
                                 {"lhs", r.markov_lhs},
                                 {"rhs", r.markov_rhs},
                                 {"pass", r.markov_pass}}}};
}

BundleResult bundle_combine(const std::vector<PricingScheme> &schemes, const std::vector<DiscreteDist> &items,
                            double c1)
{
  if (schemes.empty())
  {
    throw ValidationError("schemes", "need at least one scheme");
  }
  if (!(c1 > 0.0 && c1 <= 1.0))
  {
    throw ValidationError("c1", "must lie in (0, 1]");
  }
  std::vector<bool> used(items.size(), false);
  BundleResult r;
  r.c1 = c1;
  double sum_p = 0.0;
  double sum_qp = 0.0;
  DiscreteDist x = DiscreteDist::point_mass(0.0);
  for (std::size_t k = 0; k < schemes.size(); ++k)
  {
    const PricingScheme &s = schemes[k];
    s.validate(items.size());
    for (std::size_t i : s.items)
    {
      if (used[i])
      {
        throw ValidationError("schemes/" + std::to_string(k), "schemes overlap on item " + std::to_string(i));
      }
      used[i] = true;
      r.combined.items.push_back(i);
    }
    double const q = purchase_prob(items, s);
    if (q < c1 - kValueTol)
    {
      throw PreconditionError("scheme " + std::to_string(k) + " sells with probability " + std::to_string(q) +
                              " < c1 = " + std::to_string(c1));
    }
    r.q.push_back(q);
    sum_p += s.price;
    sum_qp += q * s.price;
    x = convolve(x, DiscreteDist::from_atoms({{0.0, 1.0 - q}, {s.price, q}}));
  }
  std::sort(r.combined.items.begin(), r.combined.items.end());
  double const s = std::sqrt(1.0 - c1);
  r.d = 1.0 - s;
  r.c = sum_p > 0.0 ? sum_qp / sum_p : 1.0;
  r.combined.price = r.d * sum_p;
  r.revenue = r.combined.price * purchase_prob(items, r.combined);
  // (1 - s) (c1 - 1 + s) / (c1 s) = (1 - s)^2 / c1
  r.guarantee_c1 = r.d * r.d / c1 * sum_qp;
  r.guarantee_c = r.c > 0.0 ? r.d * r.d / r.c * sum_qp : 0.0;
  r.pass = r.revenue >= r.guarantee_c1 - 1e-9;
  r.markov_applicable = r.d < r.c - kValueTol;
  if (r.markov_applicable)
  {
    r.markov_lhs = x.prob_at_least(r.d * sum_p);
    r.markov_rhs = (r.c - r.d) / (1.0 - r.d);
    r.markov_pass = r.markov_lhs >= r.markov_rhs - 1e-9;
  }
  return r;
}

void to_json(nlohmann::json &j, const ShatterResult &r)
{
  j = nlohmann::json{{"per_item", r.per_item}, {"revenues", r.revenues}, {"total", r.total}};
}

ShatterResult shatter(const PricingScheme &scheme, const std::vector<DiscreteDist> &items)
{
  scheme.validate(items.size());
  ShatterResult r;
  for (std::size_t i : scheme.items)
  {
    MonopolyPrice const m = monopoly_price(items[i]);
    r.per_item.push_back({{i}, m.price});
    r.revenues.push_back(m.revenue);
    r.total += m.revenue;
  }
  return r;
}

void to_json(nlohmann::json &j, const BrendanReport &r)
{
  nlohmann::json cases = nlohmann::json::array();
  for (const BrendanCase &c : r.cases)
  {
    cases.push_back({{"item", c.item}, {"j", c.j}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  }
  j = nlohmann::json{{"q", r.q}, {"q_half", r.q_half}, {"vacuous", r.vacuous}, {"cases", cases}, {"pass", r.pass}};
}

BrendanReport check_brendan(const std::vector<DiscreteDist> &items, const std::vector<std::size_t> &S, double p,
                            unsigned j_max)
{
  PricingScheme{S, p}.validate(items.size());
  BrendanReport r;
  DiscreteDist const V = set_value(items, S);
  r.q = V.prob_at_least(p);
  if (!(r.q > 0.0))
  {
    throw PreconditionError("Pr[V >= p] is zero");
  }
  r.q_half = V.prob_at_least(p / 2.0);
  r.vacuous = r.q_half > 2.0 * r.q + kValueTol;
  if (r.vacuous)
  {
    return r;
  }
  for (std::size_t i : S)
  {
    std::vector<std::size_t> others;
    std::copy_if(S.begin(), S.end(), std::back_inserter(others), [i](std::size_t k) { return k != i; });
    DiscreteDist const rest = set_value(items, others);
    const DiscreteDist &vi = items[i];
    for (unsigned j = 1; j <= j_max; ++j)
    {
      double const cut = p / std::ldexp(1.0, static_cast<int>(j));
      double joint = 0.0;
      for (std::size_t a = 0; a < vi.size(); ++a)
      {
        double const x = vi.support()[a];
        if (at_least(x, cut))
        {
          joint += vi.probs()[a] * (p - x <= 0.0 ? 1.0 : rest.prob_at_least(p - x));
        }
      }
      BrendanCase c{i, j, joint / r.q, 2.0 * vi.prob_at_least(cut) + vi.prob_at_least(p / 2.0) / r.q, true};
      c.pass = c.lhs <= c.rhs + 1e-9;
      r.pass = r.pass && c.pass;
      r.cases.push_back(c);
    }
  }
  return r;
}

double brev0(std::span<const DiscreteDist> bidders)
{
  require_bidders(bidders);
  if (bidders.size() < 2)
  {
    return 0.0;
  }
  std::vector<double> const levels = price_grid(bidders);
  double e = 0.0;
  for (std::size_t k = 1; k < levels.size(); ++k)
  {
    double const x = levels[k];
    // Pr[at most one bidder >= x]
    double none = 1.0;
    double one = 0.0;
    for (const DiscreteDist &d : bidders)
    {
      double const up = d.prob_at_least(x);
      one = one * (1.0 - up) + none * up;
      none *= 1.0 - up;
    }
    e += (x - levels[k - 1]) * std::max(0.0, 1.0 - none - one);
  }
  return e;
}

double random_reserve_exact(std::span<const DiscreteDist> bidders)
{
  require_bidders(bidders);
  DiscreteDist const top = highest(bidders);
  double rev = 0.0;
  for (std::size_t a = 0; a < top.size(); ++a)
  {
    double const x = top.support()[a];
    rev += top.probs()[a] * x * top.prob_at_least(x);
  }
  return rev;
}

void to_json(nlohmann::json &j, const ReserveReport &r)
{
  j = nlohmann::json{{"revenue", r.revenue}, {"brev0", r.brev0}, {"bound", r.bound}, {"pass", r.pass}};
}

ReserveReport random_reserve_check(std::span<const DiscreteDist> bidders)
{
  ReserveReport r;
  r.revenue = RevenueEstimate::exact(random_reserve_exact(bidders));
  r.brev0 = brev0(bidders);
  r.bound = 0.5 * r.brev0;
  r.pass = r.revenue.value >= r.bound - 1e-12;
  return r;
}

ReserveReport random_reserve_sim(std::span<const DiscreteDist> bidders, std::uint64_t trials, std::uint64_t seed)
{
  require_bidders(bidders);
  if (trials < 2)
  {
    throw ValidationError("trials", "need at least two trials");
  }
  struct Moments
  {
    double sum = 0.0;
    double sq = 0.0;
  };
  std::size_t const m = bidders.size();
  auto parts = parallel_chunks(trials, [&](std::uint64_t begin, std::uint64_t end) {
    Moments acc;
    for (std::uint64_t k = begin; k < end; ++k)
    {
      double real = 0.0;
      double reserve = 0.0;
      for (std::size_t j = 0; j < m; ++j)
      {
        real = std::max(real, bidders[j].quantile(counter_uniform(seed, 2 * j, k)));
        reserve = std::max(reserve, bidders[j].quantile(counter_uniform(seed, 2 * j + 1, k)));
      }
      double const rev = at_least(real, reserve) ? reserve : 0.0;
      acc.sum += rev;
      acc.sq += rev * rev;
    }
    return acc;
  });
  Moments total;
  for (const Moments &p : parts)
  {
    total.sum += p.sum;
    total.sq += p.sq;
  }
  double const t = static_cast<double>(trials);
  double const mean = total.sum / t;
  double const var = std::max(0.0, (total.sq - t * mean * mean) / (t - 1.0));
  ReserveReport r;
  r.revenue = RevenueEstimate::monte_carlo(mean, trials, std::sqrt(var / t), seed);
  r.brev0 = brev0(bidders);
  r.bound = 0.5 * r.brev0;
  r.pass = mean >= r.bound - 3.0 * r.revenue.std_error;
  return r;
}

void to_json(nlohmann::json &j, const CorollaryReport &r)
{
  j = nlohmann::json{{"best_auction", r.best_auction},
                     {"best_auction_price", r.best_auction_price},
                     {"best_posted", r.best_posted},
                     {"best_posted_price", r.best_posted_price},
                     {"pass", r.pass}};
}

CorollaryReport check_pricing_corollary(std::span<const DiscreteDist> bidders, std::size_t profile_cap)
{
  require_bidders(bidders);
  CorollaryReport r;
  for (double p : price_grid(bidders))
  {
    double const a = second_price_reserve_rev(bidders, p, profile_cap);
    double const b = posted_price_rev(bidders, p);
    if (a > r.best_auction)
    {
      r.best_auction = a;
      r.best_auction_price = p;
    }
    if (b > r.best_posted)
    {
      r.best_posted = b;
      r.best_posted_price = p;
    }
  }
  r.pass = r.best_auction <= 3.0 * r.best_posted + 1e-9;
  return r;
}

void to_json(nlohmann::json &j, const SplitReport &r)
{
  j = nlohmann::json{{"prices", r.prices}, {"profiles", r.profiles}, {"worst_slack", r.worst_slack}, {"pass", r.pass}};
}

SplitReport check_split(std::span<const DiscreteDist> bidders, std::size_t profile_cap)
{
  require_bidders(bidders);
  SplitReport r;
  r.prices = price_grid(bidders);
  r.worst_slack = std::numeric_limits<double>::infinity();
  for (double p : r.prices)
  {
    SplitAudit const a = audit_split(bidders, p, profile_cap);
    r.profiles += a.profiles;
    r.worst_slack = std::min(r.worst_slack, a.worst_slack);
    r.pass = r.pass && a.pass;
  }
  return r;
}

}  // namespace mechrev
