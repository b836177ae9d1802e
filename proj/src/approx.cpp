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

#include "mechrev/approx.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "mechrev/error.hpp"
#include "mechrev/opt_rev.hpp"
#include "mechrev/rng.hpp"
#include "mechrev/simple_rev.hpp"

namespace mechrev {

void to_json(nlohmann::json &j, const ApproxDecision &d)
{
  j = nlohmann::json{{"epsilon", d.epsilon},
                     {"srev", d.srev},
                     {"core_welfare", d.core_welfare},
                     {"p_star", d.p_star},
                     {"q_hat", d.q_hat},
                     {"choice", d.choice == ApproxDecision::Choice::bundle ? "bundle" : "separate"},
                     {"samples_used", d.samples_used},
                     {"sample_floor", kApproxSampleFloor},
                     {"sample_floor_applied", d.sample_floor_applied},
                     {"seed", d.seed},
                     {"est_revenue", d.est_revenue}};
}

void to_json(nlohmann::json &j, const DecisionReport &r)
{
  j = nlohmann::json{{"chosen_revenue", r.chosen_revenue},
                     {"rev", r.rev},
                     {"ratio", r.ratio},
                     {"required", r.required},
                     {"pass", r.pass}};
}

std::uint64_t approx_sample_count(std::size_t n, double epsilon)
{
  double const raw = std::ceil(std::log(static_cast<double>(n)) / (epsilon * epsilon));
  return std::max<std::uint64_t>(static_cast<std::uint64_t>(std::max(raw, 0.0)), kApproxSampleFloor);
}

ApproxDecision run_approx(const MarketInstance &inst, double epsilon, std::uint64_t seed)
{
  if (!(epsilon > 0.0))
  {
    throw ValidationError("epsilon", "must be positive");
  }
  if (inst.n_buyers() != 1 || inst.is_correlated())
  {
    throw PreconditionError("approximation mechanism needs an independent single-buyer instance");
  }
  ApproxDecision d;
  d.epsilon = epsilon;
  d.seed = seed;

  CoreTailSplit const split = build_split(inst, {ThresholdMode::adaptive, 1.0, 1.0});
  d.srev = split.r;
  d.core_welfare = split.core_welfare();
  d.p_star = 0.4 * d.core_welfare;

  std::size_t const n = inst.n_items();
  d.samples_used = approx_sample_count(n, epsilon);
  d.sample_floor_applied = d.samples_used == kApproxSampleFloor &&
                           std::ceil(std::log(static_cast<double>(n)) / (epsilon * epsilon)) < kApproxSampleFloor;
  std::vector<DiscreteDist> const items = inst.buyer_items(0);
  auto counts = parallel_chunks(d.samples_used, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t hits = 0;
    for (std::uint64_t k = begin; k < end; ++k)
    {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i)
      {
        sum += items[i].quantile(counter_uniform(seed, i, k));
      }
      hits += at_least(sum, d.p_star) ? 1 : 0;
    }
    return hits;
  });
  std::uint64_t const hits = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  d.q_hat = static_cast<double>(hits) / static_cast<double>(d.samples_used);

  if (d.q_hat < 47.0 / 72.0 || d.q_hat * d.p_star < d.srev)
  {
    d.choice = ApproxDecision::Choice::separate;
    d.est_revenue = d.srev;
  }
  else
  {
    d.choice = ApproxDecision::Choice::bundle;
    d.est_revenue = d.q_hat * d.p_star;
  }
  return d;
}

double bundle_price_rev(const MarketInstance &inst, double p)
{
  std::vector<std::size_t> all(inst.n_items());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return p * bundle_distributions(inst, all).front().prob_at_least(p);
}

DecisionReport evaluate_decision(const ApproxDecision &decision, const MarketInstance &inst, const RevOracle &oracle)
{
  DecisionReport r{};
  r.chosen_revenue = decision.choice == ApproxDecision::Choice::separate ? srev(inst).value
                                                                         : bundle_price_rev(inst, decision.p_star);
  r.rev = oracle(inst.to_joint(kRevTypeCap));
  if (r.chosen_revenue > 0.0)
  {
    r.ratio = r.rev / r.chosen_revenue;
  }
  else
  {
    r.ratio = r.rev > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  r.required = r.rev / (6.0 * (1.0 + decision.epsilon));
  r.pass = r.chosen_revenue >= r.required - 1e-6;
  return r;
}

}  // namespace mechrev
