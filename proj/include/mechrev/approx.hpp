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

#pragma once

#include <cstdint>

#include <json.hpp>

#include "mechrev/core_tail.hpp"
#include "mechrev/instance.hpp"

namespace mechrev {

inline constexpr std::uint64_t kApproxSampleFloor = 100;

struct ApproxDecision
{
  enum class Choice
  {
    separate,
    bundle
  };

  double epsilon = 0.0;
  double srev = 0.0;
  double core_welfare = 0.0;
  double p_star = 0.0;
  double q_hat = 0.0;
  Choice choice = Choice::separate;
  std::uint64_t samples_used = 0;
  bool sample_floor_applied = false;
  std::uint64_t seed = 0;
  double est_revenue = 0.0;
};

void to_json(nlohmann::json &j, const ApproxDecision &d);

/// max(ceil(ln n / eps^2), kApproxSampleFloor).
std::uint64_t approx_sample_count(std::size_t n, double epsilon);

/// Sell separately, or sell the grand bundle at p* = (2/5) Welfare(D_0^C).
ApproxDecision run_approx(const MarketInstance &inst, double epsilon, std::uint64_t seed);

struct DecisionReport
{
  double chosen_revenue;
  double rev;
  double ratio;  // rev / chosen
  double required;
  bool pass;
};

void to_json(nlohmann::json &j, const DecisionReport &r);

/// Exact revenue of the chosen mechanism against the oracle's Rev.
DecisionReport evaluate_decision(const ApproxDecision &decision, const MarketInstance &inst,
                                 const RevOracle &oracle = lp_rev);

/// p Pr[sum_i v_i >= p] for a single buyer, exactly.
double bundle_price_rev(const MarketInstance &inst, double p);

}  // namespace mechrev
