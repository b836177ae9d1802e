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

#include <cstddef>

#include <json.hpp>

#include "mechrev/instance.hpp"

namespace mechrev {

/// SRev and BRev of a single buyer with an explicit joint.
double joint_srev(const JointDist &joint);
double joint_brev(const JointDist &joint);

struct PointMassReduction
{
  double price;  // lowest optimal grand-bundle price
  double q;      // Pr[sum >= price]
  JointDist lowered;      // sums below the price zeroed, sums above lowered to it
  JointDist conditioned;  // lowered | sum = price
};

/// Lowering takes the largest coordinate down first (ties: lower index),
/// then the next, until the sum equals the price.
PointMassReduction to_pointmass_in_sum(const JointDist &joint);

/// Uniform mixture over all n! coordinate permutations (n <= 6).
JointDist symmetrize(const JointDist &joint, std::size_t support_budget = 1'000'000);

struct CorBoundReport
{
  double brev;
  double srev;
  double bound;  // 5 ln(n) SRev
  bool pass;
};

void to_json(nlohmann::json &j, const CorBoundReport &r);

CorBoundReport check_cor_bound(const JointDist &joint);

struct PointMassWelfareReport
{
  double p;      // common value sum after scaling SRev to n
  double limit;  // n + n ln p
  bool pass;
};

void to_json(nlohmann::json &j, const PointMassWelfareReport &r);

/// For a point-mass-in-sum joint, rescaled so SRev = n: p <= n + n ln p.
PointMassWelfareReport check_pointmass_welfare(const JointDist &joint);

}  // namespace mechrev
