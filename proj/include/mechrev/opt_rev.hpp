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
#include <vector>

#include <json.hpp>

#include "mechrev/instance.hpp"

namespace mechrev {

inline constexpr std::size_t kRevTypeCap = 512;
inline constexpr double kMenuTol = 1e-7;

/// Direct-revelation menu for one additive buyer.
struct MenuMechanism
{
  std::vector<std::vector<double>> types;
  std::vector<double> probs;
  std::vector<std::vector<double>> alloc;
  std::vector<double> pay;
  double objective = 0.0;

  /// Largest IC or IR violation (0 if none).
  double max_violation() const;
};

void to_json(nlohmann::json &j, const MenuMechanism &menu);

/// Optimal menu by linear programming. IC rows are added lazily until none
/// is violated; the result is re-checked at kMenuTol before returning.
MenuMechanism rev_lp(const JointDist &joint, std::size_t type_cap = kRevTypeCap);
MenuMechanism rev_lp(const MarketInstance &inst, std::size_t type_cap = kRevTypeCap);

/// Independent product of joints on disjoint item sets (a's items first).
JointDist joint_product(const JointDist &a, const JointDist &b, std::size_t support_cap);

/// Sum over items of expected value.
double welfare(const JointDist &joint);

struct MarginalReport
{
  double lhs;  // Rev(A x B)
  double rhs;  // Welfare(A) + Rev(B)
  bool pass;
};

MarginalReport check_marginal_mechanism(const JointDist &a, const JointDist &b);

struct RevVsSrevReport
{
  double rev;
  double srev;
  std::size_t n;
  bool within_n;    // rev <= n srev
  bool within_log;  // rev <= (ln n + 3) srev
};

RevVsSrevReport check_rev_vs_srev(const MarketInstance &inst);

struct StitchReport
{
  double rev;
  double stitched;  // sum_i s_i Rev(D | S_i)
  std::vector<double> mass;
  bool pass;
};

/// `part[k]` labels support point k of `joint`; labels are 0..parts-1.
StitchReport check_subdomain_stitching(const JointDist &joint, const std::vector<std::size_t> &part);

}  // namespace mechrev
