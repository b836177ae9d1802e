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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mechrev/instance.hpp"

namespace mechrev {

enum class ThresholdMode
{
  uniform,            // t_i = c n
  uniform_amplified,  // t_i = c a n
  adaptive            // t_i = c r / r_i
};

struct ThresholdSpec
{
  ThresholdMode mode = ThresholdMode::adaptive;
  double c = 1.0;
  double a = 1.0;
};

/// Split of each item's highest value v*_i at t_i r_i.
struct CoreTailSplit
{
  ThresholdSpec spec;
  std::vector<double> r_item;
  double r = 0.0;
  std::vector<double> t;
  std::vector<double> thresholds;
  std::vector<double> p;
  std::vector<std::optional<DiscreteDist>> core;
  std::vector<std::optional<DiscreteDist>> tail;

  std::size_t n() const noexcept
  {
    return r_item.size();
  }
  /// p_i <= 1/t_i on every item.
  bool ly1_holds(double tol = 1e-12) const;
  /// Sum of core welfares, i.e. the welfare of the all-core product.
  double core_welfare() const;
};

/// Independent instance, any number of buyers (v*_i folds max over buyers).
CoreTailSplit build_split(const MarketInstance &inst, ThresholdSpec spec);

inline constexpr std::size_t kTailItemCap = 16;

struct TailEvent
{
  std::vector<std::size_t> items;
  double p = 0.0;
};

/// Every A with p_A > 0. Throws SizeError past kTailItemCap uncertain items.
std::vector<TailEvent> tail_events(const CoreTailSplit &split);

/// Product of the tails of the items in A.
JointDist tail_product(const CoreTailSplit &split, const std::vector<std::size_t> &items);

using RevOracle = std::function<double(const JointDist &)>;

/// rev_lp objective.
double lp_rev(const JointDist &joint);

struct Ly2Check
{
  std::size_t item;
  std::optional<double> core_rev;  // <= r_i
  std::optional<double> tail_rev;  // <= r_i / p_i
  bool pass;
};

struct DecompositionReport
{
  double lhs;           // Rev(D)
  double core_welfare;  // Welfare(D_0^C)
  double tail_sum;      // sum_A p_A Rev(D_A^T)
  double rhs;
  double p_total;       // sum_A p_A
  bool pass;
  std::vector<Ly2Check> ly2;
  bool ly2_pass;
};

/// Single-buyer instance; every revenue goes through `oracle`.
DecompositionReport core_decomposition_bound(const MarketInstance &inst, const CoreTailSplit &split,
                                             const RevOracle &oracle = lp_rev);

struct BoundCheck
{
  std::string name;
  double value;
  double bound;
  bool applicable;
  bool pass;
};

/// Tail sum against the bound for the split's mode. The amplified form is
/// only asserted when Rev <= a n SRev.
BoundCheck tail_bound_check(const CoreTailSplit &split, const DecompositionReport &rep, double srev);

/// Core welfare against the bound for the split's mode; the adaptive c = 1
/// form compares Welfare(D_0^C) / 4 with max(SRev, BRev).
BoundCheck core_welfare_bound_check(const CoreTailSplit &split, double srev, double brev);

/// Var(d) <= (2t - 1) c^2 for d on [0, t c] with monopoly revenue <= c.
BoundCheck variance_bound_check(const DiscreteDist &d, double c, double t);

/// Var(core_i) <= 2 t_i r_i^2 for every non-null core.
std::vector<BoundCheck> core_variance_checks(const CoreTailSplit &split);

/// Mass of `welfare_dist` in [C/2, 3C/2].
double concentration_report(const DiscreteDist &welfare_dist, double C);

struct ManyMaxReport
{
  double c;
  double srev;
  double core_welfare;
  double center;
  double mass;             // concentration around center
  double rev_surrogate;    // (2 + 2e^{1/4} + ln 4 + ln n) SRev, an upper bound on Rev
  double mass_required;    // 3/4 - 24/c^2
  bool revenue_branch;     // (c + 5) SRev >= surrogate
  bool concentration_branch;
  bool pass;
};

ManyMaxReport many_max_check(const MarketInstance &inst, double c, std::size_t support_cap = 1'000'000);

struct AmplificationReport
{
  double a;
  double c;
  double rev;
  double srev;
  bool premise;     // Rev <= a n SRev
  bool conclusion;  // Rev <= (2 + 2e^{1/(ca)}/c + ln c + ln a + ln n) SRev
  bool pass;
};

AmplificationReport amplification_check(const MarketInstance &inst, double a, double c = 1.0,
                                        const RevOracle &oracle = lp_rev);

}  // namespace mechrev
