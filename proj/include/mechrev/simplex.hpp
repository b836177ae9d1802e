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
#include <memory>
#include <vector>

namespace mechrev {

/// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0.
struct LpResult
{
  enum class Status
  {
    optimal,
    infeasible,
    unbounded,
    iteration_limit
  };
  Status status = Status::optimal;
  double value = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

struct LpOptions
{
  double eps = 1e-9;
  std::size_t max_pivots = 1'000'000;
  /// Dantzig pivots without objective progress before entering columns are drawn at random.
  std::size_t stall_limit = 50;
  /// Scale of the rhs jitter that breaks degenerate ties; solutions are read off the exact rhs.
  double perturb = 1e-7;
};

/// Keeps the tableau between solves so that rows added after an optimum are handled
/// by dual simplex from the previous basis.
class IncrementalLp
{
public:
  IncrementalLp(const std::vector<std::vector<double>> &A, const std::vector<double> &b,
                const std::vector<double> &c, const LpOptions &opt = {});
  ~IncrementalLp();
  IncrementalLp(IncrementalLp &&) noexcept;
  IncrementalLp &operator=(IncrementalLp &&) noexcept;

  LpResult solve();
  /// Appends rows a.x <= b; the last solve must have been optimal.
  LpResult add_rows(const std::vector<std::vector<double>> &A, const std::vector<double> &b);
  /// Removes rows past the first `keep_first` whose slack is basic and exceeds `tol`.
  /// Rows are numbered in the order they were supplied.
  std::vector<std::size_t> prune(std::size_t keep_first, double tol);
  std::size_t rows() const noexcept;

private:
  class Tableau;
  std::unique_ptr<Tableau> t_;
};

LpResult solve_lp(const std::vector<std::vector<double>> &A, const std::vector<double> &b,
                  const std::vector<double> &c, const LpOptions &opt = {});

}  // namespace mechrev
