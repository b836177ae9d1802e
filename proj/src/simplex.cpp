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

#include "mechrev/simplex.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <utility>

#include "mechrev/error.hpp"
#include "mechrev/rng.hpp"

namespace mechrev {

class IncrementalLp::Tableau
{
public:
  Tableau(const std::vector<std::vector<double>> &A, const std::vector<double> &b, const std::vector<double> &c,
          const LpOptions &opt)
    : m_(b.size())
    , n_(c.size())
    , opt_(opt)
    , nonbasic_(n_ + 1)
    , basic_(m_)
    , d_(m_ + 2, std::vector<double>(n_ + 3, 0.0))
  {
    for (std::size_t i = 0; i < m_; ++i)
    {
      if (A[i].size() != n_)
      {
        throw ValidationError("A", "row " + std::to_string(i) + " has the wrong width");
      }
      for (std::size_t j = 0; j < n_; ++j)
      {
        d_[i][j] = A[i][j];
      }
      basic_[i] = static_cast<long>(n_ + i);
      d_[i][n_] = -1.0;
      // column n_+1 drives the pivots on a perturbed rhs, n_+2 carries the true one
      d_[i][n_ + 1] = jittered(b[i], i);
      d_[i][n_ + 2] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j)
    {
      nonbasic_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  LpResult solve()
  {
    LpResult res;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
    {
      if (d_[i][n_ + 1] < d_[r][n_ + 1])
      {
        r = i;
      }
    }
    if (m_ > 0 && d_[r][n_ + 1] < -opt_.eps)
    {
      pivot(r, n_);
      auto const phase1 = run(2);
      if (phase1 == LpResult::Status::iteration_limit)
      {
        return finish(res, phase1);
      }
      if (phase1 != LpResult::Status::optimal || d_[m_ + 1][n_ + 1] < -opt_.eps)
      {
        return finish(res, LpResult::Status::infeasible);
      }
      for (std::size_t i = 0; i < m_; ++i)
      {
        if (basic_[i] == -1)
        {
          std::size_t s = 0;
          for (std::size_t j = 1; j <= n_; ++j)
          {
            if (better(d_[i], j, s))
            {
              s = j;
            }
          }
          pivot(i, s);
        }
      }
    }
    return finish(res, run(1));
  }

  LpResult::Status status() const noexcept
  {
    return status_;
  }

  std::size_t rows() const noexcept
  {
    return m_;
  }

  /// a.x <= b in terms of the current nonbasic variables; the new slack enters the basis.
  void add_row(const std::vector<double> &a, double b)
  {
    if (a.size() != n_)
    {
      throw ValidationError("A", "added row has the wrong width");
    }
    std::vector<double> row(n_ + 3, 0.0);
    for (std::size_t j = 0; j <= n_; ++j)
    {
      long const v = nonbasic_[j];
      if (v >= 0 && static_cast<std::size_t>(v) < n_)
      {
        row[j] = a[static_cast<std::size_t>(v)];
      }
    }
    row[n_ + 1] = jittered(b, next_slack_);
    row[n_ + 2] = b;
    for (std::size_t i = 0; i < m_; ++i)
    {
      long const v = basic_[i];
      if (v < 0 || static_cast<std::size_t>(v) >= n_)
      {
        continue;
      }
      double const w = a[static_cast<std::size_t>(v)];
      if (w == 0.0)
      {
        continue;
      }
      for (std::size_t j = 0; j < n_ + 3; ++j)
      {
        row[j] -= w * d_[i][j];
      }
    }
    d_.insert(d_.begin() + static_cast<std::ptrdiff_t>(m_), std::move(row));
    basic_.push_back(static_cast<long>(n_ + next_slack_));
    ++next_slack_;
    ++m_;
  }

  /// Drops added rows whose slack is basic and above `tol`; returns their sequence numbers.
  std::vector<std::size_t> prune(std::size_t keep_first, double tol)
  {
    std::vector<std::size_t> dropped;
    std::size_t w = 0;
    for (std::size_t i = 0; i < m_; ++i)
    {
      long const v = basic_[i];
      bool const slack = v >= 0 && static_cast<std::size_t>(v) >= n_ + keep_first;
      if (slack && d_[i][n_ + 1] > tol && d_[i][n_ + 2] > tol)
      {
        dropped.push_back(static_cast<std::size_t>(v) - n_);
        continue;
      }
      if (w != i)
      {
        d_[w] = std::move(d_[i]);
        basic_[w] = v;
      }
      ++w;
    }
    for (std::size_t k = 0; k < 2 && w != m_; ++k)
    {
      d_[w + k] = std::move(d_[m_ + k]);
    }
    d_.resize(w + 2);
    basic_.resize(w);
    m_ = w;
    return dropped;
  }

  LpResult reoptimize()
  {
    LpResult res;
    auto const st = dual();
    if (st != LpResult::Status::optimal)
    {
      return finish(res, st);
    }
    return finish(res, run(1));
  }

private:
  std::size_t m_;
  std::size_t n_;
  LpOptions opt_;
  std::vector<long> nonbasic_;
  std::vector<long> basic_;
  std::vector<std::vector<double>> d_;
  std::size_t pivots_ = 0;
  std::size_t next_slack_ = m_;
  LpResult::Status status_ = LpResult::Status::iteration_limit;

  double jittered(double b, std::size_t row) const
  {
    double const u = 0.5 + 0.5 * counter_uniform(0x9e7, 0, row);
    return b + opt_.perturb * u * std::max(1.0, std::abs(b));
  }

  // dual simplex: keeps reduced costs nonnegative while repairing negative rhs entries
  LpResult::Status dual()
  {
    for (;;)
    {
      if (pivots_ >= opt_.max_pivots)
      {
        return LpResult::Status::iteration_limit;
      }
      long r = -1;
      for (std::size_t i = 0; i < m_; ++i)
      {
        if (d_[i][n_ + 1] < -opt_.eps && (r == -1 || d_[i][n_ + 1] < d_[static_cast<std::size_t>(r)][n_ + 1]))
        {
          r = static_cast<long>(i);
        }
      }
      if (r == -1)
      {
        return LpResult::Status::optimal;
      }
      std::vector<double> const &row = d_[static_cast<std::size_t>(r)];
      long s = -1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j <= n_; ++j)
      {
        double const a = row[j];
        if (nonbasic_[j] == -1 || a >= -opt_.eps)
        {
          continue;
        }
        double const ratio = std::max(d_[m_][j], 0.0) / -a;
        double const tie = opt_.eps * std::max(1.0, best);
        if (s == -1 || ratio < best - tie ||
            (ratio <= best + tie && -a > -row[static_cast<std::size_t>(s)]))
        {
          s = static_cast<long>(j);
          best = std::min(best, ratio);
        }
      }
      if (s == -1)
      {
        return LpResult::Status::infeasible;
      }
      pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
    }
  }

  bool better(const std::vector<double> &row, std::size_t j, std::size_t s) const
  {
    return row[j] < row[s] || (row[j] == row[s] && nonbasic_[j] < nonbasic_[s]);
  }

  void pivot(std::size_t r, std::size_t s)
  {
    ++pivots_;
    std::vector<double> &pr = d_[r];
    double const inv = 1.0 / pr[s];
    for (std::size_t i = 0; i < m_ + 2; ++i)
    {
      if (i == r || std::abs(d_[i][s]) <= opt_.eps * 1e-3)
      {
        continue;
      }
      std::vector<double> &row = d_[i];
      double const f = row[s] * inv;
      for (std::size_t j = 0; j < n_ + 3; ++j)
      {
        row[j] -= pr[j] * f;
      }
      row[s] = pr[s] * f;
    }
    for (std::size_t j = 0; j < n_ + 3; ++j)
    {
      if (j != s)
      {
        pr[j] *= inv;
      }
    }
    for (std::size_t i = 0; i < m_ + 2; ++i)
    {
      if (i != r)
      {
        d_[i][s] *= -inv;
      }
    }
    pr[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  LpResult::Status run(int phase)
  {
    std::size_t const x = m_ + static_cast<std::size_t>(phase) - 1;
    bool shuffle = false;
    std::size_t stall = 0;
    double last = d_[x][n_ + 1];
    std::vector<std::size_t> cand;
    for (;;)
    {
      if (pivots_ >= opt_.max_pivots)
      {
        return LpResult::Status::iteration_limit;
      }
      // entering column: Dantzig, or a seeded random improving column once stalled
      long s = -1;
      cand.clear();
      for (std::size_t j = 0; j <= n_; ++j)
      {
        if (nonbasic_[j] == -phase || d_[x][j] >= -opt_.eps)
        {
          continue;
        }
        cand.push_back(j);
        if (s == -1 || better(d_[x], j, static_cast<std::size_t>(s)))
        {
          s = static_cast<long>(j);
        }
      }
      if (s == -1)
      {
        return LpResult::Status::optimal;
      }
      if (shuffle)
      {
        s = static_cast<long>(cand[counter_bits(0x51ab1e, pivots_, cand.size()) % cand.size()]);
      }
      std::size_t const col = static_cast<std::size_t>(s);

      // Harris ratio test: bound the step with a small relaxation, then take the largest pivot
      double theta = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i)
      {
        double const a = d_[i][col];
        if (a > opt_.eps)
        {
          theta = std::min(theta, (std::max(d_[i][n_ + 1], 0.0) + opt_.eps) / a);
        }
      }
      if (theta == std::numeric_limits<double>::infinity())
      {
        return LpResult::Status::unbounded;
      }
      long r = -1;
      for (std::size_t i = 0; i < m_; ++i)
      {
        double const a = d_[i][col];
        if (a <= opt_.eps || std::max(d_[i][n_ + 1], 0.0) / a > theta)
        {
          continue;
        }
        std::size_t const k = static_cast<std::size_t>(r);
        if (r == -1 || a > d_[k][col] || (a == d_[k][col] && basic_[i] < basic_[k]))
        {
          r = static_cast<long>(i);
        }
      }
      pivot(static_cast<std::size_t>(r), col);
      for (std::size_t i = 0; i < m_; ++i)
      {
        if (d_[i][n_ + 1] < 0.0 && d_[i][n_ + 1] > -opt_.eps)
        {
          d_[i][n_ + 1] = 0.0;
        }
      }
      double const now = d_[x][n_ + 1];
      if (now > last + opt_.eps)
      {
        stall = 0;
        last = now;
      }
      else if (++stall >= opt_.stall_limit)
      {
        shuffle = true;
      }
    }
  }

  LpResult finish(LpResult &res, LpResult::Status status)
  {
    status_ = status;
    res.status = status;
    res.pivots = pivots_;
    res.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
    {
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_)
      {
        res.x[static_cast<std::size_t>(basic_[i])] = std::max(d_[i][n_ + 2], 0.0);
      }
    }
    switch (status)
    {
    case LpResult::Status::optimal:
      res.value = d_[m_][n_ + 2];
      break;
    case LpResult::Status::unbounded:
      res.value = std::numeric_limits<double>::infinity();
      break;
    default:
      res.value = -std::numeric_limits<double>::infinity();
    }
    return res;
  }
};

IncrementalLp::IncrementalLp(const std::vector<std::vector<double>> &A, const std::vector<double> &b,
                             const std::vector<double> &c, const LpOptions &opt)
{
  if (A.size() != b.size())
  {
    throw ValidationError("b", "need one bound per row");
  }
  t_ = std::make_unique<Tableau>(A, b, c, opt);
}

IncrementalLp::~IncrementalLp() = default;
IncrementalLp::IncrementalLp(IncrementalLp &&) noexcept = default;
IncrementalLp &IncrementalLp::operator=(IncrementalLp &&) noexcept = default;

LpResult IncrementalLp::solve()
{
  return t_->solve();
}

LpResult IncrementalLp::add_rows(const std::vector<std::vector<double>> &A, const std::vector<double> &b)
{
  if (A.size() != b.size())
  {
    throw ValidationError("b", "need one bound per row");
  }
  if (t_->status() != LpResult::Status::optimal)
  {
    throw PreconditionError("add_rows needs an optimal basis");
  }
  for (std::size_t k = 0; k < A.size(); ++k)
  {
    t_->add_row(A[k], b[k]);
  }
  return t_->reoptimize();
}

std::vector<std::size_t> IncrementalLp::prune(std::size_t keep_first, double tol)
{
  if (t_->status() != LpResult::Status::optimal)
  {
    throw PreconditionError("prune needs an optimal basis");
  }
  return t_->prune(keep_first, tol);
}

std::size_t IncrementalLp::rows() const noexcept
{
  return t_->rows();
}

LpResult solve_lp(const std::vector<std::vector<double>> &A, const std::vector<double> &b,
                  const std::vector<double> &c, const LpOptions &opt)
{
  if (A.size() != b.size())
  {
    throw ValidationError("b", "need one bound per row");
  }
  return IncrementalLp(A, b, c, opt).solve();
}

}  // namespace mechrev
