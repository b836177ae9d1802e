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

#include "mechrev/dist.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <string>

#include "mechrev/error.hpp"

namespace mechrev {

namespace {

double tol_at(double x)
{
  return kValueTol * std::max(1.0, std::abs(x));
}

// Pair lists up to this many entries are sorted directly; longer ones are
// produced by a k-way merge so they never live in memory.
constexpr std::size_t kSortedPairLimit = 4'000'000;

// Dense accumulation is used for integer supports spanning at most this many
// lattice points.
constexpr double kDenseLatticeLimit = 4'194'304.0;

bool all_integral(std::span<const double> xs)
{
  return std::all_of(xs.begin(), xs.end(), [](double x) { return x == std::floor(x) && x < 9.0e15; });
}

// Appends an atom to a sorted, merged atom list.
void push_merged(std::vector<Atom> &out, double value, double prob)
{
  if (!out.empty() && same_value(out.back().value, value))
  {
    out.back().prob += prob;
  }
  else
  {
    out.push_back({value, prob});
  }
}

void check_cap(std::size_t size, std::size_t cap)
{
  if (size > cap)
  {
    throw SizeError("convolution support", size, cap);
  }
}

}  // namespace

bool same_value(double a, double b)
{
  return std::abs(a - b) <= kValueTol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool at_least(double v, double threshold)
{
  return v >= threshold - tol_at(threshold);
}

DiscreteDist::DiscreteDist(std::vector<double> support, std::vector<double> probs, double sum_tol)
  : support_(std::move(support))
  , probs_(std::move(probs))
{
  if (support_.empty())
  {
    throw ValidationError("support", "must not be empty");
  }
  if (support_.size() != probs_.size())
  {
    throw ValidationError("probs", "length " + std::to_string(probs_.size()) + " differs from support length " +
                                       std::to_string(support_.size()));
  }
  for (std::size_t k = 0; k < support_.size(); ++k)
  {
    if (!std::isfinite(support_[k]) || support_[k] < 0.0)
    {
      throw ValidationError("support", "values must be finite and nonnegative");
    }
    if (k > 0 && !(support_[k] > support_[k - 1]))
    {
      throw ValidationError("support", "must be strictly increasing");
    }
    if (!std::isfinite(probs_[k]) || !(probs_[k] > 0.0))
    {
      throw ValidationError("probs", "every probability must be positive");
    }
  }
  double const total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > sum_tol)
  {
    throw ValidationError("probs", "sum to " + std::to_string(total) + ", expected 1");
  }
  for (double &p : probs_)
  {
    p /= total;
  }
  build_cache();
}

DiscreteDist DiscreteDist::point_mass(double value)
{
  return DiscreteDist({value}, {1.0});
}

DiscreteDist DiscreteDist::from_atoms(std::vector<Atom> atoms, double sum_tol)
{
  std::sort(atoms.begin(), atoms.end(), [](Atom const &x, Atom const &y) { return x.value < y.value; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  double total = 0.0;
  for (Atom const &a : atoms)
  {
    if (a.prob < 0.0 || !std::isfinite(a.prob))
    {
      throw ValidationError("probs", "negative or non-finite probability");
    }
    total += a.prob;
    if (a.prob == 0.0)
    {
      continue;
    }
    push_merged(merged, a.value, a.prob);
  }
  if (std::abs(total - 1.0) > sum_tol)
  {
    throw ValidationError("probs", "sum to " + std::to_string(total) + ", expected 1");
  }
  DiscreteDist d;
  d.support_.reserve(merged.size());
  d.probs_.reserve(merged.size());
  for (Atom const &a : merged)
  {
    if (!std::isfinite(a.value) || a.value < 0.0)
    {
      throw ValidationError("support", "values must be finite and nonnegative");
    }
    d.support_.push_back(a.value);
    d.probs_.push_back(a.prob / total);
  }
  if (d.support_.empty())
  {
    throw ValidationError("probs", "no atom with positive probability");
  }
  d.build_cache();
  return d;
}

void DiscreteDist::build_cache()
{
  upper_cdf_.assign(support_.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = support_.size(); k-- > 0;)
  {
    acc += probs_[k];
    upper_cdf_[k] = std::min(acc, 1.0);
  }
}

double DiscreteDist::prob_at_least(double x) const
{
  double const cut = x - tol_at(x);
  auto it = std::lower_bound(support_.begin(), support_.end(), cut);
  if (it == support_.end())
  {
    return 0.0;
  }
  return upper_cdf_[static_cast<std::size_t>(it - support_.begin())];
}

double DiscreteDist::prob_greater(double x) const
{
  double const cut = x + tol_at(x);
  auto it = std::upper_bound(support_.begin(), support_.end(), cut);
  if (it == support_.end())
  {
    return 0.0;
  }
  return upper_cdf_[static_cast<std::size_t>(it - support_.begin())];
}

double DiscreteDist::quantile(double u) const
{
  // Pr[v < support_[k]] = 1 - upper_cdf_[k]; find the last k with that <= u.
  std::size_t lo = 0;
  std::size_t hi = support_.size() - 1;
  while (lo < hi)
  {
    std::size_t const mid = (lo + hi + 1) / 2;
    if (1.0 - upper_cdf_[mid] <= u)
    {
      lo = mid;
    }
    else
    {
      hi = mid - 1;
    }
  }
  return support_[lo];
}

std::vector<Atom> DiscreteDist::atoms() const
{
  std::vector<Atom> out(support_.size());
  for (std::size_t k = 0; k < support_.size(); ++k)
  {
    out[k] = {support_[k], probs_[k]};
  }
  return out;
}

DiscreteDist convolve(DiscreteDist const &a, DiscreteDist const &b, std::size_t support_cap)
{
  if (a.is_point_mass() && a.min() == 0.0)
  {
    return b;
  }
  if (b.is_point_mass() && b.min() == 0.0)
  {
    return a;
  }
  auto const sa = a.support();
  auto const sb = b.support();
  auto const pa = a.probs();
  auto const pb = b.probs();

  std::vector<Atom> merged;

  double const span = (a.max() + b.max()) - (a.min() + b.min());
  if (all_integral(sa) && all_integral(sb) && span < kDenseLatticeLimit)
  {
    auto const offset = static_cast<long long>(a.min() + b.min());
    std::vector<double> dense(static_cast<std::size_t>(span) + 1, 0.0);
    for (std::size_t i = 0; i < sa.size(); ++i)
    {
      auto const base = static_cast<long long>(sa[i]) - offset;
      for (std::size_t j = 0; j < sb.size(); ++j)
      {
        dense[static_cast<std::size_t>(base + static_cast<long long>(sb[j]))] += pa[i] * pb[j];
      }
    }
    for (std::size_t k = 0; k < dense.size(); ++k)
    {
      if (dense[k] > 0.0)
      {
        merged.push_back({static_cast<double>(static_cast<long long>(k) + offset), dense[k]});
        check_cap(merged.size(), support_cap);
      }
    }
  }
  else if (sa.size() * sb.size() <= kSortedPairLimit)
  {
    std::vector<Atom> pairs;
    pairs.reserve(sa.size() * sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i)
    {
      for (std::size_t j = 0; j < sb.size(); ++j)
      {
        pairs.push_back({sa[i] + sb[j], pa[i] * pb[j]});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](Atom const &x, Atom const &y) { return x.value < y.value; });
    for (Atom const &p : pairs)
    {
      push_merged(merged, p.value, p.prob);
      check_cap(merged.size(), support_cap);
    }
  }
  else
  {
    // k-way merge of the |a| shifted copies of b.
    using Cursor = std::pair<double, std::size_t>;  // (current sum, row of a)
    std::vector<std::size_t> col(sa.size(), 0);
    std::priority_queue<Cursor, std::vector<Cursor>, std::greater<>> heap;
    for (std::size_t i = 0; i < sa.size(); ++i)
    {
      heap.emplace(sa[i] + sb[0], i);
    }
    while (!heap.empty())
    {
      auto const [value, i] = heap.top();
      heap.pop();
      push_merged(merged, value, pa[i] * pb[col[i]]);
      check_cap(merged.size(), support_cap);
      if (++col[i] < sb.size())
      {
        heap.emplace(sa[i] + sb[col[i]], i);
      }
    }
  }
  return DiscreteDist::from_atoms(std::move(merged));
}

DiscreteDist convolve_all(std::span<DiscreteDist const> parts, std::size_t support_cap)
{
  if (parts.empty())
  {
    return DiscreteDist::point_mass(0.0);
  }
  DiscreteDist acc = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k)
  {
    acc = convolve(acc, parts[k], support_cap);
  }
  return acc;
}

DiscreteDist max_dist(DiscreteDist const &a, DiscreteDist const &b)
{
  std::vector<double> values;
  values.reserve(a.size() + b.size());
  values.insert(values.end(), a.support().begin(), a.support().end());
  values.insert(values.end(), b.support().begin(), b.support().end());
  std::sort(values.begin(), values.end());

  // Pr[max < x] = Pr[a < x] Pr[b < x]; walk the merged support upwards.
  std::vector<Atom> atoms;
  double below_prev = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
  {
    if (k > 0 && same_value(values[k], values[k - 1]))
    {
      continue;
    }
    double const x = values[k];
    double const below_next = (1.0 - a.prob_greater(x)) * (1.0 - b.prob_greater(x));
    double const mass = below_next - below_prev;
    if (mass > 0.0)
    {
      atoms.push_back({x, mass});
    }
    below_prev = below_next;
  }
  return DiscreteDist::from_atoms(std::move(atoms));
}

double welfare(DiscreteDist const &d)
{
  double acc = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k)
  {
    acc += d.support()[k] * d.probs()[k];
  }
  return acc;
}

double variance(DiscreteDist const &d)
{
  double const mean = welfare(d);
  double acc = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k)
  {
    double const dev = d.support()[k] - mean;
    acc += dev * dev * d.probs()[k];
  }
  return acc;
}

ConditionalSplit condition_split(DiscreteDist const &d, double threshold)
{
  if (!(threshold >= 0.0))
  {
    throw ValidationError("threshold", "must be nonnegative");
  }
  std::vector<Atom> core;
  std::vector<Atom> tail;
  double p_tail = 0.0;
  double const cut = threshold + tol_at(threshold);
  for (std::size_t k = 0; k < d.size(); ++k)
  {
    double const v = d.support()[k];
    double const p = d.probs()[k];
    if (v <= cut)
    {
      core.push_back({v, p});
    }
    else
    {
      tail.push_back({v, p});
      p_tail += p;
    }
  }
  ConditionalSplit out;
  out.p_tail = p_tail;
  auto normalise = [](std::vector<Atom> atoms, double mass) {
    for (Atom &a : atoms)
    {
      a.prob /= mass;
    }
    return DiscreteDist::from_atoms(std::move(atoms));
  };
  if (!core.empty())
  {
    out.core = normalise(std::move(core), 1.0 - p_tail);
  }
  if (!tail.empty())
  {
    out.tail = normalise(std::move(tail), p_tail);
  }
  if (!out.tail)
  {
    out.p_tail = 0.0;
  }
  return out;
}

DiscreteDist scale(DiscreteDist const &d, double factor)
{
  if (!(factor > 0.0) || !std::isfinite(factor))
  {
    throw ValidationError("factor", "must be positive and finite");
  }
  std::vector<double> support(d.support().begin(), d.support().end());
  for (double &v : support)
  {
    v *= factor;
  }
  return DiscreteDist(std::move(support), std::vector<double>(d.probs().begin(), d.probs().end()));
}

DiscreteDist mixture(std::span<double const> weights, std::span<DiscreteDist const> parts)
{
  if (weights.size() != parts.size() || parts.empty())
  {
    throw ValidationError("weights", "need one weight per component");
  }
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < parts.size(); ++k)
  {
    if (weights[k] < 0.0)
    {
      throw ValidationError("weights", "must be nonnegative");
    }
    for (Atom a : parts[k].atoms())
    {
      atoms.push_back({a.value, a.prob * weights[k]});
    }
  }
  return DiscreteDist::from_atoms(std::move(atoms));
}

DiscreteDist er_truncated(double M, ErGrid grid)
{
  if (!(M >= 1.0) || !std::isfinite(M))
  {
    throw ValidationError("M", "truncation level must be >= 1");
  }
  if (M == 1.0)
  {
    return DiscreteDist::point_mass(1.0);
  }
  std::vector<double> values;
  if (grid.kind == ErGrid::Kind::geometric)
  {
    if (grid.atoms < 2)
    {
      throw ValidationError("atoms", "geometric grid needs at least 2 atoms");
    }
    values.resize(grid.atoms);
    for (std::size_t k = 0; k < grid.atoms; ++k)
    {
      values[k] = std::pow(M, static_cast<double>(k) / static_cast<double>(grid.atoms - 1));
    }
    values.front() = 1.0;
    values.back() = M;
  }
  else
  {
    auto const top = static_cast<std::size_t>(std::floor(M));
    for (std::size_t v = 1; v <= top; ++v)
    {
      values.push_back(static_cast<double>(v));
    }
    if (static_cast<double>(top) < M)
    {
      values.push_back(M);
    }
  }
  std::vector<double> probs(values.size());
  for (std::size_t k = 0; k + 1 < values.size(); ++k)
  {
    probs[k] = 1.0 / values[k] - 1.0 / values[k + 1];
  }
  probs.back() = 1.0 / values.back();
  return DiscreteDist(std::move(values), std::move(probs), 1e-9);
}

DiscreteDist uniform_grid(double a, double b, std::size_t k)
{
  if (!(a < b) || a < 0.0)
  {
    throw ValidationError("b", "need 0 <= a < b");
  }
  if (k < 2)
  {
    throw ValidationError("k", "need at least 2 atoms");
  }
  std::vector<double> values(k);
  for (std::size_t i = 0; i < k; ++i)
  {
    values[i] = a + (static_cast<double>(i) + 0.5) * (b - a) / static_cast<double>(k);
  }
  return DiscreteDist(std::move(values), std::vector<double>(k, 1.0 / static_cast<double>(k)), 1e-9);
}

DiscreteDist zero_inflate(DiscreteDist const &d, double q)
{
  if (!(q >= 0.0 && q <= 1.0))
  {
    throw ValidationError("q", "must lie in [0, 1]");
  }
  if (q == 1.0)
  {
    return d;
  }
  std::vector<Atom> atoms = d.atoms();
  for (Atom &a : atoms)
  {
    a.prob *= q;
  }
  atoms.push_back({0.0, 1.0 - q});
  return DiscreteDist::from_atoms(std::move(atoms));
}

}  // namespace mechrev
