#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mechrev/dist.hpp"
#include "mechrev/instance.hpp"

namespace mechrev::testing {

// Values on a 0.01 grid in [lo, hi], at least one positive.
inline DiscreteDist random_dist(std::mt19937_64 &rng, std::size_t max_support, double lo = 0.0, double hi = 10.0)
{
  std::uniform_int_distribution<std::size_t> size(1, max_support);
  std::uniform_real_distribution<double> val(lo, hi);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  for (;;)
  {
    std::size_t const k = size(rng);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i)
    {
      atoms.push_back({std::round(val(rng) * 100.0) / 100.0, w(rng)});
      total += atoms.back().prob;
    }
    for (Atom &a : atoms)
    {
      a.prob /= total;
    }
    DiscreteDist d = DiscreteDist::from_atoms(atoms);
    if (d.max() > 0.0)
    {
      return d;
    }
  }
}

inline MarketInstance random_single_buyer(std::mt19937_64 &rng, std::size_t max_items = 3, std::size_t max_support = 3)
{
  std::uniform_int_distribution<std::size_t> items(1, max_items);
  std::size_t const n = items(rng);
  std::vector<DiscreteDist> d;
  for (std::size_t i = 0; i < n; ++i)
  {
    d.push_back(random_dist(rng, max_support));
  }
  return MarketInstance::single_buyer("random", std::move(d));
}

// 200 single-buyer instances, n <= 3, supports <= 3, values in [0, 10].
inline std::vector<MarketInstance> main_corpus(std::size_t count = 200, std::uint64_t seed = 20261019)
{
  std::mt19937_64 rng(seed);
  std::vector<MarketInstance> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
  {
    out.push_back(random_single_buyer(rng));
  }
  return out;
}

inline JointDist random_joint(std::mt19937_64 &rng, std::size_t max_dim = 3, std::size_t max_points = 8)
{
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_int_distribution<std::size_t> count(1, max_points);
  std::uniform_int_distribution<int> val(0, 10);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::size_t const n = dim(rng);
  for (;;)
  {
    std::size_t const k = count(rng);
    std::vector<std::vector<double>> pts;
    std::vector<double> probs;
    double total = 0.0;
    bool positive = false;
    for (std::size_t i = 0; i < k; ++i)
    {
      std::vector<double> p(n);
      for (double &x : p)
      {
        x = val(rng);
        positive = positive || x > 0.0;
      }
      pts.push_back(p);
      probs.push_back(w(rng));
      total += probs.back();
    }
    if (!positive)
    {
      continue;
    }
    for (double &p : probs)
    {
      p /= total;
    }
    return JointDist(std::move(pts), std::move(probs));
  }
}

inline DiscreteDist uniform_int(int lo, int hi)
{
  std::vector<double> s;
  for (int v = lo; v <= hi; ++v)
  {
    s.push_back(v);
  }
  std::vector<double> p(s.size(), 1.0 / static_cast<double>(s.size()));
  return DiscreteDist(s, p);
}

}  // namespace mechrev::testing
