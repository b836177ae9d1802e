#include <doctest.h>

#include <iterator>
#include <map>

#include "corpus.hpp"
#include "mechrev/dist.hpp"
#include "mechrev/error.hpp"

using namespace mechrev;

namespace {

std::map<double, double> brute_sum(const DiscreteDist &a, const DiscreteDist &b)
{
  std::map<double, double> out;
  for (auto x : a.atoms())
  {
    for (auto y : b.atoms())
    {
      out[x.value + y.value] += x.prob * y.prob;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("construction validates and sorts")
{
  auto d = DiscreteDist::from_atoms({{3.0, 0.25}, {1.0, 0.5}, {3.0, 0.25}});
  CHECK(d.size() == 2);
  CHECK(d.min() == 1.0);
  CHECK(d.max() == 3.0);
  CHECK(d.probs()[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(DiscreteDist({1.0, 2.0}, {0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(DiscreteDist({2.0, 1.0}, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(DiscreteDist({-1.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(DiscreteDist({1.0}, {1.0, 0.0}), ValidationError);
  CHECK(DiscreteDist::point_mass(4.0).is_point_mass());
}

TEST_CASE("tail probabilities and quantile")
{
  DiscreteDist d({1.0, 2.0, 4.0}, {0.5, 0.25, 0.25});
  CHECK(d.prob_at_least(2.0) == doctest::Approx(0.5));
  CHECK(d.prob_greater(2.0) == doctest::Approx(0.25));
  CHECK(d.prob_at_least(0.0) == doctest::Approx(1.0));
  CHECK(d.prob_at_least(5.0) == 0.0);
  CHECK(d.quantile(0.0) == 1.0);
  CHECK(d.quantile(0.49) == 1.0);
  CHECK(d.quantile(0.6) == 2.0);
  CHECK(d.quantile(0.99) == 4.0);
}

TEST_CASE("convolve matches brute enumeration")
{
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k)
  {
    auto a = testing::random_dist(rng, 5);
    auto b = testing::random_dist(rng, 5);
    auto c = convolve(a, b);
    auto ref = brute_sum(a, b);
    // compare upper tails; nearly equal sums may be merged
    double tail = 0.0;
    for (auto it = ref.rbegin(); it != ref.rend(); ++it)
    {
      tail += it->second;
      auto next = std::next(it);
      if (next == ref.rend() || !same_value(next->first, it->first))
      {
        CHECK(c.prob_at_least(it->first) == doctest::Approx(tail).epsilon(1e-9));
      }
    }
    CHECK(tail == doctest::Approx(1.0));
    CHECK(welfare(c) == doctest::Approx(welfare(a) + welfare(b)));
    CHECK(variance(c) == doctest::Approx(variance(a) + variance(b)));
  }
  CHECK_THROWS_AS(convolve(uniform_grid(0, 1, 100), uniform_grid(0, 1.0 / 7.0, 100), 50), SizeError);
}

TEST_CASE("max of two distributions")
{
  DiscreteDist a({1.0, 2.0}, {0.5, 0.5});
  auto m = max_dist(a, a);
  CHECK(m.prob_at_least(2.0) == doctest::Approx(0.75));
  CHECK(welfare(m) == doctest::Approx(1.75));
}

TEST_CASE("condition split partitions the mass")
{
  DiscreteDist d({1.0, 2.0, 5.0, 9.0}, {0.4, 0.3, 0.2, 0.1});
  auto s = condition_split(d, 2.0);
  REQUIRE(s.core);
  REQUIRE(s.tail);
  CHECK(s.p_tail == doctest::Approx(0.3));
  CHECK(s.core->max() == 2.0);
  CHECK(s.tail->min() == 5.0);
  CHECK((1 - s.p_tail) * welfare(*s.core) + s.p_tail * welfare(*s.tail) == doctest::Approx(welfare(d)));
  auto all_core = condition_split(d, 9.0);
  CHECK_FALSE(all_core.tail);
  CHECK(all_core.p_tail == 0.0);
}

TEST_CASE("scale, mixture, zero inflation")
{
  DiscreteDist d({1.0, 3.0}, {0.5, 0.5});
  CHECK(welfare(scale(d, 2.0)) == doctest::Approx(4.0));
  std::vector<double> w{0.5, 0.5};
  std::vector<DiscreteDist> parts{DiscreteDist::point_mass(1.0), DiscreteDist::point_mass(3.0)};
  CHECK(mixture(w, parts) == d);
  auto z = zero_inflate(d, 0.25);
  CHECK(z.prob_at_least(1.0) == doctest::Approx(0.25));
  CHECK(welfare(z) == doctest::Approx(0.5));
}

TEST_CASE("truncated equal revenue")
{
  for (auto grid : {ErGrid{ErGrid::Kind::integer, 0}, ErGrid{ErGrid::Kind::geometric, 9}})
  {
    auto er = er_truncated(16.0, grid);
    CHECK(er.min() == 1.0);
    CHECK(er.max() == doctest::Approx(16.0));
    for (double x : er.support())
    {
      CHECK(x * er.prob_at_least(x) == doctest::Approx(1.0));
    }
  }
  CHECK(er_truncated(5.5, {ErGrid::Kind::integer, 0}).max() == doctest::Approx(5.5));
}

TEST_CASE("uniform grid")
{
  auto u = uniform_grid(0.0, 1.0, 200);
  CHECK(u.size() == 200);
  // cell midpoints
  CHECK(u.min() == doctest::Approx(0.0025));
  CHECK(u.max() == doctest::Approx(0.9975));
  CHECK(welfare(u) == doctest::Approx(0.5));
}
