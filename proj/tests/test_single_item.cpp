#include <doctest.h>

#include "corpus.hpp"
#include "mechrev/error.hpp"
#include "mechrev/single_item.hpp"

using namespace mechrev;

namespace {

double brute_posted(const DiscreteDist &d)
{
  double best = 0.0;
  for (double p : d.support())
  {
    best = std::max(best, p * d.prob_at_least(p));
  }
  return best;
}

}  // namespace

TEST_CASE("monopoly price picks the lowest maximizer")
{
  DiscreteDist d({1.0, 2.0}, {0.5, 0.5});
  auto m = monopoly_price(d);
  CHECK(m.price == 1.0);
  CHECK(m.revenue == doctest::Approx(1.0));
  auto e = monopoly_price(er_truncated(8.0, {ErGrid::Kind::integer, 0}));
  CHECK(e.price == 1.0);
  CHECK(e.revenue == doctest::Approx(1.0));
}

TEST_CASE("single bidder optimum equals best posted price")
{
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k)
  {
    auto d = testing::random_dist(rng, 6);
    std::vector<DiscreteDist> one{d};
    CHECK(optimal_item_rev(one).value == doctest::Approx(brute_posted(d)).epsilon(1e-9));
    CHECK(monopoly_price(d).revenue == doctest::Approx(brute_posted(d)).epsilon(1e-9));
  }
}

TEST_CASE("ironed virtual values are monotone")
{
  std::mt19937_64 rng(12);
  for (int k = 0; k < 100; ++k)
  {
    auto d = testing::random_dist(rng, 6);
    auto iv = ironed_virtuals(d);
    REQUIRE(iv.phi.size() == d.size());
    for (std::size_t i = 1; i < iv.phi.size(); ++i)
    {
      CHECK(iv.phi[i] >= iv.phi[i - 1] - 1e-9);
    }
    CHECK(iv.phi.back() == doctest::Approx(d.max()));
  }
}

TEST_CASE("revenue curve")
{
  DiscreteDist d({1.0, 2.0, 3.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  auto c = revenue_curve(d);
  REQUIRE(c.q.size() == 4);
  CHECK(c.q.front() == 0.0);
  CHECK(c.revenue[2] == doctest::Approx(4.0 / 3));
}

TEST_CASE("two iid bidders")
{
  DiscreteDist bit({0.0, 1.0}, {0.5, 0.5});
  std::vector<DiscreteDist> pair{bit, bit};
  CHECK(optimal_item_rev(pair).value == doctest::Approx(0.75));
  CHECK(posted_price_rev(pair, 1.0) == doctest::Approx(0.75));

  auto u12 = testing::uniform_int(1, 2);
  std::vector<DiscreteDist> u{u12, u12};
  CHECK(second_price_reserve_rev(u, 1.0) == doctest::Approx(1.25));
  CHECK(optimal_item_rev(u).value == doctest::Approx(1.5));
}

TEST_CASE("regular iid: optimum equals second price at the monopoly reserve")
{
  auto u = testing::uniform_int(1, 3);
  std::vector<DiscreteDist> three{u, u, u};
  double const best = second_price_reserve_rev(three, monopoly_price(u).price);
  CHECK(optimal_item_rev(three).value >= best - 1e-9);
  double sweep = 0.0;
  for (double p : u.support())
  {
    sweep = std::max(sweep, second_price_reserve_rev(three, p));
  }
  CHECK(optimal_item_rev(three).value >= sweep - 1e-9);
}

TEST_CASE("profile revenues")
{
  std::vector<double> v{3.0, 1.0, 2.0};
  CHECK(posted_profile_rev(v, 2.0) == 2.0);
  CHECK(posted_profile_rev(v, 4.0) == 0.0);
  CHECK(second_price_profile_rev(v, 1.5) == 2.0);
  CHECK(second_price_profile_rev(v, 2.5) == 2.5);
}

TEST_CASE("split audit holds and caps are enforced")
{
  std::mt19937_64 rng(13);
  for (int k = 0; k < 30; ++k)
  {
    std::vector<DiscreteDist> b{testing::random_dist(rng, 3), testing::random_dist(rng, 3)};
    for (double p : {0.0, 2.5, 5.0})
    {
      CHECK(audit_split(b, p).pass);
    }
  }
  std::vector<DiscreteDist> wide(4, uniform_grid(0, 1, 100));
  CHECK_THROWS_AS(second_price_reserve_rev(wide, 0.5, 1000), SizeError);
}
