#include <doctest.h>

#include "corpus.hpp"
#include "mechrev/core_tail.hpp"
#include "mechrev/error.hpp"
#include "mechrev/simple_rev.hpp"

using namespace mechrev;

TEST_CASE("adaptive thresholds")
{
  auto inst = MarketInstance::single_buyer("ddt", {testing::uniform_int(1, 2), DiscreteDist({1.0, 3.0}, {0.5, 0.5})});
  auto s = build_split(inst, {ThresholdMode::adaptive, 1.0, 1.0});
  CHECK(s.r == doctest::Approx(2.5));
  CHECK(s.r_item[0] == doctest::Approx(1.0));
  CHECK(s.r_item[1] == doctest::Approx(1.5));
  CHECK(s.thresholds[0] == doctest::Approx(2.5));
  CHECK(s.thresholds[1] == doctest::Approx(2.5));
  CHECK(s.p[0] == 0.0);
  CHECK(s.p[1] == doctest::Approx(0.5));
  CHECK(s.ly1_holds());
  CHECK(s.core_welfare() == doctest::Approx(2.5));
}

TEST_CASE("uniform thresholds")
{
  auto inst = MarketInstance::single_buyer("ddt", {testing::uniform_int(1, 2), DiscreteDist({1.0, 3.0}, {0.5, 0.5})});
  auto s = build_split(inst, {ThresholdMode::uniform, 1.0, 1.0});
  CHECK(s.t[0] == doctest::Approx(2.0));
  CHECK(s.thresholds[1] == doctest::Approx(3.0));
  auto a = build_split(inst, {ThresholdMode::uniform_amplified, 1.0, 2.0});
  CHECK(a.t[0] == doctest::Approx(4.0));
}

TEST_CASE("zero revenue item is rejected in adaptive mode")
{
  auto inst = MarketInstance::single_buyer("z", {DiscreteDist::point_mass(0.0), testing::uniform_int(1, 2)});
  try
  {
    build_split(inst, {});
    FAIL("expected ValidationError");
  }
  catch (const ValidationError &e)
  {
    CHECK(e.field() == "items/0");
  }
}

TEST_CASE("tail events have total mass one")
{
  std::mt19937_64 rng(41);
  for (int k = 0; k < 40; ++k)
  {
    auto inst = testing::random_single_buyer(rng);
    auto s = build_split(inst, {ThresholdMode::adaptive, 0.5, 1.0});
    double total = 0.0;
    for (auto const &e : tail_events(s))
    {
      total += e.p;
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(s.ly1_holds());
  }
}

TEST_CASE("decomposition and its corollaries on random instances")
{
  std::mt19937_64 rng(42);
  for (int k = 0; k < 40; ++k)
  {
    auto inst = testing::random_single_buyer(rng);
    double const sr = srev(inst).value;
    double const br = brev(inst).value;
    for (auto spec : {ThresholdSpec{ThresholdMode::adaptive, 1.0, 1.0}, ThresholdSpec{ThresholdMode::uniform, 1.0, 1.0}})
    {
      auto s = build_split(inst, spec);
      auto rep = core_decomposition_bound(inst, s);
      CHECK(rep.pass);
      CHECK(rep.ly2_pass);
      CHECK(rep.lhs <= rep.rhs + 1e-6);
      CHECK(tail_bound_check(s, rep, sr).pass);
      CHECK(core_welfare_bound_check(s, sr, br).pass);
      for (auto const &v : core_variance_checks(s))
      {
        CHECK(v.pass);
      }
    }
  }
}

TEST_CASE("variance bound")
{
  auto er = er_truncated(16.0, {ErGrid::Kind::integer, 0});
  auto b = variance_bound_check(er, 1.0, 16.0);
  CHECK(b.pass);
  CHECK(b.value <= b.bound);
}

TEST_CASE("concentration")
{
  DiscreteDist d({1.0, 10.0}, {0.8, 0.2});
  CHECK(concentration_report(d, 1.0) == doctest::Approx(0.8));
  CHECK(concentration_report(d, 10.0) == doctest::Approx(0.2));
}

TEST_CASE("many buyer concentration check")
{
  DiscreteDist u = uniform_grid(1.0, 2.0, 5);
  std::vector<std::vector<DiscreteDist>> grid(4, std::vector<DiscreteDist>(3, u));
  auto inst = MarketInstance::independent("iid", grid);
  auto r = many_max_check(inst, 8.0);
  CHECK(r.pass);
  CHECK(r.mass_required == doctest::Approx(0.75 - 24.0 / 64.0));
  CHECK_THROWS(many_max_check(inst, 2.0));
}

TEST_CASE("amplification")
{
  std::mt19937_64 rng(43);
  for (int k = 0; k < 30; ++k)
  {
    auto inst = testing::random_single_buyer(rng);
    for (double a : {2.0, 4.0, 8.0})
    {
      auto r = amplification_check(inst, a, 1.0);
      CHECK(r.premise);
      CHECK(r.pass);
    }
  }
}
