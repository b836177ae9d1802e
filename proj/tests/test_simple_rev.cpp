#include <doctest.h>

#include <set>

#include "corpus.hpp"
#include "mechrev/error.hpp"
#include "mechrev/simple_rev.hpp"
#include "mechrev/single_item.hpp"

using namespace mechrev;

TEST_CASE("partition enumeration gives Bell numbers")
{
  std::size_t const bell[] = {1, 1, 2, 5, 15, 52, 203, 877};
  for (std::size_t n = 1; n < 8; ++n)
  {
    std::size_t count = 0;
    std::set<std::vector<std::size_t>> seen;
    for_each_partition(n, [&](const std::vector<std::size_t> &a) {
      ++count;
      seen.insert(a);
    });
    CHECK(count == bell[n]);
    CHECK(seen.size() == count);
  }
}

TEST_CASE("two item example")
{
  auto inst = MarketInstance::single_buyer("ddt", {testing::uniform_int(1, 2), DiscreteDist({1.0, 3.0}, {0.5, 0.5})});
  CHECK(srev(inst).value == doctest::Approx(2.5));
  CHECK(brev(inst).value == doctest::Approx(2.25));
  auto p = prev_exact(inst);
  CHECK(p.revenue.value == doctest::Approx(2.5));
  CHECK(p.best.blocks.size() == 2);
}

TEST_CASE("partition revenue dominates the extremes")
{
  std::mt19937_64 rng(31);
  for (int k = 0; k < 60; ++k)
  {
    auto inst = testing::random_single_buyer(rng, 4, 3);
    double const s = srev(inst).value;
    double const b = brev(inst).value;
    auto p = prev_exact(inst);
    CHECK(p.revenue.value >= std::max(s, b) - 1e-9);
    CHECK(prev_on(inst, p.best).value == doctest::Approx(p.revenue.value));
    p.best.validate(inst.n_items());
  }
}

TEST_CASE("several buyers")
{
  DiscreteDist bit({0.0, 1.0}, {0.5, 0.5});
  auto inst = MarketInstance::independent("pair", {{bit, bit}, {bit, bit}});
  CHECK(srev(inst).value == doctest::Approx(1.5));
  // each buyer's bundle is Bin(2, 1/2); the optimum auction on two such bidders
  std::vector<DiscreteDist> sums{convolve(bit, bit), convolve(bit, bit)};
  CHECK(brev(inst).value == doctest::Approx(optimal_item_rev(sums).value));
}

TEST_CASE("partition checks")
{
  PartitionSpec bad{{{0, 1}, {1}}};
  CHECK_THROWS_AS(bad.validate(2), ValidationError);
  PartitionSpec missing{{{0}}};
  CHECK_THROWS_AS(missing.validate(2), ValidationError);
  std::vector<DiscreteDist> many(11, DiscreteDist({0.0, 1.0}, {0.5, 0.5}));
  CHECK_THROWS_AS(prev_exact(MarketInstance::single_buyer("wide", many)), SizeError);
}
