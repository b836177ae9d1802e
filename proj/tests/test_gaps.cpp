#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mechrev/error.hpp"
#include "mechrev/gaps.hpp"
#include "mechrev/simple_rev.hpp"
#include "mechrev/single_item.hpp"

using namespace mechrev;

TEST_CASE("many iid construction")
{
  auto inst = gen_lb_many_iid(16);
  CHECK(inst.n_items() == 16);
  CHECK(inst.n_buyers() == 4);
  auto const &d = inst.item_bidders(0)[0];
  CHECK(d.prob_at_least(1.0) == doctest::Approx(0.25));
  CHECK(d.max() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("partition gap construction")
{
  auto inst = gen_lb_prev_max(4);
  CHECK(inst.n_items() == 4);
  CHECK(inst.n_buyers() == 2);
  CHECK(inst.item_bidders(2)[0].is_point_mass());
  CHECK(srev(inst).value == doctest::Approx(4.0));
  CHECK(prev_exact(inst).revenue.value >= brev(inst).value - 1e-9);
}

TEST_CASE("correlated construction")
{
  auto c = lb_cor_construction(16);
  CHECK(c.blocks.size() == 4);
  std::size_t covered = 0;
  for (auto const &b : c.blocks)
  {
    covered += b.size();
  }
  CHECK(covered == 16);
  CHECK(c.brev_lower() <= c.brev_upper() + 1e-12);
  CHECK(c.prev_blocks() > c.srev());

  ErGrid used;
  auto inst = gen_lb_cor(16, 1'000'000, &used);
  CHECK(inst.is_correlated());
  CHECK(inst.joint().size() <= 1'000'000);
  CHECK_THROWS_AS(gen_lb_cor(16, 10), SizeError);
}

TEST_CASE("sequential simulation is seeded")
{
  auto inst = gen_lb_many_iid(16);
  auto a = simulate_sequential(inst, 2, 1.0, 5000, 9);
  auto b = simulate_sequential(inst, 2, 1.0, 5000, 9);
  CHECK(a.value == b.value);
  CHECK(a.std_error > 0.0);
  auto sweep = sweep_sequential(inst, {1, 2}, {0.5, 1.0}, true, 2000, 9);
  REQUIRE(sweep.revenue.size() == 2);
  CHECK(sweep.revenue[1].size() == 2);
}

TEST_CASE("gap kinds")
{
  CHECK(parse_gap_kind("prev_max") == GapKind::prev_max);
  CHECK(to_string(GapKind::many_iid) == "many_iid");
  CHECK_THROWS_AS(parse_gap_kind("nope"), ValidationError);
}

TEST_CASE("csv output is deterministic apart from the timestamp")
{
  GapConfig cfg;
  cfg.trials = 4000;
  auto rows = run_gap_experiment(GapKind::many_iid, {16}, 5, cfg);
  auto again = run_gap_experiment(GapKind::many_iid, {16}, 5, cfg);
  std::ostringstream a;
  std::ostringstream b;
  write_gap_csv(a, rows, "T");
  write_gap_csv(b, again, "T");
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("# mechrev", 0) == 0);
  CHECK(a.str().find("NA") != std::string::npos);

  auto other = run_gap_experiment(GapKind::many_iid, {16}, 6, cfg);
  CHECK(other[0].ratio.value != rows[0].ratio.value);
}

TEST_CASE("config hash")
{
  nlohmann::json a{{"n", 16}};
  nlohmann::json b{{"n", 17}};
  CHECK(config_hash(a) == config_hash(a));
  CHECK(config_hash(a) != config_hash(b));
}
