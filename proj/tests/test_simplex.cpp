#include <doctest.h>

#include <random>

#include "mechrev/simplex.hpp"

using namespace mechrev;
using Status = LpResult::Status;

TEST_CASE("textbook maximum")
{
  // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18
  auto r = solve_lp({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
  REQUIRE(r.status == Status::optimal);
  CHECK(r.value == doctest::Approx(36.0));
  CHECK(r.x[0] == doctest::Approx(2.0));
  CHECK(r.x[1] == doctest::Approx(6.0));
}

TEST_CASE("negative right hand side needs phase one")
{
  // max -x - y st -x - y <= -2, x <= 3
  auto r = solve_lp({{-1, -1}, {1, 0}}, {-2, 3}, {-1, -1});
  REQUIRE(r.status == Status::optimal);
  CHECK(r.value == doctest::Approx(-2.0));
}

TEST_CASE("infeasible and unbounded")
{
  CHECK(solve_lp({{1}, {-1}}, {1, -2}, {1}).status == Status::infeasible);
  CHECK(solve_lp({{-1}}, {0}, {1}).status == Status::unbounded);
}

TEST_CASE("degenerate vertex")
{
  auto r = solve_lp({{1, 1}, {1, -1}, {-1, 1}, {1, 0}}, {2, 0, 0, 1}, {1, 1});
  REQUIRE(r.status == Status::optimal);
  CHECK(r.value == doctest::Approx(2.0));
}

TEST_CASE("random 2d programs against vertex enumeration")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k)
  {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (int i = 0; i < 5; ++i)
    {
      A.push_back({u(rng), u(rng)});
      b.push_back(u(rng) + 1.2);
    }
    A.push_back({1, 0});
    A.push_back({0, 1});
    b.push_back(3);
    b.push_back(3);
    std::vector<double> c{u(rng), u(rng)};
    // candidate vertices: pairs of tight rows including x = 0, y = 0
    auto rows = A;
    auto rhs = b;
    rows.push_back({-1, 0});
    rows.push_back({0, -1});
    rhs.push_back(0);
    rhs.push_back(0);
    double best = -1e300;
    bool any = false;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
      for (std::size_t j = i + 1; j < rows.size(); ++j)
      {
        double const det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
        if (std::abs(det) < 1e-12)
        {
          continue;
        }
        double const x = (rhs[i] * rows[j][1] - rows[i][1] * rhs[j]) / det;
        double const y = (rows[i][0] * rhs[j] - rhs[i] * rows[j][0]) / det;
        bool ok = true;
        for (std::size_t r = 0; r < rows.size(); ++r)
        {
          ok = ok && rows[r][0] * x + rows[r][1] * y <= rhs[r] + 1e-9;
        }
        if (ok)
        {
          any = true;
          best = std::max(best, c[0] * x + c[1] * y);
        }
      }
    }
    auto r = solve_lp(A, b, c);
    if (!any)
    {
      CHECK(r.status == Status::infeasible);
      continue;
    }
    REQUIRE(r.status == Status::optimal);
    CHECK(r.value == doctest::Approx(best).epsilon(1e-7));
  }
}

TEST_CASE("rows added after an optimum match a cold solve")
{
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k)
  {
    std::size_t const n = 6;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t i = 0; i < n; ++i)
    {
      std::vector<double> row(n, 0.0);
      row[i] = 1.0;
      A.push_back(row);
      b.push_back(2.0);
    }
    std::vector<double> c(n);
    for (double &x : c)
    {
      x = u(rng);
    }
    IncrementalLp lp(A, b, c);
    REQUIRE(lp.solve().status == Status::optimal);
    for (int batch = 0; batch < 3; ++batch)
    {
      std::vector<std::vector<double>> extra;
      std::vector<double> rhs;
      for (int r = 0; r < 4; ++r)
      {
        std::vector<double> row(n);
        for (double &x : row)
        {
          x = u(rng);
        }
        extra.push_back(row);
        rhs.push_back(u(rng) + 0.5);
      }
      A.insert(A.end(), extra.begin(), extra.end());
      b.insert(b.end(), rhs.begin(), rhs.end());
      auto warm = lp.add_rows(extra, rhs);
      auto cold = solve_lp(A, b, c);
      REQUIRE(warm.status == cold.status);
      if (cold.status != Status::optimal)
      {
        break;
      }
      CHECK(warm.value == doctest::Approx(cold.value).epsilon(1e-8));
    }
  }
}

TEST_CASE("pruning slack rows keeps the optimum")
{
  // max x + y st x <= 1, y <= 1, x + y <= 5, x <= 3
  IncrementalLp lp({{1, 0}, {0, 1}}, {1, 1}, {1, 1});
  REQUIRE(lp.solve().status == Status::optimal);
  auto r = lp.add_rows({{1, 1}, {1, 0}}, {5, 3});
  REQUIRE(r.status == Status::optimal);
  CHECK(r.value == doctest::Approx(2.0));
  auto dropped = lp.prune(2, 1e-9);
  CHECK(dropped == std::vector<std::size_t>{2, 3});
  CHECK(lp.rows() == 2);
  auto again = lp.add_rows({{1, 2}}, {2});
  REQUIRE(again.status == Status::optimal);
  CHECK(again.value == doctest::Approx(1.5));
}
