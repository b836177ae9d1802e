// Acceptance runner: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "mechrev/approx.hpp"
#include "mechrev/core_tail.hpp"
#include "mechrev/gaps.hpp"
#include "mechrev/opt_rev.hpp"
#include "mechrev/pricing.hpp"
#include "mechrev/reductions.hpp"
#include "mechrev/simple_rev.hpp"
#include "mechrev/single_item.hpp"

using namespace mechrev;
namespace mt = mechrev::testing;

namespace {

struct Outcome
{
  bool pass = true;
  std::string detail;
};

bool close(double a, double b, double tol)
{
  return std::abs(a - b) <= tol;
}

std::string fmt(const char *f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<MarketInstance> const &corpus()
{
  static std::vector<MarketInstance> const c = mt::main_corpus();
  return c;
}

std::vector<double> const &corpus_rev()
{
  static std::vector<double> const r = [] {
    std::vector<double> out;
    for (auto const &inst : corpus())
    {
      out.push_back(rev_lp(inst).objective);
    }
    return out;
  }();
  return r;
}

Outcome c1_golden()
{
  auto inst = MarketInstance::single_buyer("ddt", {mt::uniform_int(1, 2), DiscreteDist({1.0, 3.0}, {0.5, 0.5})});
  double const s = srev(inst).value;
  double const b = brev(inst).value;
  double const r = rev_lp(inst).objective;
  double const ratio = r / std::max(s, b);
  bool const pass = s == 2.5 && b == 2.25 && close(r, 2.625, 1e-6) && close(ratio, 1.05, 1e-6);
  return {pass, fmt("srev=%.9g brev=%.9g rev=%.9g ratio=%.9g", s, b, r, ratio)};
}

Outcome c2_uniform()
{
  std::vector<DiscreteDist> items(16, uniform_grid(0.0, 1.0, 200));
  auto inst = MarketInstance::single_buyer("uniform16", items);
  double const s = srev(inst).value;
  double const b = brev(inst).value;
  bool const pass = close(s, 4.0, 0.05) && b >= 6.4;
  return {pass, fmt("srev=%.6f (target 4 +- 0.05) brev=%.6f (target >= 6.4)", s, b)};
}

Outcome c3_main()
{
  Outcome o;
  double worst_max = 0.0;
  double worst_log = 0.0;
  std::size_t fails = 0;
  for (std::size_t k = 0; k < corpus().size(); ++k)
  {
    auto const &inst = corpus()[k];
    double const r = corpus_rev()[k];
    double const s = srev(inst).value;
    double const b = brev(inst).value;
    double const n = static_cast<double>(inst.n_items());
    worst_max = std::max(worst_max, r / std::max(s, b));
    worst_log = std::max(worst_log, r / ((std::log(n) + 3.0) * s));
    if (r > 6.0 * std::max(s, b) + 1e-6 || r > (std::log(n) + 3.0) * s + 1e-6)
    {
      ++fails;
    }
  }
  o.pass = fails == 0;
  o.detail = fmt("instances=%zu failures=%zu max rev/max(srev,brev)=%.6f max rev/((ln n+3)srev)=%.6f",
                 corpus().size(), fails, worst_max, worst_log);
  return o;
}

Outcome c4_decomposition()
{
  std::map<std::string, std::size_t> fails;
  for (std::size_t k = 0; k < corpus().size(); ++k)
  {
    auto const &inst = corpus()[k];
    double const r = corpus_rev()[k];
    auto split = build_split(inst, {ThresholdMode::adaptive, 1.0, 1.0});
    if (!split.ly1_holds())
    {
      ++fails["ly1"];
    }
    auto rep = core_decomposition_bound(inst, split);
    if (!rep.ly2_pass)
    {
      ++fails["ly2"];
    }
    if (!rep.pass || !close(rep.lhs, r, 1e-6))
    {
      ++fails["decomposition"];
    }
    if (rep.tail_sum > 2.0 * split.r + 1e-6)
    {
      ++fails["tail"];
    }
    for (auto const &v : core_variance_checks(split))
    {
      if (!v.pass)
      {
        ++fails["variance"];
      }
    }
  }
  std::size_t total = 0;
  std::string detail;
  for (auto const &[name, count] : fails)
  {
    total += count;
    detail += " " + name + "=" + std::to_string(count);
  }
  return {total == 0, fmt("instances=%zu failures=%zu%s", corpus().size(), total, detail.c_str())};
}

Outcome c5_approx()
{
  std::size_t runs = 0;
  std::size_t fails = 0;
  std::size_t bundles = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < corpus().size(); ++k)
  {
    double const r = corpus_rev()[k];
    RevOracle const cached = [r](const JointDist &) { return r; };
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      auto d = run_approx(corpus()[k], 0.1, seed);
      auto e = evaluate_decision(d, corpus()[k], cached);
      ++runs;
      fails += e.pass ? 0 : 1;
      bundles += d.choice == ApproxDecision::Choice::bundle ? 1 : 0;
      worst = std::max(worst, e.ratio);
    }
  }
  return {fails == 0, fmt("runs=%zu failures=%zu bundle_choices=%zu max rev/chosen=%.6f (limit %.3f)", runs, fails,
                          bundles, worst, 6.0 * 1.1)};
}

Outcome c6_pricing()
{
  std::mt19937_64 rng(606);
  std::size_t fa = 0;
  std::size_t fb = 0;
  std::size_t fc = 0;
  std::size_t fd = 0;
  std::size_t na = 0;
  std::size_t nb = 0;
  std::size_t nd = 0;
  std::size_t profiles = 0;

  auto u12 = mt::uniform_int(1, 2);
  std::vector<DiscreteDist> pair{u12, u12};
  auto golden = random_reserve_check(pair);
  bool const golden_ok = close(golden.brev0, 1.25, 1e-12) && golden.pass;

  for (std::size_t m = 1; m <= 3; ++m)
  {
    for (int k = 0; k < 40; ++k)
    {
      std::vector<DiscreteDist> b(m, mt::random_dist(rng, 4));
      ++na;
      fa += random_reserve_check(b).pass ? 0 : 1;
      std::vector<DiscreteDist> indep;
      for (std::size_t i = 0; i < m; ++i)
      {
        indep.push_back(mt::random_dist(rng, 4));
      }
      auto s = check_split(indep);
      ++nb;
      profiles += s.profiles;
      fb += s.pass ? 0 : 1;
    }
  }

  for (int k = 0; k < 50; ++k)
  {
    std::uniform_int_distribution<std::size_t> count(2, 4);
    std::size_t const sets = count(rng);
    std::vector<DiscreteDist> items;
    std::vector<PricingScheme> schemes;
    double c1 = 1.0;
    for (std::size_t s = 0; s < sets; ++s)
    {
      std::uniform_int_distribution<std::size_t> size(1, 2);
      PricingScheme scheme;
      std::size_t const w = size(rng);
      for (std::size_t i = 0; i < w; ++i)
      {
        scheme.items.push_back(items.size());
        items.push_back(mt::random_dist(rng, 3, 0.0, 10.0));
      }
      // price at a level bought with probability >= 1/2
      std::vector<DiscreteDist> parts;
      for (std::size_t i : scheme.items)
      {
        parts.push_back(items[i]);
      }
      DiscreteDist const sum = convolve_all(parts);
      double price = 0.0;
      for (double v : sum.support())
      {
        if (sum.prob_at_least(v) >= 0.5)
        {
          price = v;
        }
      }
      std::uniform_real_distribution<double> shrink(0.5, 1.0);
      scheme.price = price * shrink(rng);
      schemes.push_back(scheme);
    }
    for (auto const &s : schemes)
    {
      c1 = std::min(c1, purchase_prob(items, s));
    }
    auto r = bundle_combine(schemes, items, c1);
    fc += (r.pass && r.revenue >= r.guarantee_c1 - 1e-12 && r.markov_pass && c1 >= 0.5) ? 0 : 1;
  }

  for (int k = 0; k < 200; ++k)
  {
    std::uniform_int_distribution<std::size_t> nitems(1, 3);
    std::vector<DiscreteDist> items;
    std::vector<std::size_t> S;
    for (std::size_t i = 0, n = nitems(rng); i < n; ++i)
    {
      items.push_back(mt::random_dist(rng, 4));
      S.push_back(i);
    }
    // prices from the support of the set value so that Pr[V >= p] > 0; every third is the monopoly price
    DiscreteDist const V = convolve_all(items);
    std::uniform_int_distribution<std::size_t> pick(0, V.size() - 1);
    double const p = k % 3 == 0 ? monopoly_price(V).price : V.support()[pick(rng)];
    if (!(p > 0.0))
    {
      continue;
    }
    auto r = check_brendan(items, S, p, 5);
    if (!r.vacuous)
    {
      ++nd;
      fd += r.pass ? 0 : 1;
    }
  }
  bool const pass = golden_ok && fa + fb + fc + fd == 0;
  return {pass, fmt("(a) %zu cases %zu fail, U{1,2}x2 brev0=%.6g rr=%.6g; (b) %zu sets %zu profiles %zu fail; "
                    "(c) 50 sets %zu fail; (d) %zu non-vacuous %zu fail",
                    na, fa, golden.brev0, golden.revenue.value, nb, profiles, fb, fc, nd, fd)};
}

std::vector<GapExperimentResult> const &many_iid_rows()
{
  static std::vector<GapExperimentResult> const rows = run_gap_experiment(GapKind::many_iid, {16, 64, 256}, 1);
  return rows;
}

Outcome c7_gaps()
{
  Outcome o;
  std::string detail;
  for (GapKind kind : {GapKind::prev_max, GapKind::cor})
  {
    auto rows = run_gap_experiment(kind, {16, 64, 256}, 1);
    detail += to_string(kind) + "=";
    for (std::size_t k = 0; k < rows.size(); ++k)
    {
      detail += fmt("%s%.4f", k ? "," : "", rows[k].ratio.value);
      if (k > 0 && !(rows[k].ratio.value > rows[k - 1].ratio.value))
      {
        o.pass = false;
      }
    }
    detail += " ";
  }
  auto const &rows = many_iid_rows();
  detail += "many_iid=";
  for (std::size_t k = 0; k < rows.size(); ++k)
  {
    detail += fmt("%s%.4f(+-%.1e)", k ? "," : "", rows[k].ratio.value, rows[k].ratio.std_error);
    if (k > 0)
    {
      double const gap = rows[k].ratio.value - rows[k - 1].ratio.value;
      double const se = std::hypot(rows[k].ratio.std_error, rows[k - 1].ratio.std_error);
      if (!(gap > 3.0 * se))
      {
        o.pass = false;
      }
    }
  }
  o.detail = detail;
  return o;
}

Outcome c8_reductions()
{
  std::mt19937_64 rng(808);
  std::size_t fails = 0;
  for (int k = 0; k < 100; ++k)
  {
    auto j = mt::random_joint(rng);
    auto ratio = [](const JointDist &d) { return joint_brev(d) / joint_srev(d); };
    double const base = ratio(j);
    auto const pm = to_pointmass_in_sum(j).conditioned;
    double const after_pm = ratio(pm);
    double const after_sym = ratio(symmetrize(pm));
    double const sym_only = ratio(symmetrize(j));
    if (after_pm < base - 1e-9 || after_sym < after_pm - 1e-9 || sym_only < base - 1e-9)
    {
      ++fails;
    }
    if (j.dim() >= 2 && !check_cor_bound(j).pass)
    {
      ++fails;
    }
  }
  auto cor = gen_lb_cor(16);
  auto rep = check_cor_bound(cor.joint());
  bool const pass = fails == 0 && rep.pass;
  return {pass, fmt("100 joints %zu fail; gen_lb_cor(16): brev=%.4f srev=%.4f bound=%.4f", fails, rep.brev, rep.srev,
                    rep.bound)};
}

Outcome c9_oracles()
{
  std::mt19937_64 rng(909);
  std::size_t fails = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k)
  {
    auto d = mt::random_dist(rng, 8);
    std::vector<DiscreteDist> one{d};
    double const ironed = optimal_item_rev(one).value;
    double const lp = rev_lp(MarketInstance::single_buyer("one", {d})).objective;
    double brute = 0.0;
    for (double p : d.support())
    {
      brute = std::max(brute, p * d.prob_at_least(p));
    }
    worst = std::max({worst, std::abs(ironed - lp), std::abs(ironed - brute)});
    fails += (close(ironed, lp, 1e-6) && close(ironed, brute, 1e-6)) ? 0 : 1;
  }
  auto csv = [](const std::vector<GapExperimentResult> &rows) {
    std::ostringstream out;
    write_gap_csv(out, rows, "TIMESTAMP");
    return out.str();
  };
  std::string const first = csv(many_iid_rows());
  std::string const second = csv(run_gap_experiment(GapKind::many_iid, {16, 64, 256}, 1));
  std::string const cor1 = csv(run_gap_experiment(GapKind::cor, {16, 64}, 3));
  std::string const cor2 = csv(run_gap_experiment(GapKind::cor, {16, 64}, 3));
  bool const same = first == second && cor1 == cor2;
  return {fails == 0 && same, fmt("100 items %zu fail (max diff %.2e); csv byte-identical: %s", fails, worst,
                                  same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char **argv)
{
  std::vector<std::pair<int, std::function<Outcome()>>> const all{
    {1, c1_golden}, {2, c2_uniform}, {3, c3_main}, {4, c4_decomposition}, {5, c5_approx},
    {6, c6_pricing}, {7, c7_gaps},   {8, c8_reductions}, {9, c9_oracles}};
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i)
  {
    pick.push_back(std::atoi(argv[i]));
  }
  int failed = 0;
  for (auto const &[id, run] : all)
  {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), id) == pick.end())
    {
      continue;
    }
    auto const t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = run();
    }
    catch (const std::exception &e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s [%.2fs] %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
