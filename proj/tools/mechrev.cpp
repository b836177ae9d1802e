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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mechrev/approx.hpp"
#include "mechrev/core_tail.hpp"
#include "mechrev/error.hpp"
#include "mechrev/gaps.hpp"
#include "mechrev/opt_rev.hpp"
#include "mechrev/pricing.hpp"
#include "mechrev/reductions.hpp"
#include "mechrev/rng.hpp"
#include "mechrev/simple_rev.hpp"

using nlohmann::json;
using namespace mechrev;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;

struct RunConfig
{
  std::string command;
  std::string instance;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  std::string ns = "16,64,256";
  std::string mode = "adaptive";
  double c = 1.0;
  double a = 2.0;
  double concentration_c = 8.0;
  std::string kind = "cor";
  std::uint64_t trials = 0;
  std::string check = "split";
  unsigned j_max = 4;
};

std::string utc_now()
{
  std::time_t const t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_json(const RunConfig &cfg)
{
  json j{{"command", cfg.command}, {"seed", cfg.seed}};
  if (!cfg.instance.empty())
  {
    j["instance"] = cfg.instance;
  }
  if (cfg.command == "approx")
  {
    j["epsilon"] = cfg.epsilon;
  }
  if (cfg.command == "decompose")
  {
    j["mode"] = cfg.mode;
    j["c"] = cfg.c;
    j["a"] = cfg.a;
    j["concentration_c"] = cfg.concentration_c;
  }
  if (cfg.command == "pricing")
  {
    j["check"] = cfg.check;
    j["trials"] = cfg.trials;
    j["j_max"] = cfg.j_max;
  }
  if (cfg.command == "gaps")
  {
    j["kind"] = cfg.kind;
    j["ns"] = cfg.ns;
    j["trials"] = cfg.trials;
  }
  return j;
}

json header(const RunConfig &cfg)
{
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(config_json(cfg))));
  return json{{"tool", "mechrev"},
              {"version", MECHREV_VERSION},
              {"command", cfg.command},
              {"seed", cfg.seed},
              {"config_hash", hash},
              {"config", config_json(cfg)}};
}

void emit(const RunConfig &cfg, const std::string &text)
{
  if (cfg.out.empty())
  {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f)
  {
    throw ValidationError("out", "cannot write " + cfg.out);
  }
  f << text;
}

/// Flat one-row CSV of the scalar leaves of `report`.
std::string flat_csv(const RunConfig &cfg, const json &report)
{
  json const flat = report.flatten();
  std::ostringstream out;
  json const h = header(cfg);
  out << "# mechrev " << MECHREV_VERSION << " command=" << cfg.command << " seed=" << cfg.seed
      << " config_hash=" << h["config_hash"].get<std::string>() << '\n';
  std::string names;
  std::string values;
  for (auto it = flat.begin(); it != flat.end(); ++it)
  {
    if (it->is_structured())
    {
      continue;
    }
    names += (names.empty() ? "" : ",") + it.key().substr(1);
    std::string v = it->is_string() ? it->get<std::string>() : it->dump();
    if (v.find_first_of(",\"\n") != std::string::npos)
    {
      std::string q = "\"";
      for (char ch : v)
      {
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      }
      v = q + "\"";
    }
    values += (values.empty() ? "" : ",") + v;
  }
  out << names << '\n' << values << '\n';
  return out.str();
}

int finish(const RunConfig &cfg, json report, bool pass)
{
  report["pass"] = pass;
  if (cfg.format == "csv")
  {
    emit(cfg, flat_csv(cfg, report));
  }
  else
  {
    emit(cfg, json{{"header", header(cfg)}, {"report", report}}.dump(2) + "\n");
  }
  return pass ? kExitOk : kExitFailed;
}

int cmd_analyze(const RunConfig &cfg)
{
  MarketInstance const inst = load_instance(cfg.instance);
  json r{{"label", inst.label()}, {"items", inst.n_items()}, {"buyers", inst.n_buyers()}};
  double const s = srev(inst).value;
  double const b = brev(inst).value;
  r["srev"] = s;
  r["brev"] = b;
  bool pass = true;
  try
  {
    PrevResult const p = prev_exact(inst);
    r["prev"] = p.revenue.value;
    r["prev_partition"] = p.best.blocks;
  }
  catch (const SizeError &e)
  {
    r["prev"] = nullptr;
    r["prev_reason"] = e.what();
  }
  if (inst.n_buyers() != 1)
  {
    r["rev"] = nullptr;
    r["rev_reason"] = "optimal mechanism is computed for a single buyer only";
    return finish(cfg, r, pass);
  }
  try
  {
    double const rev = rev_lp(inst).objective;
    double const best = std::max(s, b);
    double const n = static_cast<double>(inst.n_items());
    r["rev"] = rev;
    r["ratio_rev_over_max"] = best > 0.0 ? json(rev / best) : json(nullptr);
    r["ratio_rev_over_srev"] = s > 0.0 ? json(rev / s) : json(nullptr);
    bool const six = rev <= 6.0 * best + 1e-6;
    bool const log_bound = rev <= (std::log(n) + 3.0) * s + 1e-6;
    r["six_max_pass"] = six;
    r["log_srev_pass"] = log_bound;
    pass = six && log_bound;
  }
  catch (const SizeError &e)
  {
    r["rev"] = nullptr;
    r["rev_reason"] = e.what();
  }
  return finish(cfg, r, pass);
}

ThresholdSpec parse_mode(const RunConfig &cfg)
{
  if (cfg.mode == "uniform")
  {
    return {ThresholdMode::uniform, cfg.c, 1.0};
  }
  if (cfg.mode == "amplified")
  {
    return {ThresholdMode::uniform_amplified, cfg.c, cfg.a};
  }
  if (cfg.mode == "adaptive")
  {
    return {ThresholdMode::adaptive, cfg.c, 1.0};
  }
  throw ValidationError("mode", "expected uniform, amplified or adaptive");
}

json check_json(const BoundCheck &b)
{
  return {{"name", b.name}, {"value", b.value}, {"bound", b.bound}, {"applicable", b.applicable}, {"pass", b.pass}};
}

int cmd_decompose(const RunConfig &cfg)
{
  MarketInstance const inst = load_instance(cfg.instance);
  CoreTailSplit const split = build_split(inst, parse_mode(cfg));
  json r{{"r_item", split.r_item}, {"r", split.r}, {"t", split.t}, {"thresholds", split.thresholds}, {"p", split.p}};
  bool pass = split.ly1_holds();
  r["ly1_pass"] = pass;
  json vars = json::array();
  for (const BoundCheck &b : core_variance_checks(split))
  {
    vars.push_back(check_json(b));
    pass = pass && b.pass;
  }
  r["core_variance"] = vars;
  if (inst.n_buyers() > 1)
  {
    ManyMaxReport const m = many_max_check(inst, cfg.concentration_c);
    r["many_max"] = {{"c", m.c},
                     {"srev", m.srev},
                     {"core_welfare", m.core_welfare},
                     {"center", m.center},
                     {"mass", m.mass},
                     {"mass_required", m.mass_required},
                     {"rev_upper_surrogate", m.rev_surrogate},
                     {"revenue_branch", m.revenue_branch},
                     {"concentration_branch", m.concentration_branch},
                     {"pass", m.pass}};
    return finish(cfg, r, pass && m.pass);
  }
  try
  {
    DecompositionReport const d = core_decomposition_bound(inst, split);
    double const s = split.r;
    double const b = brev(inst).value;
    json ly2 = json::array();
    for (const Ly2Check &c : d.ly2)
    {
      ly2.push_back({{"item", c.item},
                     {"core_rev", c.core_rev ? json(*c.core_rev) : json(nullptr)},
                     {"tail_rev", c.tail_rev ? json(*c.tail_rev) : json(nullptr)},
                     {"pass", c.pass}});
    }
    BoundCheck const tail = tail_bound_check(split, d, s);
    BoundCheck const core = core_welfare_bound_check(split, s, b);
    r["decomposition"] = {{"rev", d.lhs},
                          {"core_welfare", d.core_welfare},
                          {"tail_sum", d.tail_sum},
                          {"rhs", d.rhs},
                          {"p_total", d.p_total},
                          {"pass", d.pass}};
    r["ly2"] = ly2;
    r["tail_bound"] = check_json(tail);
    r["core_bound"] = check_json(core);
    pass = pass && d.pass && d.ly2_pass && tail.pass && core.pass;
  }
  catch (const SizeError &e)
  {
    r["decomposition"] = nullptr;
    r["decomposition_reason"] = e.what();
  }
  return finish(cfg, r, pass);
}

int cmd_approx(const RunConfig &cfg)
{
  MarketInstance const inst = load_instance(cfg.instance);
  ApproxDecision const d = run_approx(inst, cfg.epsilon, cfg.seed);
  json r{{"decision", d}};
  bool pass = true;
  try
  {
    DecisionReport const e = evaluate_decision(d, inst);
    r["evaluation"] = e;
    pass = e.pass;
  }
  catch (const SizeError &e)
  {
    r["evaluation"] = nullptr;
    r["evaluation_reason"] = e.what();
  }
  return finish(cfg, r, pass);
}

int cmd_pricing(const RunConfig &cfg)
{
  MarketInstance const inst = load_instance(cfg.instance);
  json r{{"check", cfg.check}};
  bool pass = true;
  if (cfg.check == "split" || cfg.check == "reserve")
  {
    json per_item = json::array();
    for (std::size_t i = 0; i < inst.n_items(); ++i)
    {
      const auto &bidders = inst.item_bidders(i);
      json row{{"item", i}};
      if (cfg.check == "split")
      {
        SplitReport const s = check_split(bidders);
        CorollaryReport const c = check_pricing_corollary(bidders);
        row["split"] = s;
        row["corollary"] = c;
        pass = pass && s.pass && c.pass;
      }
      else
      {
        ReserveReport const e = random_reserve_check(bidders);
        row["exact"] = e;
        pass = pass && e.pass;
        if (cfg.trials > 0)
        {
          ReserveReport const m = random_reserve_sim(bidders, cfg.trials, counter_bits(cfg.seed, 0, i));
          row["simulated"] = m;
          pass = pass && m.pass;
        }
      }
      per_item.push_back(row);
    }
    r["items"] = per_item;
    return finish(cfg, r, pass);
  }
  if (inst.n_buyers() != 1)
  {
    throw ValidationError("instance", "bundle, shatter and brendan checks take a single-buyer instance");
  }
  std::vector<DiscreteDist> const items = inst.buyer_items(0);
  std::vector<std::size_t> all(items.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  double const bundle_price = monopoly_price(convolve_all(items)).price;
  if (cfg.check == "bundle")
  {
    std::vector<PricingScheme> schemes;
    double c1 = 1.0;
    for (std::size_t i = 0; i < items.size(); ++i)
    {
      schemes.push_back({{i}, monopoly_price(items[i]).price});
      c1 = std::min(c1, purchase_prob(items, schemes.back()));
    }
    BundleResult const b = bundle_combine(schemes, items, c1);
    r["bundle"] = b;
    pass = b.pass && b.markov_pass;
  }
  else if (cfg.check == "shatter")
  {
    PricingScheme const s{all, bundle_price};
    ShatterResult const sh = shatter(s, items);
    r["scheme"] = s;
    r["bundle_revenue"] = bundle_price * purchase_prob(items, s);
    r["shatter"] = sh;
  }
  else if (cfg.check == "brendan")
  {
    BrendanReport const b = check_brendan(items, all, bundle_price, cfg.j_max);
    r["price"] = bundle_price;
    r["brendan"] = b;
    pass = b.pass;
  }
  else
  {
    throw ValidationError("check", "expected split, bundle, shatter, brendan or reserve");
  }
  return finish(cfg, r, pass);
}

std::vector<std::size_t> parse_ns(const std::string &s)
{
  std::vector<std::size_t> ns;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
  {
    try
    {
      std::size_t used = 0;
      unsigned long long const v = std::stoull(tok, &used);
      if (used != tok.size() || v == 0)
      {
        throw std::invalid_argument(tok);
      }
      ns.push_back(static_cast<std::size_t>(v));
    }
    catch (const std::logic_error &)
    {
      throw ValidationError("ns", "'" + tok + "' is not a positive integer");
    }
  }
  if (ns.empty())
  {
    throw ValidationError("ns", "empty list");
  }
  return ns;
}

int cmd_gaps(const RunConfig &cfg)
{
  GapKind const kind = parse_gap_kind(cfg.kind);
  GapConfig gc;
  if (cfg.trials > 0)
  {
    gc.trials = cfg.trials;
  }
  auto const rows = run_gap_experiment(kind, parse_ns(cfg.ns), cfg.seed, gc);
  bool increasing = true;
  for (std::size_t k = 1; k < rows.size(); ++k)
  {
    increasing = increasing && rows[k].ratio.value > rows[k - 1].ratio.value;
  }
  if (cfg.format == "json")
  {
    emit(cfg, json{{"header", header(cfg)}, {"rows", rows}, {"ratio_increasing", increasing}}.dump(2) + "\n");
  }
  else
  {
    std::ostringstream out;
    write_gap_csv(out, rows, utc_now());
    emit(cfg, out.str());
  }
  return increasing ? kExitOk : kExitFailed;
}

int cmd_reduce(const RunConfig &cfg)
{
  MarketInstance const inst = load_instance(cfg.instance);
  if (inst.n_buyers() != 1)
  {
    throw ValidationError("instance", "reductions take a single-buyer instance");
  }
  JointDist const joint = inst.to_joint(1'000'000);
  auto ratio = [](const JointDist &j) { return joint_brev(j) / joint_srev(j); };
  json r;
  bool pass = true;
  double const base = ratio(joint);
  r["ratio"] = base;
  PointMassReduction const pm = to_pointmass_in_sum(joint);
  double const after_pm = ratio(pm.conditioned);
  r["pointmass"] = {{"price", pm.price}, {"q", pm.q}, {"ratio", after_pm}, {"pass", after_pm >= base - 1e-9}};
  pass = pass && after_pm >= base - 1e-9;
  if (joint.dim() <= 6)
  {
    JointDist const sym = symmetrize(pm.conditioned);
    double const after_sym = ratio(sym);
    PointMassWelfareReport const w = check_pointmass_welfare(sym);
    r["symmetrize"] = {{"ratio", after_sym}, {"pass", after_sym >= after_pm - 1e-9}};
    r["pointmass_welfare"] = w;
    pass = pass && after_sym >= after_pm - 1e-9 && w.pass;
  }
  if (joint.dim() >= 2)
  {
    CorBoundReport const c = check_cor_bound(joint);
    r["cor_bound"] = c;
    pass = pass && c.pass;
  }
  return finish(cfg, r, pass);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Revenue benchmarks for multi-item auctions"};
  app.set_version_flag("--version", std::string(MECHREV_VERSION));
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App *sub, bool needs_instance) {
    auto *opt = sub->add_option("--instance", cfg.instance, "instance JSON file");
    if (needs_instance)
    {
      opt->required()->check(CLI::ExistingFile);
    }
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", cfg.seed, "random seed");
  };

  auto *analyze = app.add_subcommand("analyze", "SRev, BRev, PRev and Rev of an instance");
  common(analyze, true);

  auto *decompose = app.add_subcommand("decompose", "core/tail split and its bounds");
  common(decompose, true);
  decompose->add_option("--mode", cfg.mode, "uniform, amplified or adaptive")
    ->check(CLI::IsMember({"uniform", "amplified", "adaptive"}));
  decompose->add_option("--c", cfg.c, "threshold multiplier");
  decompose->add_option("--a", cfg.a, "amplification factor");
  decompose->add_option("--concentration-c", cfg.concentration_c, "c of the many-buyer concentration check");

  auto *approx = app.add_subcommand("approx", "sample-based choice between separate and bundle sales");
  common(approx, true);
  approx->add_option("--epsilon", cfg.epsilon, "accuracy parameter");

  auto *pricing = app.add_subcommand("pricing", "pricing-mechanism checks");
  common(pricing, true);
  pricing->add_option("--check", cfg.check, "split, bundle, shatter, brendan or reserve")
    ->check(CLI::IsMember({"split", "bundle", "shatter", "brendan", "reserve"}));
  pricing->add_option("--trials", cfg.trials, "Monte Carlo trials for the reserve check (0: exact only)");
  pricing->add_option("--jmax", cfg.j_max, "largest j in the conditional-tail check");

  auto *gaps = app.add_subcommand("gaps", "lower-bound constructions over an n sweep");
  common(gaps, false);
  cfg.format = "json";
  gaps->add_option("--kind", cfg.kind, "many_iid, prev_max or cor")
    ->check(CLI::IsMember({"many_iid", "prev_max", "cor"}));
  gaps->add_option("--ns", cfg.ns, "comma-separated n values");
  gaps->add_option("--trials", cfg.trials, "Monte Carlo trials (many_iid)");

  auto *reduce = app.add_subcommand("reduce", "point-mass-in-sum and symmetrization reductions");
  common(reduce, true);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    int const code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    if (gaps->parsed())
    {
      cfg.command = "gaps";
      if (gaps->count("--format") == 0)
      {
        cfg.format = "csv";
      }
      return cmd_gaps(cfg);
    }
    if (analyze->parsed())
    {
      cfg.command = "analyze";
      return cmd_analyze(cfg);
    }
    if (decompose->parsed())
    {
      cfg.command = "decompose";
      return cmd_decompose(cfg);
    }
    if (approx->parsed())
    {
      cfg.command = "approx";
      return cmd_approx(cfg);
    }
    if (pricing->parsed())
    {
      cfg.command = "pricing";
      return cmd_pricing(cfg);
    }
    if (reduce->parsed())
    {
      cfg.command = "reduce";
      return cmd_reduce(cfg);
    }
  }
  catch (const ValidationError &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
