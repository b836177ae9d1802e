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

#include "mechrev/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "mechrev/error.hpp"
#include "mechrev/rng.hpp"
#include "mechrev/single_item.hpp"

namespace mechrev {

namespace {

std::size_t exact_sqrt(std::size_t n)
{
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || r * r != n)
  {
    throw ValidationError("n", std::to_string(n) + " is not a positive perfect square");
  }
  return r;
}

std::size_t exact_log2(std::size_t n)
{
  if (n < 2 || (n & (n - 1)) != 0)
  {
    throw ValidationError("n", std::to_string(n) + " is not a power of two >= 2");
  }
  std::size_t L = 0;
  while ((std::size_t{1} << L) < n)
  {
    ++L;
  }
  return L;
}

/// L contiguous blocks, sizes differing by at most one, larger ones first.
std::vector<std::vector<std::size_t>> near_equal_blocks(std::size_t n, std::size_t L)
{
  std::vector<std::vector<std::size_t>> blocks(L);
  std::size_t next = 0;
  for (std::size_t k = 0; k < L; ++k)
  {
    std::size_t const size = n / L + (k < n % L ? 1 : 0);
    for (std::size_t s = 0; s < size; ++s)
    {
      blocks[k].push_back(next++);
    }
  }
  return blocks;
}

DiscreteDist repeat_sum(const DiscreteDist &d, std::size_t count)
{
  DiscreteDist acc = d;
  for (std::size_t k = 1; k < count; ++k)
  {
    acc = convolve(acc, d);
  }
  return acc;
}

nlohmann::json grid_json(const ErGrid &g)
{
  if (g.kind == ErGrid::Kind::integer)
  {
    return {{"kind", "integer"}};
  }
  return {{"kind", "geometric"}, {"atoms", g.atoms}};
}

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

MarketInstance gen_lb_many_iid(std::size_t n, ErGrid grid)
{
  std::size_t const r = exact_sqrt(n);
  double const M = std::pow(static_cast<double>(n), 0.125);
  DiscreteDist const d = zero_inflate(er_truncated(M, grid), 1.0 / static_cast<double>(r));
  std::vector<std::vector<DiscreteDist>> g(n, std::vector<DiscreteDist>(r, d));
  return MarketInstance::independent("lb_many_iid_n" + std::to_string(n), std::move(g));
}

MarketInstance gen_lb_prev_max(std::size_t n, std::optional<double> truncation, ErGrid grid)
{
  std::size_t const r = exact_sqrt(n);
  DiscreteDist const er = er_truncated(truncation.value_or(static_cast<double>(n)), grid);
  DiscreteDist const zero = DiscreteDist::point_mass(0.0);
  std::vector<std::vector<DiscreteDist>> g;
  g.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    std::vector<DiscreteDist> row(r, zero);
    row[i / r] = er;
    g.push_back(std::move(row));
  }
  return MarketInstance::independent("lb_prev_max_n" + std::to_string(n), std::move(g));
}

PartitionSpec LbCorConstruction::partition() const
{
  return PartitionSpec{blocks};
}

DiscreteDist LbCorConstruction::item_marginal(std::size_t block) const
{
  return zero_inflate(mechrev::scale(er, scale.at(block)), active.at(block));
}

double LbCorConstruction::srev() const
{
  double total = 0.0;
  for (std::size_t k = 0; k < blocks.size(); ++k)
  {
    total += static_cast<double>(blocks[k].size()) * monopoly_price(item_marginal(k)).revenue;
  }
  return total;
}

double LbCorConstruction::prev_blocks() const
{
  double total = 0.0;
  for (std::size_t k = 0; k < blocks.size(); ++k)
  {
    total += monopoly_price(zero_inflate(mechrev::scale(block_sum[k], scale[k]), active[k])).revenue;
  }
  return total;
}

namespace {

DiscreteDist top_block_value(const LbCorConstruction &c, bool lift)
{
  std::size_t const L = c.blocks.size();
  std::vector<double> none_above(L + 1, 1.0);  // prod_{k >= l} (1 - a_k)
  for (std::size_t k = L; k-- > 0;)
  {
    none_above[k] = none_above[k + 1] * (1.0 - c.active[k]);
  }
  std::vector<Atom> atoms{{0.0, none_above[0]}};
  double below_max = 0.0;
  for (std::size_t l = 0; l < L; ++l)
  {
    double const w = c.active[l] * none_above[l + 1];
    double const shift = lift ? below_max : 0.0;
    const DiscreteDist &z = c.block_sum[l];
    for (std::size_t a = 0; a < z.size(); ++a)
    {
      atoms.push_back({c.scale[l] * z.support()[a] + shift, w * z.probs()[a]});
    }
    below_max += c.scale[l] * z.max();
  }
  return DiscreteDist::from_atoms(std::move(atoms));
}

}  // namespace

double LbCorConstruction::brev_upper() const
{
  return monopoly_price(top_block_value(*this, true)).revenue;
}

double LbCorConstruction::brev_lower() const
{
  return monopoly_price(top_block_value(*this, false)).revenue;
}

LbCorConstruction lb_cor_construction(std::size_t n, ErGrid grid)
{
  std::size_t const L = exact_log2(n);
  LbCorConstruction c;
  c.n = n;
  c.grid = grid;
  c.blocks = near_equal_blocks(n, L);
  double const nd = static_cast<double>(n);
  for (std::size_t k = 1; k <= L; ++k)
  {
    double const s = std::pow(nd, 2.0 * static_cast<double>(k));
    if (!std::isfinite(s) || s * nd * nd > 1e300)
    {
      throw ValidationError("n", "block scales overflow double precision");
    }
    c.scale.push_back(s);
    c.active.push_back(1.0 / s);
  }
  c.er = er_truncated(nd, grid);
  std::vector<std::optional<DiscreteDist>> by_size(n + 1);
  for (const auto &b : c.blocks)
  {
    if (!by_size[b.size()])
    {
      by_size[b.size()] = repeat_sum(c.er, b.size());
    }
    c.block_sum.push_back(*by_size[b.size()]);
  }
  return c;
}

MarketInstance gen_lb_cor(std::size_t n, std::size_t support_budget, ErGrid *grid_used)
{
  std::size_t const L = exact_log2(n);
  auto const blocks = near_equal_blocks(n, L);
  auto support_for = [&](std::size_t atoms) {
    double total = 1.0;
    for (const auto &b : blocks)
    {
      total *= 1.0 + std::pow(static_cast<double>(atoms), static_cast<double>(b.size()));
    }
    return total;
  };
  std::size_t atoms = std::min<std::size_t>(n, 64);
  while (atoms > 2 && support_for(atoms) > static_cast<double>(support_budget))
  {
    --atoms;
  }
  if (support_for(atoms) > static_cast<double>(support_budget))
  {
    throw SizeError("lb_cor joint support", static_cast<std::size_t>(std::min(support_for(2), 1e18)), support_budget);
  }
  ErGrid const grid{ErGrid::Kind::geometric, atoms};
  if (grid_used != nullptr)
  {
    *grid_used = grid;
  }
  LbCorConstruction const c = lb_cor_construction(n, grid);

  // per block: inactive state, then every value tuple of its items
  struct State
  {
    std::vector<double> values;
    double prob;
  };
  std::vector<std::vector<State>> states(L);
  for (std::size_t k = 0; k < L; ++k)
  {
    std::size_t const size = blocks[k].size();
    states[k].push_back({std::vector<double>(size, 0.0), 1.0 - c.active[k]});
    std::vector<std::size_t> idx(size, 0);
    for (;;)
    {
      State s{std::vector<double>(size), c.active[k]};
      for (std::size_t t = 0; t < size; ++t)
      {
        s.values[t] = c.scale[k] * c.er.support()[idx[t]];
        s.prob *= c.er.probs()[idx[t]];
      }
      states[k].push_back(std::move(s));
      std::size_t t = size;
      while (t > 0 && ++idx[t - 1] == c.er.size())
      {
        idx[--t] = 0;
      }
      if (t == 0)
      {
        break;
      }
    }
  }

  std::vector<std::vector<double>> points;
  std::vector<double> probs;
  std::vector<std::size_t> pick(L, 0);
  for (;;)
  {
    std::vector<double> point;
    point.reserve(n);
    double prob = 1.0;
    for (std::size_t k = 0; k < L; ++k)
    {
      const State &s = states[k][pick[k]];
      point.insert(point.end(), s.values.begin(), s.values.end());
      prob *= s.prob;
    }
    points.push_back(std::move(point));
    probs.push_back(prob);
    std::size_t k = L;
    while (k > 0 && ++pick[k - 1] == states[k - 1].size())
    {
      pick[--k] = 0;
    }
    if (k == 0)
    {
      break;
    }
  }
  return MarketInstance::correlated("lb_cor_n" + std::to_string(n), JointDist(std::move(points), std::move(probs)));
}

SequentialSweep sweep_sequential(const MarketInstance &inst, std::vector<std::size_t> bundle_sizes,
                                 std::vector<double> prices, bool price_per_item, std::uint64_t trials,
                                 std::uint64_t seed)
{
  if (inst.is_correlated())
  {
    throw PreconditionError("sequential mechanism needs independent values");
  }
  std::size_t const n = inst.n_items();
  std::size_t const m = inst.n_buyers();
  for (std::size_t k : bundle_sizes)
  {
    if (k == 0 || k > n)
    {
      throw ValidationError("bundle_size", "must lie in [1, n]");
    }
  }
  for (double p : prices)
  {
    if (!(p >= 0.0))
    {
      throw ValidationError("price", "must be nonnegative");
    }
  }
  if (trials < 2)
  {
    throw ValidationError("trials", "need at least two trials");
  }
  const auto &grid = inst.grid();
  std::size_t const S = bundle_sizes.size();
  std::size_t const P = prices.size();

  struct Moments
  {
    double sum = 0.0;
    double sq = 0.0;
  };
  auto chunks = parallel_chunks(trials, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<Moments> acc(S * P);
    std::vector<double> v(m * n);
    std::vector<std::vector<std::size_t>> positive(m);
    std::vector<char> taken(n);
    std::vector<std::size_t> chosen;
    for (std::uint64_t trial = begin; trial < end; ++trial)
    {
      for (std::size_t j = 0; j < m; ++j)
      {
        positive[j].clear();
        for (std::size_t i = 0; i < n; ++i)
        {
          const DiscreteDist &d = grid[i][j];
          double const x = d.is_point_mass() ? d.min() : d.quantile(counter_uniform(seed, j * n + i, trial));
          v[j * n + i] = x;
          if (x > 0.0)
          {
            positive[j].push_back(i);
          }
        }
        double const *row = &v[j * n];
        std::sort(positive[j].begin(), positive[j].end(), [row](std::size_t a, std::size_t b) {
          return row[a] > row[b] || (row[a] == row[b] && a < b);
        });
      }
      for (std::size_t s = 0; s < S; ++s)
      {
        std::size_t const k = bundle_sizes[s];
        for (std::size_t p = 0; p < P; ++p)
        {
          double const price = price_per_item ? prices[p] * static_cast<double>(k) : prices[p];
          std::fill(taken.begin(), taken.end(), 0);
          std::size_t left = n;
          double revenue = 0.0;
          for (std::size_t j = 0; j < m && left > 0; ++j)
          {
            chosen.clear();
            double value = 0.0;
            for (std::size_t i : positive[j])
            {
              if (chosen.size() == k)
              {
                break;
              }
              if (!taken[i])
              {
                chosen.push_back(i);
                value += v[j * n + i];
              }
            }
            if (chosen.empty() && price > 0.0)
            {
              continue;
            }
            if (!at_least(value, price))
            {
              continue;
            }
            for (std::size_t i : chosen)
            {
              taken[i] = 1;
            }
            left -= chosen.size();
            std::size_t need = std::min(k - chosen.size(), left);
            for (std::size_t i = 0; i < n && need > 0; ++i)
            {
              if (!taken[i] && v[j * n + i] == 0.0)
              {
                taken[i] = 1;
                --left;
                --need;
              }
            }
            revenue += price;
          }
          Moments &mo = acc[s * P + p];
          mo.sum += revenue;
          mo.sq += revenue * revenue;
        }
      }
    }
    return acc;
  }, 1024);

  std::vector<Moments> total(S * P);
  for (const auto &c : chunks)
  {
    for (std::size_t k = 0; k < S * P; ++k)
    {
      total[k].sum += c[k].sum;
      total[k].sq += c[k].sq;
    }
  }
  SequentialSweep out;
  out.bundle_sizes = std::move(bundle_sizes);
  out.prices = std::move(prices);
  out.price_per_item = price_per_item;
  out.trials = trials;
  out.seed = seed;
  double const t = static_cast<double>(trials);
  out.revenue.assign(S, std::vector<RevenueEstimate>(P));
  for (std::size_t s = 0; s < S; ++s)
  {
    for (std::size_t p = 0; p < P; ++p)
    {
      const Moments &mo = total[s * P + p];
      double const mean = mo.sum / t;
      double const var = std::max(0.0, (mo.sq - t * mean * mean) / (t - 1.0));
      out.revenue[s][p] = RevenueEstimate::monte_carlo(mean, trials, std::sqrt(var / t), seed);
    }
  }
  return out;
}

RevenueEstimate simulate_sequential(const MarketInstance &inst, std::size_t bundle_size, double price,
                                    std::uint64_t trials, std::uint64_t seed)
{
  return sweep_sequential(inst, {bundle_size}, {price}, false, trials, seed).revenue[0][0];
}

GapKind parse_gap_kind(const std::string &s)
{
  if (s == "many_iid")
  {
    return GapKind::many_iid;
  }
  if (s == "prev_max")
  {
    return GapKind::prev_max;
  }
  if (s == "cor")
  {
    return GapKind::cor;
  }
  throw ValidationError("kind", "expected many_iid, prev_max or cor, got '" + s + "'");
}

std::string to_string(GapKind k)
{
  switch (k)
  {
  case GapKind::many_iid:
    return "many_iid";
  case GapKind::prev_max:
    return "prev_max";
  case GapKind::cor:
    return "cor";
  }
  return "?";
}

void to_json(nlohmann::json &j, const GapExperimentResult &r)
{
  auto opt = [](const std::optional<RevenueEstimate> &e) { return e ? nlohmann::json(*e) : nlohmann::json(nullptr); };
  j = nlohmann::json{{"kind", to_string(r.kind)},
                     {"n", r.n},
                     {"seed", r.seed},
                     {"metrics",
                      {{"srev", opt(r.srev)},
                       {"brev", opt(r.brev)},
                       {"prev_blocks", opt(r.prev_blocks)},
                       {"seq_rev", opt(r.seq_rev)},
                       {"ratio", r.ratio}}},
                     {"config", r.config},
                     {"detail", r.detail}};
}

GapExperimentResult run_gap_point(GapKind kind, std::size_t n, std::uint64_t seed, const GapConfig &cfg)
{
  GapExperimentResult r;
  r.kind = kind;
  r.n = n;
  r.seed = seed;
  switch (kind)
  {
  case GapKind::many_iid: {
    std::size_t const root = exact_sqrt(n);
    ErGrid const grid{};
    MarketInstance const inst = gen_lb_many_iid(n, grid);
    double const M = std::pow(static_cast<double>(n), 0.125);
    std::vector<std::size_t> sizes{std::max<std::size_t>(1, root / 4), std::max<std::size_t>(1, root / 2), root};
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    std::vector<double> per_item(cfg.price_points);
    for (std::size_t p = 0; p < cfg.price_points; ++p)
    {
      per_item[p] = cfg.price_points == 1
                      ? 1.0
                      : 0.5 + (M - 0.5) * static_cast<double>(p) / static_cast<double>(cfg.price_points - 1);
    }
    std::uint64_t const stream_seed = counter_bits(seed, 0x5e9ULL, n);
    SequentialSweep const sw = sweep_sequential(inst, sizes, per_item, true, cfg.trials, stream_seed);
    std::size_t bs = 0;
    std::size_t bp = 0;
    for (std::size_t s = 0; s < sizes.size(); ++s)
    {
      for (std::size_t p = 0; p < per_item.size(); ++p)
      {
        if (sw.revenue[s][p].value > sw.revenue[bs][bp].value)
        {
          bs = s;
          bp = p;
        }
      }
    }
    r.srev = srev(inst);
    r.seq_rev = sw.revenue[bs][bp];
    r.ratio = RevenueEstimate::monte_carlo(r.seq_rev->value / r.srev->value, cfg.trials,
                                           r.seq_rev->std_error / r.srev->value, stream_seed);
    r.config = {{"buyers", root},
                {"zero_prob", 1.0 - 1.0 / static_cast<double>(root)},
                {"er_truncation", M},
                {"er_grid", grid_json(grid)},
                {"bundle_sizes", sizes},
                {"price_per_item", per_item},
                {"trials", cfg.trials},
                {"stream_seed", stream_seed},
                {"ratio", "seq_rev / srev"}};
    r.detail = {{"best_bundle_size", sizes[bs]}, {"best_price", per_item[bp] * static_cast<double>(sizes[bs])}};
    break;
  }
  case GapKind::prev_max: {
    std::size_t const root = exact_sqrt(n);
    ErGrid const grid{ErGrid::Kind::integer, 0};
    MarketInstance const inst = gen_lb_prev_max(n, std::nullopt, grid);
    PartitionSpec blocks;
    for (std::size_t k = 0; k < root; ++k)
    {
      std::vector<std::size_t> b(root);
      std::iota(b.begin(), b.end(), k * root);
      blocks.blocks.push_back(std::move(b));
    }
    r.srev = srev(inst);
    r.brev = brev(inst);
    r.prev_blocks = prev_on(inst, blocks);
    r.ratio = RevenueEstimate::exact(r.prev_blocks->value / std::max(r.srev->value, r.brev->value));
    r.config = {{"buyers", root},
                {"block_size", root},
                {"er_truncation", static_cast<double>(n)},
                {"er_grid", grid_json(grid)},
                {"ratio", "prev_blocks / max(srev, brev)"}};
    break;
  }
  case GapKind::cor: {
    ErGrid const grid{ErGrid::Kind::integer, 0};
    LbCorConstruction const c = lb_cor_construction(n, grid);
    std::vector<std::size_t> sizes;
    for (const auto &b : c.blocks)
    {
      sizes.push_back(b.size());
    }
    r.srev = RevenueEstimate::exact(c.srev());
    r.brev = RevenueEstimate::exact(c.brev_upper());
    r.prev_blocks = RevenueEstimate::exact(c.prev_blocks());
    r.ratio = RevenueEstimate::exact(r.prev_blocks->value / std::max(r.srev->value, r.brev->value));
    r.config = {{"log_base", 2},
                {"block_sizes", sizes},
                {"er_truncation", static_cast<double>(n)},
                {"er_grid", grid_json(grid)},
                {"brev", "upper bound: lower active blocks at their maximum"},
                {"ratio", "prev_blocks / max(srev, brev)"}};
    r.detail = {{"brev_lower", c.brev_lower()}};
    break;
  }
  }
  return r;
}

std::vector<GapExperimentResult> run_gap_experiment(GapKind kind, const std::vector<std::size_t> &ns,
                                                    std::uint64_t seed, const GapConfig &cfg)
{
  if (ns.empty())
  {
    throw ValidationError("ns", "need at least one n");
  }
  std::vector<GapExperimentResult> out;
  for (std::size_t n : ns)
  {
    out.push_back(run_gap_point(kind, n, seed, cfg));
  }
  return out;
}

std::uint64_t config_hash(const nlohmann::json &config)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config.dump())
  {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_gap_csv(std::ostream &out, const std::vector<GapExperimentResult> &rows, const std::string &timestamp)
{
  nlohmann::json cfg = nlohmann::json::array();
  for (const auto &r : rows)
  {
    cfg.push_back({{"kind", to_string(r.kind)}, {"n", r.n}, {"seed", r.seed}, {"config", r.config}});
  }
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  out << "# mechrev " << MECHREV_VERSION << " config_hash=" << hash;
  if (!rows.empty())
  {
    out << " kind=" << to_string(rows.front().kind) << " seed=" << rows.front().seed;
  }
  out << '\n';
  out << "# generated " << timestamp << '\n';
  out << "kind,n,seed,srev,brev,prev_blocks,seq_rev,ratio,srev_stderr,brev_stderr,prev_blocks_stderr,"
         "seq_rev_stderr,ratio_stderr\n";
  auto val = [](const std::optional<RevenueEstimate> &e) { return e ? fmt(e->value) : std::string("NA"); };
  auto err = [](const std::optional<RevenueEstimate> &e) { return e ? fmt(e->std_error) : std::string("NA"); };
  for (const auto &r : rows)
  {
    out << to_string(r.kind) << ',' << r.n << ',' << r.seed << ',' << val(r.srev) << ',' << val(r.brev) << ','
        << val(r.prev_blocks) << ',' << val(r.seq_rev) << ',' << fmt(r.ratio.value) << ',' << err(r.srev) << ','
        << err(r.brev) << ',' << err(r.prev_blocks) << ',' << err(r.seq_rev) << ',' << fmt(r.ratio.std_error)
        << '\n';
  }
}

}  // namespace mechrev
