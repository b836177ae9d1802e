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

#include "mechrev/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "mechrev/error.hpp"

namespace mechrev {

using nlohmann::json;

JointDist::JointDist(std::vector<std::vector<double>> points, std::vector<double> probs, double sum_tol)
{
  if (points.empty())
  {
    throw ValidationError("support", "joint support must not be empty");
  }
  if (points.size() != probs.size())
  {
    throw ValidationError("probs", "need one probability per support point");
  }
  dim_ = points.front().size();
  if (dim_ == 0)
  {
    throw ValidationError("support", "value vectors must have at least one coordinate");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k)
  {
    if (points[k].size() != dim_)
    {
      throw ValidationError("support", "value vectors have differing lengths");
    }
    for (double v : points[k])
    {
      if (!std::isfinite(v) || v < 0.0)
      {
        throw ValidationError("support", "values must be finite and nonnegative");
      }
    }
    if (!std::isfinite(probs[k]) || probs[k] < 0.0)
    {
      throw ValidationError("probs", "probabilities must be nonnegative");
    }
    total += probs[k];
  }
  if (std::abs(total - 1.0) > sum_tol)
  {
    throw ValidationError("probs", "sum to " + std::to_string(total) + ", expected 1");
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  for (std::size_t idx : order)
  {
    if (probs[idx] == 0.0)
    {
      continue;
    }
    bool const duplicate = !points_.empty() && std::equal(points_.back().begin(), points_.back().end(),
                                                         points[idx].begin(), [](double x, double y) {
                                                           return same_value(x, y);
                                                         });
    if (duplicate)
    {
      probs_.back() += probs[idx] / total;
    }
    else
    {
      points_.push_back(std::move(points[idx]));
      probs_.push_back(probs[idx] / total);
    }
  }
}

JointDist JointDist::product(std::span<DiscreteDist const> items, std::size_t support_cap)
{
  if (items.empty())
  {
    throw ValidationError("items", "need at least one item");
  }
  std::size_t size = 1;
  for (DiscreteDist const &d : items)
  {
    if (size > support_cap / d.size() + 1)
    {
      throw SizeError("joint support", support_cap + 1, support_cap);
    }
    size *= d.size();
  }
  if (size > support_cap)
  {
    throw SizeError("joint support", size, support_cap);
  }
  std::vector<std::vector<double>> points(size, std::vector<double>(items.size()));
  std::vector<double> probs(size, 1.0);
  for (std::size_t k = 0; k < size; ++k)
  {
    std::size_t rest = k;
    for (std::size_t i = items.size(); i-- > 0;)
    {
      std::size_t const a = rest % items[i].size();
      rest /= items[i].size();
      points[k][i] = items[i].support()[a];
      probs[k] *= items[i].probs()[a];
    }
  }
  return JointDist(std::move(points), std::move(probs));
}

DiscreteDist JointDist::marginal(std::size_t item) const
{
  std::size_t const items[] = {item};
  return sum_over(items);
}

DiscreteDist JointDist::sum_over(std::span<std::size_t const> items) const
{
  std::vector<Atom> atoms(points_.size());
  for (std::size_t k = 0; k < points_.size(); ++k)
  {
    double s = 0.0;
    for (std::size_t i : items)
    {
      if (i >= dim_)
      {
        throw ValidationError("items", "item index out of range");
      }
      s += points_[k][i];
    }
    atoms[k] = {s, probs_[k]};
  }
  return DiscreteDist::from_atoms(std::move(atoms));
}

DiscreteDist JointDist::sum_all() const
{
  std::vector<std::size_t> all(dim_);
  std::iota(all.begin(), all.end(), 0);
  return sum_over(all);
}

MarketInstance MarketInstance::independent(std::string label, std::vector<std::vector<DiscreteDist>> grid)
{
  if (grid.empty())
  {
    throw ValidationError("items", "need at least one item");
  }
  std::size_t const buyers = grid.front().size();
  if (buyers == 0)
  {
    throw ValidationError("buyers", "need at least one buyer");
  }
  for (auto const &row : grid)
  {
    if (row.size() != buyers)
    {
      throw ValidationError("grid", "every item needs one distribution per buyer");
    }
  }
  MarketInstance inst;
  inst.label_ = std::move(label);
  inst.n_items_ = grid.size();
  inst.n_buyers_ = buyers;
  inst.grid_ = std::move(grid);
  return inst;
}

MarketInstance MarketInstance::single_buyer(std::string label, std::vector<DiscreteDist> items)
{
  std::vector<std::vector<DiscreteDist>> grid;
  grid.reserve(items.size());
  for (DiscreteDist &d : items)
  {
    grid.push_back({std::move(d)});
  }
  return independent(std::move(label), std::move(grid));
}

MarketInstance MarketInstance::correlated(std::string label, JointDist joint)
{
  MarketInstance inst;
  inst.label_ = std::move(label);
  inst.n_items_ = joint.dim();
  inst.n_buyers_ = 1;
  inst.joint_ = std::move(joint);
  return inst;
}

std::vector<std::vector<DiscreteDist>> const &MarketInstance::grid() const
{
  if (joint_)
  {
    throw PreconditionError("instance '" + label_ + "' is correlated; no independent grid");
  }
  return grid_;
}

std::vector<DiscreteDist> const &MarketInstance::item_bidders(std::size_t item) const
{
  return grid().at(item);
}

std::vector<DiscreteDist> MarketInstance::buyer_items(std::size_t buyer) const
{
  auto const &g = grid();
  std::vector<DiscreteDist> out;
  out.reserve(g.size());
  for (auto const &row : g)
  {
    out.push_back(row.at(buyer));
  }
  return out;
}

JointDist const &MarketInstance::joint() const
{
  if (!joint_)
  {
    throw PreconditionError("instance '" + label_ + "' is independent; no explicit joint");
  }
  return *joint_;
}

DiscreteDist MarketInstance::marginal(std::size_t item) const
{
  if (n_buyers_ != 1)
  {
    throw PreconditionError("marginal() needs a single-buyer instance");
  }
  if (joint_)
  {
    return joint_->marginal(item);
  }
  return grid_.at(item).front();
}

JointDist MarketInstance::to_joint(std::size_t support_cap) const
{
  if (n_buyers_ != 1)
  {
    throw PreconditionError("to_joint() needs a single-buyer instance");
  }
  if (joint_)
  {
    if (joint_->size() > support_cap)
    {
      throw SizeError("joint support", joint_->size(), support_cap);
    }
    return *joint_;
  }
  return JointDist::product(buyer_items(0), support_cap);
}

RevenueEstimate RevenueEstimate::exact(double value)
{
  RevenueEstimate r;
  r.value = value;
  return r;
}

RevenueEstimate RevenueEstimate::monte_carlo(double value, std::uint64_t samples, double std_error,
                                             std::uint64_t seed)
{
  RevenueEstimate r;
  r.value = value;
  r.kind = Kind::monte_carlo;
  r.samples = samples;
  r.std_error = std_error;
  r.seed = seed;
  return r;
}

void to_json(json &j, RevenueEstimate const &r)
{
  j = json{{"value", r.value},
           {"kind", r.kind == RevenueEstimate::Kind::exact ? "exact" : "monte-carlo"},
           {"samples", r.samples},
           {"std_error", r.std_error}};
  if (r.seed)
  {
    j["seed"] = *r.seed;
  }
}

void to_json(json &j, DiscreteDist const &d)
{
  j = json{{"support", std::vector<double>(d.support().begin(), d.support().end())},
           {"probs", std::vector<double>(d.probs().begin(), d.probs().end())}};
}

namespace {

constexpr double kLoadSumTol = 1e-9;

json const &require(json const &obj, char const *key, std::string const &path)
{
  if (!obj.is_object() || !obj.contains(key))
  {
    throw ValidationError(path + "/" + key, "missing");
  }
  return obj.at(key);
}

std::size_t positive_count(json const &v, std::string const &path)
{
  if (!v.is_number_integer() || v.get<long long>() <= 0)
  {
    throw ValidationError(path, "must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> number_array(json const &v, std::string const &path)
{
  if (!v.is_array())
  {
    throw ValidationError(path, "must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
  {
    if (!v[k].is_number())
    {
      throw ValidationError(path + "/" + std::to_string(k), "must be a number");
    }
    out.push_back(v[k].get<double>());
  }
  return out;
}

// Re-throws a ValidationError from the distribution layer under `path`.
template <class F>
auto at_path(std::string const &path, F &&f)
{
  try
  {
    return f();
  }
  catch (ValidationError const &e)
  {
    std::string const msg = e.what();
    std::string const prefix = e.field() + ": ";
    throw ValidationError(path + "/" + e.field(), msg.substr(msg.rfind(prefix, 0) == 0 ? prefix.size() : 0));
  }
}

DiscreteDist dist_from_json(json const &v, std::string const &path)
{
  auto support = number_array(require(v, "support", path), path + "/support");
  auto probs = number_array(require(v, "probs", path), path + "/probs");
  return at_path(path, [&] {
    if (support.size() != probs.size())
    {
      throw ValidationError("probs", "length differs from support");
    }
    double const total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > kLoadSumTol)
    {
      throw ValidationError("probs", "sum to " + std::to_string(total) + ", expected 1");
    }
    std::vector<Atom> atoms(support.size());
    for (std::size_t k = 0; k < atoms.size(); ++k)
    {
      atoms[k] = {support[k], probs[k]};
    }
    return DiscreteDist::from_atoms(std::move(atoms), kLoadSumTol);
  });
}

}  // namespace

MarketInstance instance_from_json(json const &doc)
{
  if (!doc.is_object())
  {
    throw ValidationError("", "instance document must be a JSON object");
  }
  std::string label = doc.contains("label") && doc["label"].is_string() ? doc["label"].get<std::string>() : "";
  std::size_t const items = positive_count(require(doc, "items", ""), "/items");
  std::size_t const buyers = positive_count(require(doc, "buyers", ""), "/buyers");
  bool const has_grid = doc.contains("grid");
  bool const has_joint = doc.contains("joint");
  if (has_grid == has_joint)
  {
    throw ValidationError("/", "exactly one of \"grid\" and \"joint\" must be present");
  }
  if (has_grid)
  {
    json const &g = doc["grid"];
    if (!g.is_array() || g.size() != items)
    {
      throw ValidationError("/grid", "must be an array with one row per item");
    }
    std::vector<std::vector<DiscreteDist>> grid(items);
    for (std::size_t i = 0; i < items; ++i)
    {
      std::string const row_path = "/grid/" + std::to_string(i);
      if (!g[i].is_array() || g[i].size() != buyers)
      {
        throw ValidationError(row_path, "must hold one distribution per buyer");
      }
      for (std::size_t j = 0; j < buyers; ++j)
      {
        grid[i].push_back(dist_from_json(g[i][j], row_path + "/" + std::to_string(j)));
      }
    }
    return MarketInstance::independent(std::move(label), std::move(grid));
  }
  if (buyers != 1)
  {
    throw ValidationError("/buyers", "a correlated joint requires exactly one buyer");
  }
  json const &j = doc["joint"];
  json const &support = require(j, "support", "/joint");
  auto probs = number_array(require(j, "probs", "/joint"), "/joint/probs");
  if (!support.is_array() || support.size() != probs.size())
  {
    throw ValidationError("/joint/support", "must be an array with one vector per probability");
  }
  std::vector<std::vector<double>> points;
  points.reserve(support.size());
  for (std::size_t k = 0; k < support.size(); ++k)
  {
    std::string const path = "/joint/support/" + std::to_string(k);
    points.push_back(number_array(support[k], path));
    if (points.back().size() != items)
    {
      throw ValidationError(path, "must have one value per item");
    }
  }
  return at_path("/joint", [&] {
    return MarketInstance::correlated(std::move(label), JointDist(std::move(points), std::move(probs), kLoadSumTol));
  });
}

MarketInstance load_instance(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ValidationError("instance", "cannot open " + path.string());
  }
  json doc;
  try
  {
    doc = json::parse(in);
  }
  catch (json::parse_error const &e)
  {
    throw ValidationError("instance", std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

json instance_to_json(MarketInstance const &inst)
{
  json doc{{"label", inst.label()}, {"items", inst.n_items()}, {"buyers", inst.n_buyers()}};
  if (inst.is_correlated())
  {
    doc["joint"] = json{{"support", inst.joint().points()}, {"probs", inst.joint().probs()}};
  }
  else
  {
    json grid = json::array();
    for (auto const &row : inst.grid())
    {
      json r = json::array();
      for (DiscreteDist const &d : row)
      {
        r.push_back(d);
      }
      grid.push_back(std::move(r));
    }
    doc["grid"] = std::move(grid);
  }
  return doc;
}

}  // namespace mechrev
