#include <doctest.h>

#include <json.hpp>

#include "mechrev/error.hpp"
#include "mechrev/instance.hpp"

using namespace mechrev;
using nlohmann::json;

namespace {

std::string error_field(const json &doc)
{
  try
  {
    instance_from_json(doc);
  }
  catch (const ValidationError &e)
  {
    return e.field();
  }
  return "";
}

json two_item()
{
  return json::parse(R"({"items": 2, "buyers": 1, "grid": [
    [{"support": [1, 2], "probs": [0.5, 0.5]}],
    [{"support": [1, 3], "probs": [0.5, 0.5]}]]})");
}

}  // namespace

TEST_CASE("round trip through json")
{
  auto inst = instance_from_json(two_item());
  CHECK(inst.n_items() == 2);
  CHECK(inst.n_buyers() == 1);
  auto again = instance_from_json(instance_to_json(inst));
  CHECK(again.marginal(1) == inst.marginal(1));
}

TEST_CASE("validation errors name the field")
{
  auto doc = two_item();
  doc["grid"][1][0]["probs"] = {0.5, 0.6};
  CHECK(error_field(doc) == "/grid/1/0/probs");

  doc = two_item();
  doc["grid"][0][0]["support"] = {1, -2};
  CHECK(error_field(doc).rfind("/grid/0/0", 0) == 0);

  doc = two_item();
  doc["items"] = 3;
  CHECK(error_field(doc) == "/grid");

  doc = two_item();
  doc.erase("buyers");
  CHECK(error_field(doc) == "/buyers");

  doc = two_item();
  doc["joint"] = json::object();
  CHECK_FALSE(error_field(doc).empty());
}

TEST_CASE("correlated instances")
{
  auto doc = json::parse(R"({"items": 2, "buyers": 1,
    "joint": {"support": [[1, 0], [0, 1], [1, 0]], "probs": [0.25, 0.5, 0.25]}})");
  auto inst = instance_from_json(doc);
  CHECK(inst.is_correlated());
  CHECK(inst.joint().size() == 2);
  CHECK(inst.marginal(0).prob_at_least(1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(inst.grid(), PreconditionError);
  doc["buyers"] = 2;
  CHECK_THROWS_AS(instance_from_json(doc), ValidationError);
}

TEST_CASE("product joint")
{
  auto inst = instance_from_json(two_item());
  auto j = inst.to_joint(100);
  CHECK(j.size() == 4);
  CHECK(j.sum_all().prob_at_least(4.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(inst.to_joint(3), SizeError);
}
