#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "ftrect/presets.hpp"
#include "ftrect/scenario_io.hpp"

using namespace ftrect;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> issues_of(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const ValidationError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& path) {
  return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) { return s.rfind(path, 0) == 0; });
}

}  // namespace

TEST_CASE("scenario documents round-trip through json") {
  for (const Scenario& sc : all_presets()) {
    const json doc = scenario_to_json(sc);
    const Scenario back = scenario_from_json(doc);
    CHECK(scenario_to_json(back) == doc);
  }
}

TEST_CASE("an empty document yields the defaults") {
  const Scenario sc = scenario_from_json(json::object());
  CHECK(scenario_to_json(sc) == scenario_to_json(Scenario{}));
  CHECK(sc.voltage.p == 5);
  CHECK(sc.voltage.gamma == 0.5);
  CHECK(sc.current.eps_bl == 1.0);
}

TEST_CASE("validation reports every issue with its field path") {
  const json doc = {{"dt", -1.0},
                    {"gains", {{"voltage", {{"gamma", 0.0}, {"p", 7}}}, {"current", {{"q", 4}}}}},
                    {"bogus", 1},
                    {"plant", {{"l", "big"}}}};
  const auto issues = issues_of(doc);
  CHECK(mentions(issues, "dt"));
  CHECK(mentions(issues, "gains.voltage.gamma"));
  CHECK(mentions(issues, "gains.voltage.p"));
  CHECK(mentions(issues, "gains.current.q"));
  CHECK(mentions(issues, "bogus"));
  CHECK(mentions(issues, "plant.l"));
}

TEST_CASE("load outside the declared disturbance bound is rejected") {
  const json doc = {{"load", {{"kind", "piecewise_constant_power"}, {"segments", {{0.0, 5.0e4}}}}}};
  CHECK(mentions(issues_of(doc), "disturbance"));
}

TEST_CASE("overrides replace existing fields and reject unknown paths") {
  json doc = scenario_to_json(voltage_comparison());
  apply_overrides(doc, {"controller=pi_pr", "gains.voltage.eta=2.5", "load.segments=[[0, 100]]", "name=renamed"});
  CHECK(doc["controller"] == "pi_pr");
  CHECK(doc["gains"]["voltage"]["eta"] == 2.5);
  CHECK(doc["load"]["segments"][0][1] == 100);
  CHECK(doc["name"] == "renamed");
  CHECK_THROWS_AS(apply_overrides(doc, {"gains.voltage.nope=1"}), ValidationError);
  CHECK_THROWS_AS(apply_overrides(doc, {"no_equals_sign"}), ValidationError);
}

TEST_CASE("bundled scenario files match the presets") {
  const fs::path dir = FTRECT_SCENARIO_DIR;
  for (const Scenario& sc : all_presets()) {
    const fs::path file = dir / (sc.name + ".json");
    INFO(file.string());
    REQUIRE(fs::exists(file));
    CHECK(scenario_to_json(load_scenario(file)) == scenario_to_json(sc));
  }
}

TEST_CASE("malformed files are validation errors") {
  const fs::path tmp = fs::temp_directory_path() / "ftrect_malformed.json";
  std::ofstream(tmp) << "{ \"dt\": ";
  CHECK_THROWS_AS(load_scenario(tmp), ValidationError);
  fs::remove(tmp);
  CHECK_THROWS_AS(load_scenario(fs::temp_directory_path() / "ftrect_missing.json"), ValidationError);
}
