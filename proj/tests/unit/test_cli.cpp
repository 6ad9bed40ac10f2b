#include <catch_amalgamated.hpp>

#ifdef FTRECT_HAVE_CLI

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftrect/cli.hpp"

using namespace ftrect;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ftrect");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("ftrect_cli_" + name);
  fs::remove_all(d);
  return d;
}

std::string scenario(const std::string& name) { return (fs::path(FTRECT_SCENARIO_DIR) / (name + ".json")).string(); }

json read_json(const fs::path& p) { return json::parse(std::ifstream(p)); }

}  // namespace

TEST_CASE("run writes the time series and metrics of the bundled voltage scenario") {
  const fs::path out = fresh_dir("run");
  const CliResult r = cli({"run", scenario("fig2_proposed"), "-o", out.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(out / "fig2_proposed_timeseries.csv"));
  const json m = read_json(out / "fig2_proposed_metrics.json");
  CHECK(m["voltage"]["convergence_time"].get<double>() <= 5e-3);
  std::ifstream csv(out / "fig2_proposed_timeseries.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("t [s],v_dc [V]", 0) == 0);
  fs::remove_all(out);
}

TEST_CASE("overriding the controller to PI slows voltage convergence") {
  const fs::path out = fresh_dir("run_pi");
  const CliResult r = cli({"run", scenario("fig2_proposed"), "-o", out.string(), "--override", "controller=pi_pr"});
  REQUIRE(r.code == kExitOk);
  const json m = read_json(out / "fig2_proposed_metrics.json");
  CHECK(m["controller"] == "pi_pr");
  const auto& t = m["voltage"]["convergence_time"];
  CHECK((t.is_null() || t.get<double>() > 5e-3));
  fs::remove_all(out);
}

TEST_CASE("malformed scenario exits 2 without output files") {
  const fs::path out = fresh_dir("malformed");
  const fs::path bad = fs::temp_directory_path() / "ftrect_cli_bad.json";
  std::ofstream(bad) << "{\"dt\": [1, 2";
  const CliResult r = cli({"run", bad.string(), "-o", out.string()});
  CHECK(r.code == kExitValidation);
  CHECK_FALSE(fs::exists(out));
  fs::remove(bad);
}

TEST_CASE("invalid gains exit 2 before any run") {
  const fs::path out = fresh_dir("gains");
  CHECK(cli({"verify", scenario("fig2_proposed"), "-o", out.string(), "--override", "gains.voltage.gamma=0"}).code ==
        kExitValidation);
  CHECK(cli({"run", scenario("fig2_proposed"), "-o", out.string(), "--override", "gains.voltage.p=7"}).code ==
        kExitValidation);
  CHECK(cli({"run", scenario("fig2_proposed"), "-o", out.string(), "--override", "gains.voltage.unknown=1"}).code ==
        kExitValidation);
  CHECK(cli({"run", scenario("fig2_proposed"), "--no-such-flag"}).code == kExitValidation);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("simulation abort exits 3 and keeps the partial outputs") {
  const fs::path out = fresh_dir("abort");
  const CliResult r = cli({"run", scenario("fig5_current"), "-o", out.string(), "--override", "horizon=0.01",
                           "--override", "load.segments=[[0, 1e-4]]", "--override", "disturbance.delta=1e10",
                           "--override", "disturbance.eps=1e20"});
  CHECK(r.code == kExitAbort);
  const json m = read_json(out / "fig5_current_metrics.json");
  CHECK(m["aborted"] == true);
  fs::remove_all(out);
}

TEST_CASE("comparing a controller with itself gives zero improvement") {
  const fs::path out = fresh_dir("compare_self");
  const CliResult r = cli({"compare", scenario("fig2_proposed"), "-o", out.string(), "--controllers",
                           "proposed,proposed", "--override", "horizon=0.01"});
  REQUIRE(r.code == kExitOk);
  const json c = read_json(out / "fig2_proposed_compare.json");
  CHECK(c["improvement_percent"]["proposed"].get<double>() == 0.0);
  fs::remove_all(out);
}

TEST_CASE("sweep over l and r writes one row per grid point") {
  const fs::path out = fresh_dir("sweep");
  const CliResult r = cli({"sweep", scenario("fig7_parameter_robustness"), "-o", out.string(), "--override",
                           "horizon=0.05", "--grid", "grid.l_factor=[0.9, 1.0, 1.1]", "--grid",
                           "grid.r_factor=[0.9, 1.0, 1.1]"});
  REQUIRE(r.code == kExitOk);
  std::ifstream csv(out / "fig7_parameter_robustness_sweep.csv");
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  while (std::getline(csv, line)) rows += line.empty() ? 0 : 1;
  CHECK(rows == 9);
  fs::remove_all(out);
}

TEST_CASE("sweep with an empty range exits 2") {
  const fs::path out = fresh_dir("sweep_empty");
  CHECK(cli({"sweep", scenario("fig7_parameter_robustness"), "-o", out.string(), "--grid", "grid.l_factor=[]"}).code ==
        kExitValidation);
}

TEST_CASE("list-scenarios names the bundled files") {
  const CliResult r = cli({"list-scenarios"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("fig2_proposed") != std::string::npos);
  CHECK(r.out.find("fig5_current") != std::string::npos);
}

#endif
