#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lcm/cli.hpp"
#include "lcm/config.hpp"

using namespace lcm;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = LCM_CONFIG_DIR;

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lcm");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lcm_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("grids") {
  CHECK(parse_grid("4:12:5", false) == std::vector<double>{4, 6, 8, 10, 12});
  const auto g = parse_grid("0.01:10:4", true);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 0.01);
  CHECK(g[1] == doctest::Approx(0.1));
  CHECK(g[3] == 10.0);
  CHECK(parse_grid("3:3:1", false) == std::vector<double>{3});
  CHECK_THROWS_AS(parse_grid("1:2", false), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:2:3", true), ConfigError);
  CHECK_THROWS_AS(parse_grid("2:1:3", false), ConfigError);
  CHECK_THROWS_AS(parse_grid("a:1:3", false), ConfigError);
}

TEST_CASE("config diagnostics") {
  try {
    parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "x.json");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("x.json:3:", 0) == 0);
  }
  CHECK_THROWS_WITH_AS(parse_body(nlohmann::json::parse(R"({"type":"box","half_widths":[1],"x":2})")),
                       "field 'body.x': unknown field", ConfigError);
  CHECK_THROWS_WITH_AS(parse_body(nlohmann::json::parse(R"({"type":"ball","dim":3,"radius":-1})")),
                       doctest::Contains("field 'body'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_phi(nlohmann::json::parse(R"({"type":"power"})")), "field 'phi.p': missing",
                       ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_body(nlohmann::json::parse(
          R"({"type":"polytope","halfspaces":[{"normal":[1,0],"offset":1},{"normal":[-1,0],"offset":2},
              {"normal":[0,1],"offset":1},{"normal":[0,-1],"offset":1}]})")),
      doctest::Contains("asymmetric"), ConfigError);
  CHECK_THROWS_AS(strip_schema(nlohmann::json::parse(R"({"type":"ball"})"), "f"), ConfigError);
  CHECK_THROWS_AS(strip_schema(nlohmann::json::parse(R"({"schema":"lcm/0"})"), "f"), ConfigError);

  const ConvexBody oct = parse_body(strip_schema(load_json_file(kConfigs + "/octagon.json"), "octagon"));
  CHECK(volume(oct) == doctest::Approx(2.72));
  const NormMeasure mu = parse_measure(nlohmann::json::parse(
      R"({"phi":{"type":"pathological","k_max":3},"L":{"type":"dilate","factor":2,"body":{"type":"lpball","p":"inf","semi_axes":[1,1]}}})"));
  CHECK(mu.dim() == 2);
  CHECK(parse_phi(nlohmann::json::parse(R"({"type":"linear","plateau":1.5})")).plateau == 1.5);
}

TEST_CASE("exit codes") {
  const auto out = scratch("demo.csv").string();
  CHECK(run_cli({"rectangle-demo", "--tmin", "0.01", "--tmax", "10", "--points", "200", "--out", out}) == kExitOk);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("t,area_ball,area_omega,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);

  CHECK(run_cli({"no-such-command"}) == kExitInvalidConfig);
  CHECK(run_cli({"mass", "--measure", kConfigs + "/gaussian3.json"}) == kExitInvalidConfig);
  const auto bad = write_file("bad.json", "{\"schema\": \"lcm/1\", \"type\": \"box\", \"half_widths\": [1, 1,]}");
  CHECK(run_cli({"mass", "--measure", kConfigs + "/gaussian3.json", "--body", bad.string()}) == kExitInvalidConfig);
  const auto unknown = write_file("unknown.json", R"({"schema":"lcm/1","type":"ball","dim":3,"colour":"red"})");
  CHECK(run_cli({"mass", "--measure", kConfigs + "/gaussian3.json", "--body", unknown.string()}) ==
        kExitInvalidConfig);

  // too short a range for the limsup verdict
  const std::vector<std::string> scan = {"ldp-scan", "--measure", kConfigs + "/gaussian3.json", "--body",
                                         kConfigs + "/ball.json", "--grid", "1:2:2", "--out",
                                         scratch("short.csv").string()};
  CHECK(run_cli(scan) == kExitOk);
  auto strict = scan;
  strict.push_back("--strict");
  CHECK(run_cli(strict) == kExitInconclusive);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  auto tail = [&](const std::string& name, const std::string& threads) {
    const auto p = scratch(name).string();
    REQUIRE(run_cli({"tail", "--measure", kConfigs + "/gaussian3.json", "--body", kConfigs + "/box08.json", "--t",
                     "3", "--seed", "7", "--threads", threads, "--out", p}) == kExitOk);
    return slurp(p);
  };
  const std::string a = tail("a.json", "1"), b = tail("b.json", "4"), c = tail("c.json", "1");
  CHECK(a == b);
  CHECK(a == c);
  const auto j = nlohmann::json::parse(a);
  CHECK(number_from_json(j["bracket"]["point"]["log_value"]) < 0.0);
}

TEST_CASE("outputs round-trip") {
  const auto p = scratch("scan.json").string();
  REQUIRE(run_cli({"ldp-scan", "--measure", kConfigs + "/gaussian3.json", "--body", kConfigs + "/ball.json", "--grid",
                   "4:12:5", "--out", p}) == kExitOk);
  const auto j = nlohmann::json::parse(slurp(p));
  const auto q = scratch("scan.csv").string();
  REQUIRE(run_cli({"ldp-scan", "--measure", kConfigs + "/gaussian3.json", "--body", kConfigs + "/ball.json", "--grid",
                   "4:12:5", "--out", q}) == kExitOk);
  std::istringstream csv(slurp(q));
  std::string line;
  std::getline(csv, line);
  std::size_t i = 0;
  while (std::getline(csv, line)) {
    const double rho = std::stod(line.substr(line.find(',') + 1));
    CHECK(rho == number_from_json(j["rows"][i]["rho"]));
    ++i;
  }
  CHECK(i == 5);
  CHECK(number_from_json(nlohmann::json("inf")) == INFINITY);
  CHECK(json_number(-INFINITY) == "-inf");
  CHECK(std::stod(format_double(0.1)) == 0.1);
}
