#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uolab/json_io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = UOLAB_CLI_PATH;
const std::string kFixtures = UOLAB_FIXTURES_DIR;

int run_cli(const std::string& args) {
  int rc = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string capture(const std::string& args) {
  std::string tmp = (fs::temp_directory_path() / "uolab_cli_capture.txt").string();
  [[maybe_unused]] int rc = std::system((kCli + " " + args + " > " + tmp + " 2>&1").c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

}  // namespace

TEST_CASE("fixture gallery") {
  std::string out = capture("list-fixtures");
  for (const char* name : {"c0_partial_sums", "block_average_martingale", "polya_urn",
                           "dyadic_closed_martingale"})
    CHECK(out.find(name) != std::string::npos);
  CHECK(capture("--list-fixtures") == out);
}

TEST_CASE("shipped fixtures run clean") {
  for (const char* name : {"c0_partial_sums", "block_average_martingale", "polya_urn",
                           "dyadic_closed_martingale"}) {
    fs::path out = fresh_dir(std::string("uolab_out_") + name);
    int rc = run_cli("run --config " + kFixtures + "/" + name + ".json --out " + out.string());
    CHECK_MESSAGE(rc == 0, name);
    CHECK(fs::exists(out / (std::string(name) + "_report.json")));
    CHECK(fs::exists(out / (std::string(name) + "_metrics.csv")));
  }
}

TEST_CASE("validate subcommand") {
  CHECK(run_cli("validate --config " + kFixtures + "/c0_partial_sums.json") == 0);
  CHECK(run_cli("validate --config /no/such/file.json") == 2);
}

TEST_CASE("schema violations exit 2 with a field path") {
  fs::path bad = write_config("uolab_bad_stages.json", R"({
    "process": {"kind": "trace", "values": [[1, 1], [1, 1]]},
    "model": {"dim": 2, "weights": [0.5, 0.5], "norm": "l1", "tag": "l1"},
    "filtration": {"stages": []}
  })");
  CHECK(run_cli("run --config " + bad.string()) == 2);
  std::string msg = capture("run --config " + bad.string());
  CHECK(msg.find("filtration.stages") != std::string::npos);

  fs::path garbled = write_config("uolab_garbled.json", "{not json");
  CHECK(run_cli("run --config " + garbled.string()) == 2);

  fs::path unknown = write_config("uolab_unknown_fixture.json",
                                  R"({"process": {"kind": "fixture", "fixture": "nope"}})");
  CHECK(run_cli("run --config " + unknown.string()) == 2);
}

TEST_CASE("verdict mismatches exit 1 naming the failures") {
  fs::path cfg = write_config("uolab_mismatch.json", R"({
    "name": "c0_partial_sums",
    "process": {"kind": "fixture", "fixture": "c0_partial_sums", "horizon": 50},
    "expect": {"limit_candidate_admissible": true}
  })");
  fs::path out = fresh_dir("uolab_out_mismatch");
  CHECK(run_cli("run --config " + cfg.string() + " --out " + out.string()) == 1);
  std::string msg = capture("run --config " + cfg.string() + " --out " + out.string());
  CHECK(msg.find("limit_candidate_admissible") != std::string::npos);
}

TEST_CASE("reports are byte-identical across reruns") {
  fs::path a = fresh_dir("uolab_det_a");
  fs::path b = fresh_dir("uolab_det_b");
  std::string cfg = kFixtures + "/dyadic_closed_martingale.json";
  REQUIRE(run_cli("run --config " + cfg + " --seed 31 --out " + a.string()) == 0);
  REQUIRE(run_cli("run --config " + cfg + " --seed 31 --out " + b.string()) == 0);
  for (const auto& entry : fs::directory_iterator(a)) {
    fs::path twin = b / entry.path().filename();
    REQUIRE(fs::exists(twin));
    CHECK(slurp(entry.path()) == slurp(twin));
  }

  // a different seed rolls a different generator vector
  fs::path c = fresh_dir("uolab_det_c");
  REQUIRE(run_cli("run --config " + cfg + " --seed 32 --out " + c.string()) == 0);
  CHECK(slurp(a / "dyadic_closed_martingale_report.json") !=
        slurp(c / "dyadic_closed_martingale_report.json"));
}

TEST_CASE("zero tolerance reruns keep the verdicts on exact fixtures") {
  for (const char* name : {"c0_partial_sums", "block_average_martingale"}) {
    fs::path a = fresh_dir(std::string("uolab_tol_a_") + name);
    fs::path b = fresh_dir(std::string("uolab_tol_b_") + name);
    std::string cfg = kFixtures + "/" + name + ".json";
    REQUIRE(run_cli("run --config " + cfg + " --out " + a.string()) == 0);
    REQUIRE(run_cli("run --config " + cfg + " --tolerance 0 --out " + b.string()) == 0);
    uolab::Json ja, jb;
    std::ifstream(a / (std::string(name) + "_report.json")) >> ja;
    std::ifstream(b / (std::string(name) + "_report.json")) >> jb;
    CHECK(ja["verdicts"] == jb["verdicts"]);
  }
}

TEST_CASE("every csv row round-trips through the json report") {
  fs::path out = fresh_dir("uolab_roundtrip");
  std::string cfg = kFixtures + "/block_average_martingale.json";
  REQUIRE(run_cli("run --config " + cfg + " --out " + out.string()) == 0);
  uolab::Json report;
  std::ifstream(out / "block_average_martingale_report.json") >> report;

  std::ifstream metrics(out / "block_average_martingale_metrics.csv");
  std::string line;
  std::getline(metrics, line);
  CHECK(line == "experiment,metric,value");
  while (std::getline(metrics, line)) {
    size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
    std::string metric = line.substr(c1 + 1, c2 - c1 - 1);
    std::string value = line.substr(c2 + 1);
    bool in_scalars = report["scalar_stats"].contains(metric);
    bool in_verdicts = report["verdicts"].contains(metric);
    bool known = in_scalars || in_verdicts;
    CHECK_MESSAGE(known, metric);
    if (in_scalars)
      CHECK(uolab::format_double(report["scalar_stats"][metric].get<double>()) == value);
    if (in_verdicts)
      CHECK(std::string(report["verdicts"][metric].get<bool>() ? "true" : "false") == value);
  }

  // profile CSVs carry exactly the c arrays from the report
  for (const auto& prof : report["profiles"]) {
    fs::path csv = out / ("block_average_martingale_" + prof["name"].get<std::string>() + ".csv");
    REQUIRE(fs::exists(csv));
    std::ifstream in(csv);
    std::getline(in, line);
    CHECK(line == "k,c_k");
    size_t k = 0;
    while (std::getline(in, line)) {
      size_t comma = line.find(',');
      CHECK(line.substr(0, comma) == std::to_string(k + 1));
      CHECK(line.substr(comma + 1) ==
            uolab::format_double(prof["c"][k].get<double>()));
      ++k;
    }
    CHECK(k == prof["c"].size());
  }
}

TEST_CASE("explicit chain configs run the doob pipeline") {
  fs::path cfg = write_config("uolab_chain.json", R"({
    "name": "chain_demo",
    "chain": {
      "mu": ["1/4", "1/4", "1/4", "1/4"],
      "partitions": [[[0, 1, 2, 3]], [[0, 1], [2, 3]], [[0], [1], [2], [3]]]
    },
    "process": {"kind": "closed", "x": [1.0, 0.9, 0.3, 0.4]},
    "expect": {"is_martingale": true, "uo_cauchy_converged": true}
  })");
  fs::path out = fresh_dir("uolab_out_chain");
  CHECK(run_cli("run --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "doob_report.json"));
}
