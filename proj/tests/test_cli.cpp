#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "sle_cli/cli.hpp"
#include "sle_cli/output.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result sle_run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"sle"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = sle::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("sle_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("trace runs are deterministic and replayable from the config echo") {
  const fs::path d = fresh_dir("trace");
  const std::string a = (d / "a").string(), b = (d / "b").string(), c = (d / "c").string();
  REQUIRE(sle_run({"trace", "--kappa", "6", "--steps", "300", "--seed", "5", "--svg", "--out", a})
              .code == 0);
  REQUIRE(sle_run({"trace", "--kappa", "6", "--steps", "300", "--seed", "5", "--svg", "--out", b})
              .code == 0);
  for (const char* f : {"trace.csv", "trace.json", "trace.svg", "trace.config.toml"})
    CHECK(slurp(fs::path(a) / f) == slurp(fs::path(b) / f));
  const std::string cfg = (fs::path(a) / "trace.config.toml").string();
  REQUIRE(sle_run({"--config", cfg, "trace", "--out", c}).code == 0);
  CHECK(slurp(fs::path(a) / "trace.csv") == slurp(fs::path(c) / "trace.csv"));
  // A different seed gives a different trace.
  REQUIRE(sle_run({"trace", "--kappa", "6", "--steps", "300", "--seed", "6", "--out", c}).code == 0);
  CHECK(slurp(fs::path(a) / "trace.csv") != slurp(fs::path(c) / "trace.csv"));
}

TEST_CASE("zero-driving trace is the vertical segment") {
  const fs::path d = fresh_dir("zero");
  REQUIRE(sle_run({"trace", "--zero-driving", "--steps", "16", "--svg", "--out", d.string()})
              .code == 0);
  std::istringstream csv(slurp(d / "trace.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,re,im");
  while (std::getline(csv, line)) CHECK(line.find(",0,") != std::string::npos);
  CHECK(slurp(d / "trace.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("every output is named by its manifest") {
  const fs::path d = fresh_dir("manifest");
  REQUIRE(sle_run({"eigen", "--kappa", "4", "--grid", "256", "--out", d.string()}).code == 0);
  const auto m = nlohmann::json::parse(slurp(d / "eigen.manifest.json"));
  CHECK(m["schema_version"] == 1);
  CHECK(m["params"]["kappa"] == 4.0);
  std::size_t named = 0;
  for (const auto& f : m["outputs"]) {
    CHECK(fs::exists(d / f.get<std::string>()));
    ++named;
  }
  std::size_t on_disk = 0;
  for (const auto& e : fs::directory_iterator(d))
    on_disk += e.path().filename() != "eigen.manifest.json";
  CHECK(named == on_disk);
  const auto j = nlohmann::json::parse(slurp(d / "eigen.json"));
  CHECK(j["reference_lambda"] == 0.5);
}

TEST_CASE("survival embeds the reference rate") {
  const fs::path d = fresh_dir("survival");
  REQUIRE(sle_run({"survival", "--kappa", "4", "--paths", "300", "--ds", "1e-3", "--smax", "3",
                   "--out", d.string()})
              .code == 0);
  const auto j = nlohmann::json::parse(slurp(d / "survival.json"));
  CHECK(j["reference_lambda"] == 0.5);
  CHECK(j["fits"][0]["quantity"] == "decay_rate");
}

TEST_CASE("exit codes separate usage, numerical and resource failures") {
  const fs::path d = fresh_dir("codes");
  const std::string out = d.string();
  CHECK(sle_run({"hitting", "--eps", "1.5", "--paths", "5", "--out", out}).code == 2);
  CHECK(sle_run({"hitting", "--no-such-flag"}).code == 2);
  CHECK(sle_run({"twopoint", "--eps", "0.2", "--separations", "0.3", "--out", out}).code == 2);
  CHECK(sle_run({"survival", "--points", "1", "--out", out}).code == 2);
  CHECK(sle_run({}).code == 2);
  CHECK(sle_run({"boxdim", "--steps", "50", "--eps", "0.2,0.1,0.01", "--max-gap", "1", "--out",
                 out})
            .code == 3);
  CHECK(sle_run({"partition", "--kmax", "14", "--budget", "1000", "--out", out}).code == 4);
  // Nothing was computed for the rejected runs.
  CHECK_FALSE(fs::exists(d / "hitting.csv"));
  CHECK_FALSE(fs::exists(d / "partition.csv"));
  CHECK(sle_run({"--help"}).code == 0);
}

TEST_CASE("k1 = k2 = 1 partition run") {
  const fs::path d = fresh_dir("partition");
  REQUIRE(sle_run({"partition", "--kmax", "1", "--out", d.string()}).code == 0);
  const auto j = nlohmann::json::parse(slurp(d / "partition.json"));
  CHECK(j["max_ratio"] == j["base_ratio"]);
}

TEST_CASE("report tables") {
  const fs::path empty = fresh_dir("report_empty");
  const Result r = sle_run({"report", empty.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "| experiment | kappa | quantity | reference | fitted | stderr | verdict |\n"
                 "|---|---|---|---|---|---|---|\n");

  const fs::path d = fresh_dir("report");
  const std::string out = d.string();
  REQUIRE(sle_run({"eigen", "--kappa", "6", "--grid", "128", "--name", "e6", "--out", out}).code == 0);
  REQUIRE(sle_run({"eigen", "--kappa", "2", "--grid", "128", "--name", "e2", "--out", out}).code == 0);
  REQUIRE(sle_run({"partition", "--kmax", "3", "--out", out}).code == 0);
  const fs::path md = d / "report.md";
  REQUIRE(sle_run({"report", out, "--out", md.string()}).code == 0);
  const std::string text = slurp(md);
  const auto e2 = text.find("| eigen | 2 |");
  const auto e6 = text.find("| eigen | 6 |");
  const auto part = text.find("| partition |");
  REQUIRE(e2 != std::string::npos);
  REQUIRE(e6 != std::string::npos);
  REQUIRE(part != std::string::npos);
  CHECK(e2 < e6);
  CHECK(e6 < part);
}

TEST_CASE("config values are echoed at full precision") {
  const std::string toml = sle::cli::to_toml_section("x", {{"kappa", 8.0 / 3.0}, {"eps", {0.1, 0.2}}});
  CHECK(toml == "[x]\nkappa = 2.6666666666666665\neps = [0.1,0.2]\n");
}
