#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(QWALK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qwalk_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("runs a command from a config file") {
  const auto dir = scratch("ok");
  const auto cfg = write_file(dir / "c.json",
                              R"({"experiment": "distribution", "steps": [4], "bin_width": 2})");
  CHECK(run("distribution --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "distribution.csv"));
  CHECK(fs::exists(dir / "out" / "histogram.csv"));
  CHECK(fs::exists(dir / "out" / "distribution.meta.json"));
  CHECK(slurp(dir / "out" / "distribution.csv").rfind("ic,xi,theta,zeta,n,j,x,P\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("overrides and determinism") {
  const auto dir = scratch("det");
  const auto cfg = write_file(dir / "c.json",
                              R"({"experiment": "decoherence", "steps": [20], "link_probabilities": [0.2]})");
  const std::string base = "decoherence --config " + cfg.string() + " --realizations 20 --seed 5 --out ";
  REQUIRE(run(base + (dir / "a").string()) == 0);
  REQUIRE(run(base + (dir / "b").string()) == 0);
  CHECK(slurp(dir / "a" / "decoherence.csv") == slurp(dir / "b" / "decoherence.csv"));
  auto meta_a = nlohmann::json::parse(slurp(dir / "a" / "decoherence.meta.json"));
  auto meta_b = nlohmann::json::parse(slurp(dir / "b" / "decoherence.meta.json"));
  CHECK(meta_a["config"]["realizations"] == 20);
  CHECK(meta_a["seed"] == 5);
  meta_a["config"].erase("output");
  meta_b["config"].erase("output");
  CHECK(meta_a == meta_b);
  REQUIRE(run("decoherence --config " + cfg.string() + " --realizations 20 --seed 6 --out " +
              (dir / "c").string()) == 0);
  CHECK(slurp(dir / "a" / "decoherence.csv") != slurp(dir / "c" / "decoherence.csv"));
  fs::remove_all(dir);
}

TEST_CASE("json format flag") {
  const auto dir = scratch("json");
  const auto cfg = write_file(dir / "c.json", R"({"experiment": "distribution", "steps": [2]})");
  CHECK(run("distribution --format json --config " + cfg.string() + " --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "distribution.json"));
  fs::remove_all(dir);
}

TEST_CASE("config errors exit with 2") {
  const auto dir = scratch("bad");
  const auto unknown = write_file(dir / "u.json", R"({"experiment": "heatmap", "colour": 1})");
  CHECK(run("heatmap --config " + unknown.string() + " --out " + dir.string()) == 2);
  const auto pi2 = write_file(dir / "p.json",
                              R"({"experiment": "heatmap", "grid": {"theta": {"max": 1.5707963267948966}}})");
  CHECK(run("heatmap --config " + pi2.string() + " --out " + dir.string()) == 2);
  const auto mismatch = write_file(dir / "m.json", R"({"experiment": "entropy"})");
  CHECK(run("heatmap --config " + mismatch.string() + " --out " + dir.string()) == 2);
  CHECK(run("heatmap --format xml") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("") == 2);
  fs::remove_all(dir);
}

TEST_CASE("numerical failures exit with 3") {
  const auto dir = scratch("num");
  const auto cfg = write_file(dir / "s.json",
                              R"({"experiment": "compare-returns", "realizations": 2, "returns": {"bins": 3, "stable": {"alpha": 0.05}}})");
  CHECK(run("compare-returns --config " + cfg.string() + " --out " + dir.string()) == 3);
  fs::remove_all(dir);
}

TEST_CASE("plot and show-config") {
  const auto dir = scratch("plot");
  CHECK(run("plot heatmap --out " + dir.string()) == 0);
  CHECK(slurp(dir / "heatmap.gp").find("heatmap.csv") != std::string::npos);
  CHECK(run("show-config entropy") == 0);
  CHECK(run("--help") == 0);
  CHECK(run("--version") == 0);
  fs::remove_all(dir);
}

}
