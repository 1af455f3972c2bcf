#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "subdiv/app.h"
#include "subdiv/text.h"
#include "support.h"

using namespace subdiv;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string bundle() { return testing::data_path("ieee14"); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("subdiv_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> csv_rows(const fs::path& file) {
  std::vector<std::string> rows;
  const std::string content = text::read_file(file.string());
  for (auto line : text::lines(content))
    if (!line.empty()) rows.emplace_back(line);
  return rows;
}

void write(const fs::path& p, const std::string& content) { std::ofstream(p) << content; }

}  // namespace

TEST_CASE("impact subcommand") {
  const Run r = cli({"impact", "--bundle", bundle()});
  CHECK(r.code == 0);
  CHECK(r.out.find("HIS: 2, 4") != std::string::npos);
  CHECK(cli({"impact", "--bundle", bundle(), "--threshold", "0.9999"}).out.find("HIS: 2, 4\n") !=
        std::string::npos);
  CHECK(cli({"impact", "--bundle", bundle(), "--threshold", "0.1"}).out.find("HIS: 2, 3, 4, 5") !=
        std::string::npos);

  const fs::path dir = scratch("impact_err");
  write(dir / "empty.csv", "");
  const Run empty = cli({"impact", "--impact", (dir / "empty.csv").string(), "--p-total", "100"});
  CHECK(empty.code == 2);
  CHECK_FALSE(empty.err.empty());
  CHECK(cli({"impact", "--impact", (dir / "missing.csv").string()}).code == 2);
  CHECK(cli({"impact", "--bundle", bundle(), "--threshold", "1.5"}).code == 2);
}

TEST_CASE("color subcommand writes one summary row per run") {
  const fs::path dir = scratch("color");
  const Run r = cli({"color", "--bundle", bundle(), "--out", dir.string(), "--dot"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(dir / "summary.csv");
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].rfind("# config_hash=", 0) == 0);
  CHECK(rows[2].rfind("game,", 0) == 0);
  CHECK(rows[2].find(",yes,ok") != std::string::npos);
  CHECK(fs::exists(dir / "color_game_0.dot"));
  CHECK(fs::exists(dir / "security_graph.dot"));

  const auto doc = nlohmann::json::parse(text::read_file((dir / "color_game_0.json").string()));
  CHECK(doc["status"] == "ok");
  CHECK(doc["vertices"].size() == 44);
  CHECK(doc["provenance"].contains("config_hash"));
}

TEST_CASE("repeat fans out seeds") {
  const fs::path dir = scratch("repeat");
  REQUIRE(cli({"color", "--bundle", bundle(), "--algos", "random", "--repeat", "30", "--workers",
               "4", "--seed", "9", "--out", dir.string()})
              .code == 0);
  const auto rows = csv_rows(dir / "summary.csv");
  REQUIRE(rows.size() == 32);
  std::set<std::string> seeds;
  for (std::size_t i = 2; i < rows.size(); ++i) seeds.insert(std::string(text::split(rows[i], ',')[2]));
  CHECK(seeds.size() == 30);
}

TEST_CASE("attack subcommand") {
  const fs::path dir = scratch("attack");
  REQUIRE(cli({"attack", "--bundle", bundle(), "--out", dir.string()}).code == 0);
  CHECK(csv_rows(dir / "attack.csv").size() == 6);

  write(dir / "k0.json", R"({"mode":"capability","k":0,"target_substations":[2],"p_total_mw":187.4})");
  const fs::path out0 = dir / "k0";
  REQUIRE(cli({"attack", "--bundle", bundle(), "--scenario", (dir / "k0.json").string(), "--out",
               out0.string()})
              .code == 0);
  const auto doc0 = nlohmann::json::parse(text::read_file((out0 / "attack.json").string()));
  REQUIRE(doc0["results"].size() == 4);
  for (const auto& row : doc0["results"]) CHECK(row["total_p_lol_mw"] == 0.0);

  write(dir / "budget.json", R"({"mode":"budget","k":5,"target_substations":[2],"p_total_mw":187.4})");
  const fs::path outb = dir / "budget";
  REQUIRE(cli({"attack", "--bundle", bundle(), "--scenario", (dir / "budget.json").string(),
               "--out", outb.string()})
              .code == 0);
  const auto docb = nlohmann::json::parse(text::read_file((outb / "attack.json").string()));
  for (const auto& row : docb["results"]) CHECK(row["entry_compromised_fraction"] == 1.0);

  write(dir / "bad.json", R"({"mode":"capability","k":8,"target_substations":[77]})");
  CHECK(cli({"attack", "--bundle", bundle(), "--scenario", (dir / "bad.json").string()}).code == 2);
}

TEST_CASE("compare subcommand") {
  const fs::path dir = scratch("compare");
  REQUIRE(cli({"compare", "--bundle", bundle(), "--algos", "greedy", "--out", dir.string()}).code ==
          0);
  CHECK(csv_rows(dir / "compare.csv").size() == 3);
  CHECK(cli({"compare", "--bundle", bundle(), "--algos", "luby"}).code == 2);
  CHECK(cli({"compare", "--bogus"}).code == 2);
  CHECK(cli({}).code == 2);
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b})
    for (const char* cmd : {"impact", "color", "attack", "compare"})
      REQUIRE(cli({cmd, "--bundle", bundle(), "--repeat", "5", "--workers", "3", "--seed", "42",
                   "--out", dir.string()})
                  .code == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    const std::string x = text::read_file(entry.path().string());
    CHECK_MESSAGE(x == text::read_file((b / name).string()), name);
    CHECK_MESSAGE(x.find("config_hash") != std::string::npos, name);
    ++files;
  }
  CHECK(files > 10);
}

TEST_CASE("data directory from the environment") {
  const fs::path dir = scratch("env");
  const std::string cmd = std::string(SUBDIV_CLI_PATH) + " impact > " + (dir / "out.txt").string();
  CHECK(std::system(("SUBDIV_DATA_DIR=" + bundle() + " " + cmd).c_str()) == 0);
  CHECK(text::read_file((dir / "out.txt").string()).find("HIS: 2, 4") != std::string::npos);
  CHECK(std::system(("SUBDIV_DATA_DIR=/nonexistent " + cmd + " 2>/dev/null").c_str()) != 0);
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
