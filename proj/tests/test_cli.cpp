#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Drives the installed binary end to end. PPFL_CLI_PATH is injected by the
// build so the test always runs the executable it was built beside.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef PPFL_CLI_PATH
#error "PPFL_CLI_PATH must point at the ppfl binary"
#endif

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PPFL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const char* name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  REQUIRE(static_cast<bool>(out));
  out << text;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(static_cast<bool>(in));
  nlohmann::json j;
  in >> j;
  return j;
}

struct Workspace {
  fs::path root = fresh_dir("ppfl_cli_ws");
  fs::path gen_cfg = root / "gen.json";
  fs::path train_cfg = root / "train.json";
  fs::path data = root / "data";

  Workspace() {
    write_file(gen_cfg,
               "{\"generator\":\"mixture\",\"M\":4,\"K_true\":2,\"d\":4,"
               "\"n_min\":20,\"n_max\":30,\"seed\":11}\n");
    write_file(train_cfg,
               "{\"seed\":3,\"K\":2,\"T\":6,\"E\":2,\"eta\":{\"value\":0.01},"
               "\"lambda\":0.05}\n");
  }
};

// One generated benchmark reused across the cases below.
const Workspace& ws() {
  static const Workspace w = [] {
    Workspace ws;
    REQUIRE(run_cli("generate --config " + ws.gen_cfg.string() + " --out " + ws.data.string()) ==
            0);
    return ws;
  }();
  return w;
}

}  // namespace

TEST_CASE("generate writes a loadable benchmark directory") {
  CHECK(fs::exists(ws().data / "manifest.json"));
  CHECK(fs::exists(ws().data / "clients" / "client_003_train.csv"));
}

TEST_CASE("train produces metrics, snapshots, and a summary") {
  const fs::path out = ws().root / "run";
  REQUIRE(run_cli("train --config " + ws().train_cfg.string() + " --data " +
                  ws().data.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "metrics.csv"));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "c_snapshots" / "round_6.csv"));
  CHECK(read_json(out / "summary.json").at("rounds") == 6);
}

TEST_CASE("seed and set overrides reach the run config") {
  const fs::path out = ws().root / "run_override";
  REQUIRE(run_cli("train --config " + ws().train_cfg.string() + " --data " +
                  ws().data.string() + " --out " + out.string() +
                  " --seed 99 --set eta.value=0.005 --set T=4") == 0);
  const auto s = read_json(out / "summary.json");
  CHECK(s.at("config").at("seed") == 99);
  CHECK(s.at("config").at("eta").at("value") == 0.005);
  CHECK(s.at("rounds") == 4);
}

TEST_CASE("exit codes distinguish config, runtime, and step-bound failures") {
  const fs::path out = ws().root / "run_fail";
  // unknown config field -> 2
  write_file(ws().root / "bad.json", "{\"bogus\": 1}\n");
  CHECK(run_cli("train --config " + (ws().root / "bad.json").string() + " --data " +
                ws().data.string() + " --out " + out.string()) == 2);
  // oversized step -> 3
  CHECK(run_cli("train --config " + ws().train_cfg.string() + " --data " + ws().data.string() +
                " --out " + out.string() + " --set eta.value=50") == 3);
  // missing benchmark -> 2 (unreadable manifest is a config-level failure)
  CHECK(run_cli("train --config " + ws().train_cfg.string() + " --data /nonexistent --out " +
                out.string()) == 2);
  // malformed --set -> 2
  CHECK(run_cli("train --config " + ws().train_cfg.string() + " --data " + ws().data.string() +
                " --out " + out.string() + " --set nonsense") == 2);
  // missing required --data -> CLI parse error (nonzero, not one of ours)
  CHECK(run_cli("train --config " + ws().train_cfg.string() + " --out " + out.string()) != 0);
  CHECK(run_cli("") != 0);
}

TEST_CASE("sweep runs a grid and records an index") {
  write_file(ws().root / "sweep.json",
             "{\"train\":{\"seed\":3,\"K\":2,\"T\":4,\"E\":1,\"eta\":{\"value\":0.01},"
             "\"lambda\":0.05},\"grid\":{\"lambda\":[0.0,0.1],\"K\":[1,2]}}\n");
  const fs::path out = ws().root / "sweep_out";
  REQUIRE(run_cli("sweep --config " + (ws().root / "sweep.json").string() + " --data " +
                  ws().data.string() + " --out " + out.string() + " --threads 2") == 0);
  const auto index = read_json(out / "index.json");
  REQUIRE(index.at("points").size() == 4);
  for (const auto& p : index.at("points")) CHECK(p.at("status") == "ok");
  CHECK(fs::exists(out / "run_003" / "metrics.csv"));
}

TEST_CASE("an explicitly empty grid runs zero points") {
  write_file(ws().root / "sweep_empty.json",
             "{\"train\":{\"seed\":3,\"K\":2,\"T\":4,\"eta\":{\"value\":0.01}},"
             "\"grid\":{}}\n");
  const fs::path out = ws().root / "sweep_empty_out";
  REQUIRE(run_cli("sweep --config " + (ws().root / "sweep_empty.json").string() + " --data " +
                  ws().data.string() + " --out " + out.string()) == 0);
  CHECK(read_json(out / "index.json").at("points").empty());
}
