#include "ppfl/ppfl.h"

#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "ppfl/cli/commands.hpp"
#include "ppfl/core/error.hpp"
#include "ppfl/io/benchmark_io.hpp"
#include "ppfl/io/config_json.hpp"
#include "ppfl/metrics/export.hpp"
#include "ppfl/metrics/trajectory.hpp"

using nlohmann::json;

struct ppfl_config {
  json raw;
};

struct ppfl_benchmark {
  ppfl::BenchmarkData data;
};

struct ppfl_result {
  ppfl::RunTrajectory traj;
};

namespace {

thread_local std::string g_last_error;

int code_of(const ppfl::Error& e) { return static_cast<int>(e.code()); }

// Runs fn, captures any failure into the thread-local error slot.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return 0;
  } catch (const ppfl::Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return 1;
  } catch (...) {
    g_last_error = "unknown error";
    return 1;
  }
}

int set_error(const std::string& msg, int code) {
  g_last_error = msg;
  return code;
}

}  // namespace

extern "C" {

const char* ppfl_version(void) { return "1.0.0"; }

const char* ppfl_last_error(void) { return g_last_error.c_str(); }

int ppfl_config_parse_file(const char* path, ppfl_config** out) {
  if (path == nullptr || out == nullptr) return set_error("null argument", 2);
  *out = nullptr;
  return guarded([&] {
    auto cfg = std::make_unique<ppfl_config>();
    cfg->raw = ppfl::load_json_file(path);
    *out = cfg.release();
  });
}

int ppfl_config_parse_string(const char* json_text, ppfl_config** out) {
  if (json_text == nullptr || out == nullptr) return set_error("null argument", 2);
  *out = nullptr;
  return guarded([&] {
    auto cfg = std::make_unique<ppfl_config>();
    cfg->raw = ppfl::parse_json_text(json_text, "<string>");
    *out = cfg.release();
  });
}

int ppfl_config_set(ppfl_config* cfg, const char* dot_key, const char* value) {
  if (cfg == nullptr || dot_key == nullptr || value == nullptr)
    return set_error("null argument", 2);
  return guarded([&] { ppfl::apply_json_override(cfg->raw, dot_key, value); });
}

void ppfl_config_free(ppfl_config* cfg) { delete cfg; }

int ppfl_generate(const ppfl_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr) return set_error("null argument", 2);
  return guarded([&] { ppfl::cmd_generate(cfg->raw, out_dir); });
}

int ppfl_benchmark_load(const char* dir, ppfl_benchmark** out) {
  if (dir == nullptr || out == nullptr) return set_error("null argument", 2);
  *out = nullptr;
  return guarded([&] {
    auto bench = std::make_unique<ppfl_benchmark>();
    bench->data = ppfl::load_benchmark(dir);
    *out = bench.release();
  });
}

size_t ppfl_benchmark_clients(const ppfl_benchmark* bench) {
  return bench == nullptr ? 0 : bench->data.shards.size();
}

void ppfl_benchmark_free(ppfl_benchmark* bench) { delete bench; }

int ppfl_train(const ppfl_config* cfg, const ppfl_benchmark* bench, int threads,
               ppfl_result** out) {
  if (cfg == nullptr || bench == nullptr || out == nullptr)
    return set_error("null argument", 2);
  *out = nullptr;
  return guarded([&] {
    ppfl::RunConfig rc = ppfl::config_from_json(cfg->raw);
    auto res = std::make_unique<ppfl_result>();
    res->traj = ppfl::run_algorithm(rc, bench->data, threads <= 0 ? 1 : threads);
    *out = res.release();
  });
}

int ppfl_result_export(const ppfl_result* result, const char* out_dir) {
  if (result == nullptr || out_dir == nullptr) return set_error("null argument", 2);
  return guarded([&] { ppfl::export_run(result->traj, out_dir); });
}

int ppfl_result_scalar(const ppfl_result* result, const char* name, double* out) {
  if (result == nullptr || name == nullptr || out == nullptr)
    return set_error("null argument", 2);
  const ppfl::RunTrajectory& t = result->traj;
  const std::string key = name;
  auto final_field = [&](double ppfl::RoundRecord::* field) -> int {
    if (t.rounds.empty()) return set_error("result has no rounds", 1);
    *out = t.rounds.back().*field;
    return 0;
  };
  if (key == "rounds") {
    *out = static_cast<double>(t.rounds.size());
    return 0;
  }
  if (key == "output_index") {
    *out = static_cast<double>(t.output_index);
    return 0;
  }
  if (key == "wall_seconds") {
    *out = t.wall_seconds;
    return 0;
  }
  if (key == "ledger_broadcast") {
    *out = static_cast<double>(t.ledger.broadcast);
    return 0;
  }
  if (key == "ledger_upload") {
    *out = static_cast<double>(t.ledger.upload);
    return 0;
  }
  if (key == "ledger_sync") {
    *out = static_cast<double>(t.ledger.sync);
    return 0;
  }
  if (key == "ledger_total") {
    *out = static_cast<double>(t.ledger.total());
    return 0;
  }
  if (key == "strawman_ratio") {
    *out = t.ledger.strawman_ratio();
    return 0;
  }
  if (key == "smoothness_L1") {
    *out = t.smoothness.L1;
    return 0;
  }
  if (key == "smoothness_L2") {
    *out = t.smoothness.L2;
    return 0;
  }
  if (key == "final_objective") return final_field(&ppfl::RoundRecord::objective);
  if (key == "final_criterion") {
    if (t.rounds.empty()) return set_error("result has no rounds", 1);
    *out = t.rounds.back().criterion.composite;
    return 0;
  }
  if (key == "final_train_weighted") return final_field(&ppfl::RoundRecord::train_weighted);
  if (key == "final_train_mean") return final_field(&ppfl::RoundRecord::train_mean);
  if (key == "final_test_weighted") return final_field(&ppfl::RoundRecord::test_weighted);
  if (key == "final_test_mean") return final_field(&ppfl::RoundRecord::test_mean);
  return set_error("unknown scalar: " + key, 2);
}

void ppfl_result_free(ppfl_result* result) { delete result; }

int ppfl_run_train(const ppfl_config* cfg, const char* data_dir, const char* out_dir,
                   int threads) {
  if (cfg == nullptr || data_dir == nullptr || out_dir == nullptr)
    return set_error("null argument", 2);
  return guarded(
      [&] { ppfl::cmd_train(cfg->raw, data_dir, out_dir, threads <= 0 ? 1 : threads); });
}

int ppfl_run_sweep(const ppfl_config* cfg, const char* data_dir_or_null, const char* out_dir,
                   int threads) {
  if (cfg == nullptr || out_dir == nullptr) return set_error("null argument", 2);
  const std::string data_dir = data_dir_or_null == nullptr ? "" : data_dir_or_null;
  std::size_t failed = 0;
  const int rc = guarded([&] {
    failed = ppfl::cmd_sweep(cfg->raw, data_dir, out_dir, threads <= 0 ? 1 : threads);
  });
  if (rc != 0) return rc;
  if (failed != 0)
    return set_error(std::to_string(failed) + " sweep point(s) failed; see index.json", 1);
  return 0;
}

}  // extern "C"
