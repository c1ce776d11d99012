#include "ppfl/metrics/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ppfl/core/error.hpp"
#include "ppfl/io/config_json.hpp"

namespace fs = std::filesystem;

namespace ppfl {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

const char* task_label(Task t) {
  switch (t) {
    case Task::regression: return "regression";
    case Task::binary: return "binary";
    case Task::multiclass: return "multiclass";
  }
  return "?";
}

void write_metrics_csv(const RunTrajectory& traj, const fs::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path.string());
  out << "round,block,objective,grad_theta_norm_sq,prox_c_norm1_sq,criterion,"
         "train_weighted,train_mean,test_weighted,test_mean,"
         "cum_broadcast,cum_upload,cum_sync\n";
  for (const RoundRecord& r : traj.rounds) {
    out << r.round << ',' << r.block << ',' << format_double(r.objective) << ','
        << format_double(r.criterion.grad_theta_norm_sq) << ','
        << format_double(r.criterion.prox_c_norm1_sq) << ','
        << format_double(r.criterion.composite) << ',' << format_double(r.train_weighted) << ','
        << format_double(r.train_mean) << ',' << format_double(r.test_weighted) << ','
        << format_double(r.test_mean) << ',' << r.cum_broadcast << ',' << r.cum_upload << ','
        << r.cum_sync << '\n';
  }
  require(static_cast<bool>(out), "write failed: " + path.string());
}

void write_snapshot_csv(const MembershipMatrix& C, const fs::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path.string());
  for (std::size_t i = 0; i < C.M; ++i) {
    for (std::size_t k = 0; k < C.K; ++k) {
      if (k) out << ',';
      out << format_double(C.row(i)[k]);
    }
    out << '\n';
  }
  require(static_cast<bool>(out), "write failed: " + path.string());
}

}  // namespace

void export_run(const RunTrajectory& traj, const std::string& dir) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root / "c_snapshots", ec);
  require(!ec, "cannot create " + dir + ": " + ec.message());

  write_metrics_csv(traj, root / "metrics.csv");
  for (const auto& [round, C] : traj.snapshots) {
    char name[48];
    std::snprintf(name, sizeof name, "round_%zu.csv", round);
    write_snapshot_csv(C, root / "c_snapshots" / name);
  }

  nlohmann::ordered_json s;
  s["config"] = config_to_json(traj.config);
  s["task"] = task_label(traj.task);
  s["rounds"] = traj.rounds.size();
  s["output_index"] = traj.output_index;
  s["output_weights"] = traj.output_weights;
  if (!traj.rounds.empty()) {
    const RoundRecord& last = traj.rounds.back();
    s["final"] = {{"objective", last.objective},
                  {"criterion", last.criterion.composite},
                  {"grad_theta_norm_sq", last.criterion.grad_theta_norm_sq},
                  {"prox_c_norm1_sq", last.criterion.prox_c_norm1_sq},
                  {"train_weighted", last.train_weighted},
                  {"train_mean", last.train_mean},
                  {"test_weighted", last.test_weighted},
                  {"test_mean", last.test_mean}};
  } else {
    s["final"] = nullptr;
  }
  s["ledger"] = {{"broadcast", traj.ledger.broadcast},
                 {"upload", traj.ledger.upload},
                 {"sync", traj.ledger.sync},
                 {"total", traj.ledger.total()},
                 {"canonical_floats", traj.ledger.canonical_floats},
                 {"K", traj.ledger.K},
                 {"strawman_ratio", traj.ledger.strawman_ratio()}};
  s["smoothness"] = {
      {"L1", traj.smoothness.L1},
      {"L2", traj.smoothness.L2},
      {"source", traj.smoothness.source == SmoothnessSource::user ? "user" : "power_iteration"}};
  s["wall_seconds"] = traj.wall_seconds;

  std::ofstream out(root / "summary.json");
  require(static_cast<bool>(out), "cannot write summary.json under " + dir);
  out << s.dump(2) << '\n';
  require(static_cast<bool>(out), "write failed: summary.json");
}

}  // namespace ppfl
