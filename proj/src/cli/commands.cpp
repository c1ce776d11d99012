#include "ppfl/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>

#include "ppfl/baselines/baselines.hpp"
#include "ppfl/core/error.hpp"
#include "ppfl/core/parallel.hpp"
#include "ppfl/datagen/generators.hpp"
#include "ppfl/graph/affinity.hpp"
#include "ppfl/io/config_json.hpp"
#include "ppfl/metrics/export.hpp"
#include "ppfl/optim/drivers.hpp"

namespace fs = std::filesystem;

namespace ppfl {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  throw Error(ErrCode::config, "config field " + path + ": " + what);
}

void check_keys(const json& j, const std::string& scope, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad_field(scope.empty() ? "(root)" : scope, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) bad_field(scope.empty() ? key : scope + "." + key, "unknown field");
  }
}

double num_or(const json& j, const char* key, const std::string& scope, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) bad_field(scope + key, "expected a number");
  return j[key].get<double>();
}

std::size_t uint_or(const json& j, const char* key, const std::string& scope, std::size_t dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j[key];
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    bad_field(scope + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::string str_or(const json& j, const char* key, const std::string& scope,
                   const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_string()) bad_field(scope + key, "expected a string");
  return j[key].get<std::string>();
}

AffinityGraph build_graph(const RunConfig& cfg, const BenchmarkData& data) {
  if (cfg.affinity_source == "label_histogram")
    return affinity_from_label_histograms(data.shards);
  if (cfg.affinity_source == "csv") return AffinityGraph::from_csv(cfg.affinity_csv);
  return AffinityGraph::all_ones(data.shards.size());
}

}  // namespace

BenchmarkData generate_benchmark(const json& config) {
  const std::string kind = str_or(config, "generator", "", "");
  if (kind.empty()) bad_field("generator", "required (mixture, domain, or dirichlet)");
  const std::uint64_t seed = uint_or(config, "seed", "", 1);

  BenchmarkData data;
  data.generator_echo = config;
  if (kind == "mixture") {
    check_keys(config, "", {"generator", "seed", "M", "K_true", "d", "n_min", "n_max",
                            "dirichlet_alpha", "task", "noise_std", "train_frac"});
    MixtureSpec spec;
    spec.M = uint_or(config, "M", "", spec.M);
    spec.K_true = uint_or(config, "K_true", "", spec.K_true);
    spec.d = uint_or(config, "d", "", spec.d);
    spec.n_min = uint_or(config, "n_min", "", spec.n_min);
    spec.n_max = uint_or(config, "n_max", "", spec.n_max);
    spec.dirichlet_alpha = num_or(config, "dirichlet_alpha", "", spec.dirichlet_alpha);
    spec.noise_std = num_or(config, "noise_std", "", spec.noise_std);
    spec.train_frac = num_or(config, "train_frac", "", spec.train_frac);
    const std::string task = str_or(config, "task", "", "regression");
    if (task == "regression")
      spec.task = Task::regression;
    else if (task == "binary")
      spec.task = Task::binary;
    else
      bad_field("task", "expected regression or binary");
    auto [shards, truth] = gen_mixture_synthetic(spec, seed);
    data.shards = std::move(shards);
    data.task = spec.task;
    data.n_classes = spec.task == Task::binary ? 2 : 0;
    data.mixture_truth = std::move(truth);
    return data;
  }
  if (kind == "domain") {
    check_keys(config, "", {"generator", "seed", "M", "groups", "classes_per_group", "d",
                            "n_per_client", "separation", "train_frac"});
    DomainSpec spec;
    spec.M = uint_or(config, "M", "", spec.M);
    spec.groups = uint_or(config, "groups", "", spec.groups);
    spec.classes_per_group = uint_or(config, "classes_per_group", "", spec.classes_per_group);
    spec.d = uint_or(config, "d", "", spec.d);
    spec.n_per_client = uint_or(config, "n_per_client", "", spec.n_per_client);
    spec.separation = num_or(config, "separation", "", spec.separation);
    spec.train_frac = num_or(config, "train_frac", "", spec.train_frac);
    auto [shards, groups] = gen_domain_heterogeneous(spec, seed);
    data.shards = std::move(shards);
    data.task = Task::multiclass;
    data.n_classes = static_cast<int>(spec.groups * spec.classes_per_group);
    data.group_truth = std::move(groups);
    return data;
  }
  if (kind == "dirichlet") {
    check_keys(config, "",
               {"generator", "seed", "M", "alpha", "classes", "d", "n_total", "separation",
                "train_frac"});
    const std::size_t M = uint_or(config, "M", "", 30);
    const double alpha = num_or(config, "alpha", "", 0.5);
    const std::size_t classes = uint_or(config, "classes", "", 4);
    const std::size_t d = uint_or(config, "d", "", 20);
    const std::size_t n_total = uint_or(config, "n_total", "", 4000);
    const double separation = num_or(config, "separation", "", 3.0);
    const double train_frac = num_or(config, "train_frac", "", 0.8);
    const LabeledDataset base = gen_class_gaussian_pool(classes, d, n_total, separation, seed);
    data.shards = gen_dirichlet_partition(base, M, alpha, seed, train_frac);
    data.task = base.task;
    data.n_classes = base.n_classes;
    return data;
  }
  bad_field("generator", "unknown generator " + kind);
}

RunTrajectory run_algorithm(const RunConfig& cfg, const BenchmarkData& data, int threads) {
  switch (cfg.algorithm) {
    case Algorithm::rbcd:
      return rbcd_run(cfg, data.shards, build_graph(cfg, data), std::nullopt, threads);
    case Algorithm::alternating:
      return alternating_run(cfg, data.shards, build_graph(cfg, data), std::nullopt, threads);
    case Algorithm::fedavg: return run_fedavg(data.shards, cfg, threads);
    case Algorithm::local: return run_local(data.shards, cfg, threads);
    case Algorithm::clustered: return run_clustered_fl(data.shards, cfg, cfg.K, threads);
  }
  fail(ErrCode::config, "unknown algorithm");
}

void cmd_generate(const json& config, const std::string& out_dir) {
  save_benchmark(generate_benchmark(config), out_dir);
}

void cmd_train(const json& config, const std::string& data_dir, const std::string& out_dir,
               int threads) {
  const RunConfig cfg = config_from_json(config);
  const BenchmarkData data = load_benchmark(data_dir);
  export_run(run_algorithm(cfg, data, threads), out_dir);
}

std::size_t cmd_sweep(const json& config, const std::string& data_dir, const std::string& out_dir,
                      int threads) {
  check_keys(config, "", {"generate", "train", "grid"});
  if (!config.contains("train")) bad_field("train", "required");
  const json train_base = config["train"];
  (void)config_from_json(train_base);  // validate the base config up front
  const bool has_gen = config.contains("generate");
  if (!has_gen && data_dir.empty())
    throw Error(ErrCode::config, "sweep needs a generate block or --data");

  const json grid = config.contains("grid") ? config["grid"] : json::object();
  check_keys(grid, "grid", {"lambda", "K", "alpha", "algorithm", "seed"});
  auto axis = [&](const char* key) {
    std::vector<json> vals;
    if (grid.contains(key)) {
      if (!grid[key].is_array()) bad_field(std::string("grid.") + key, "expected an array");
      for (const auto& v : grid[key]) vals.push_back(v);
    } else {
      vals.push_back(json());  // single unset point
    }
    return vals;
  };
  const std::vector<json> lambdas = axis("lambda"), ks = axis("K"), alphas = axis("alpha"),
                          algos = axis("algorithm"), seeds = axis("seed");
  if (grid.contains("alpha") && !has_gen)
    bad_field("grid.alpha", "needs a generate block to act on");

  struct Point {
    json params;
    json train;
    json gen;
  };
  std::vector<Point> points;
  if (grid.is_object() && grid.empty()) {
    // explicit empty grid: nothing to run
  } else
  for (const json& l : lambdas)
    for (const json& k : ks)
      for (const json& a : alphas)
        for (const json& g : algos)
          for (const json& s : seeds) {
            Point p;
            p.train = train_base;
            if (has_gen) p.gen = config["generate"];
            p.params = json::object();
            if (!l.is_null()) p.params["lambda"] = p.train["lambda"] = l;
            if (!k.is_null()) p.params["K"] = p.train["K"] = k;
            if (!g.is_null()) p.params["algorithm"] = p.train["algorithm"] = g;
            if (!s.is_null()) {
              p.params["seed"] = p.train["seed"] = s;
              if (has_gen) p.gen["seed"] = s;  // re-randomize the data too
            }
            if (!a.is_null()) {
              p.params["alpha"] = a;
              const std::string kind = p.gen.value("generator", "");
              if (kind == "mixture")
                p.gen["dirichlet_alpha"] = a;
              else if (kind == "dirichlet")
                p.gen["alpha"] = a;
              else
                bad_field("grid.alpha", "generator " + kind + " has no alpha knob");
            }
            points.push_back(std::move(p));
          }

  // The cartesian product above validates lazily; parse every point's train
  // config now so schema errors abort pre-execution with exit 2.
  for (const Point& p : points) (void)config_from_json(p.train);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec, "cannot create " + out_dir + ": " + ec.message());

  // Shared data (no generate block): load once, reuse across points.
  BenchmarkData shared;
  if (!has_gen) shared = load_benchmark(data_dir);

  struct Outcome {
    std::string dir;
    json params;
    bool ok = false;
    std::string message;
  };
  std::vector<Outcome> outcomes(points.size());
  parallel_for(points.size(), threads, [&](std::size_t idx) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", idx);
    Outcome& oc = outcomes[idx];
    oc.dir = name;
    oc.params = points[idx].params;
    const fs::path run_dir = fs::path(out_dir) / name;
    try {
      const RunConfig cfg = config_from_json(points[idx].train);
      if (has_gen) {
        const BenchmarkData data = generate_benchmark(points[idx].gen);
        save_benchmark(data, (run_dir / "data").string());
        export_run(run_algorithm(cfg, data, 1), run_dir.string());
      } else {
        export_run(run_algorithm(cfg, shared, 1), run_dir.string());
      }
      oc.ok = true;
    } catch (const std::exception& e) {
      oc.message = e.what();
    }
  });

  ordered_json index;
  index["points"] = ordered_json::array();
  std::size_t failed = 0;
  for (const Outcome& oc : outcomes) {
    ordered_json entry;
    entry["dir"] = oc.dir;
    entry["params"] = oc.params;
    entry["status"] = oc.ok ? "ok" : "failed";
    if (!oc.ok) {
      entry["error"] = oc.message;
      ++failed;
    }
    index["points"].push_back(std::move(entry));
  }
  std::ofstream out(fs::path(out_dir) / "index.json");
  require(static_cast<bool>(out), "cannot write index.json under " + out_dir);
  out << index.dump(2) << '\n';
  require(static_cast<bool>(out), "write failed: index.json");
  return failed;
}

}  // namespace ppfl
