// Command-line front end. Talks to the library exclusively through the C API
// so it doubles as a smoke test for the shared-library surface.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppfl/ppfl.h"

namespace {

int threads_or_env(int cli_value) {
  if (cli_value > 0) return cli_value;
  if (const char* env = std::getenv("PPFL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

struct ConfigHandle {
  ppfl_config* cfg = nullptr;
  ~ConfigHandle() { ppfl_config_free(cfg); }
};

// Loads --config then layers --seed / --set overrides on top.
int load_config(const std::string& path, const std::string& seed,
                const std::vector<std::string>& sets, ConfigHandle& out) {
  int rc = ppfl_config_parse_file(path.c_str(), &out.cfg);
  if (rc != 0) return rc;
  if (!seed.empty()) {
    rc = ppfl_config_set(out.cfg, "seed", seed.c_str());
    if (rc != 0) return rc;
  }
  for (const std::string& kv : sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      return 2;
    }
    rc = ppfl_config_set(out.cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (rc != 0) return rc;
  }
  return 0;
}

int report(int rc) {
  if (rc != 0) std::fprintf(stderr, "error: %s\n", ppfl_last_error());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ppfl: personalized federated learning simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_dir;
  std::string out_dir;
  std::string seed;
  int threads = 0;
  std::vector<std::string> sets;

  auto add_common = [&](CLI::App* sub, bool with_data, bool data_required) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--set", sets, "override a config field, key=value (repeatable)");
    sub->add_option("--threads", threads, "worker threads (default: PPFL_THREADS or 1)");
    if (with_data) {
      CLI::Option* opt = sub->add_option("--data", data_dir, "benchmark directory");
      if (data_required) opt->required();
    }
  };

  CLI::App* gen = app.add_subcommand("generate", "write a synthetic benchmark");
  add_common(gen, false, false);
  CLI::App* train = app.add_subcommand("train", "run one algorithm over a benchmark");
  add_common(train, true, true);
  CLI::App* sweep = app.add_subcommand("sweep", "run a grid of configurations");
  add_common(sweep, true, false);

  CLI11_PARSE(app, argc, argv);

  ConfigHandle cfg;
  int rc = load_config(config_path, seed, sets, cfg);
  if (rc != 0) return report(rc);

  if (gen->parsed()) return report(ppfl_generate(cfg.cfg, out_dir.c_str()));
  if (train->parsed())
    return report(
        ppfl_run_train(cfg.cfg, data_dir.c_str(), out_dir.c_str(), threads_or_env(threads)));
  return report(ppfl_run_sweep(cfg.cfg, data_dir.empty() ? nullptr : data_dir.c_str(),
                               out_dir.c_str(), threads_or_env(threads)));
}
