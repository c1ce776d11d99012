#pragma once
#include <string>

#include <json.hpp>

#include "ppfl/io/benchmark_io.hpp"
#include "ppfl/metrics/trajectory.hpp"

namespace ppfl {

// Generator dispatch: the "generator" field picks mixture | domain |
// dirichlet; remaining fields are schema-checked with field-path errors.
BenchmarkData generate_benchmark(const nlohmann::json& config);

// Algorithm dispatch on cfg.algorithm over a loaded benchmark.
RunTrajectory run_algorithm(const RunConfig& cfg, const BenchmarkData& data, int threads);

void cmd_generate(const nlohmann::json& config, const std::string& out_dir);
void cmd_train(const nlohmann::json& config, const std::string& data_dir,
               const std::string& out_dir, int threads);
// Returns the number of failed grid points (0 = clean sweep).
std::size_t cmd_sweep(const nlohmann::json& config, const std::string& data_dir,
                      const std::string& out_dir, int threads);

}  // namespace ppfl
