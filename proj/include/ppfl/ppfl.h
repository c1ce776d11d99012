/* C interface to the ppfl simulation library.
 *
 * Every function returns 0 on success or a nonzero code mirroring the CLI
 * exit codes: 1 runtime failure, 2 configuration error, 3 step-size bound
 * violation. ppfl_last_error() describes the most recent failure on the
 * calling thread. Handles are opaque; free them with the matching *_free.
 */
#ifndef PPFL_H
#define PPFL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ppfl_config ppfl_config;       /* parsed JSON config */
typedef struct ppfl_benchmark ppfl_benchmark; /* loaded benchmark directory */
typedef struct ppfl_result ppfl_result;       /* one finished run */

const char* ppfl_version(void);
const char* ppfl_last_error(void);

int ppfl_config_parse_file(const char* path, ppfl_config** out);
int ppfl_config_parse_string(const char* json_text, ppfl_config** out);
/* Dot-path override, e.g. ("eta.value", "0.01") or ("algorithm", "fedavg"). */
int ppfl_config_set(ppfl_config* cfg, const char* dot_key, const char* value);
void ppfl_config_free(ppfl_config* cfg);

/* Benchmark generation and loading. */
int ppfl_generate(const ppfl_config* cfg, const char* out_dir);
int ppfl_benchmark_load(const char* dir, ppfl_benchmark** out);
size_t ppfl_benchmark_clients(const ppfl_benchmark* bench);
void ppfl_benchmark_free(ppfl_benchmark* bench);

/* Run the configured algorithm over a loaded benchmark. threads <= 0 means 1. */
int ppfl_train(const ppfl_config* cfg, const ppfl_benchmark* bench, int threads,
               ppfl_result** out);
/* Writes metrics.csv, c_snapshots/, summary.json. */
int ppfl_result_export(const ppfl_result* result, const char* out_dir);
/* Scalar lookups: rounds, output_index, wall_seconds, final_objective,
 * final_criterion, final_train_weighted, final_train_mean,
 * final_test_weighted, final_test_mean, ledger_broadcast, ledger_upload,
 * ledger_sync, ledger_total, strawman_ratio, smoothness_L1, smoothness_L2. */
int ppfl_result_scalar(const ppfl_result* result, const char* name, double* out);
void ppfl_result_free(ppfl_result* result);

/* Convenience one-shots mirroring the CLI subcommands. */
int ppfl_run_train(const ppfl_config* cfg, const char* data_dir, const char* out_dir,
                   int threads);
int ppfl_run_sweep(const ppfl_config* cfg, const char* data_dir_or_null, const char* out_dir,
                   int threads);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PPFL_H */
