#pragma once

#include <filesystem>

#include "asim/config.hpp"

namespace asim {

// Executes the configured experiment and writes its artifacts under
// cfg.output_dir: one trace CSV per (variant, seed) where applicable, a
// summary.csv with across-seed statistics, and metadata.json holding the
// resolved config, version string, and every cell's derived rng seed.
// Outputs are byte-identical across repeated invocations.
void run_experiment(const ExperimentConfig& cfg);

// Reads every per-seed trace CSV in trace_dir (schema-checked), groups files
// by variant, and writes tail statistics with schema
// variant,metric,mean,std,n_seeds to out_csv.
void summarize_dir(const std::filesystem::path& trace_dir, const std::filesystem::path& out_csv);

}  // namespace asim
