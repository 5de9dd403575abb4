#pragma once

#include <iosfwd>

#include "falldet/config.hpp"

namespace falldet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;  // I/O and configuration problems
inline constexpr int kExitParse = 3;   // malformed input data
inline constexpr int kExitTrain = 4;   // training/evaluation failures

// Subcommand entry points. Each validates the config, does the work, writes
// its artifacts, prints a human summary to `out` and diagnostics to `err`,
// and returns an exit code per the contract above.

// Scans config.root, extracts one 54-wide feature row per recording (worker
// pool), writes config.cache atomically.
int run_extract(const PipelineConfig& config, std::ostream& out, std::ostream& err);

// Reads config.cache, runs k-fold cross-validation for every configured
// classifier, writes <out>/report.json and <out>/folds.csv, prints the
// metrics table.
int run_evaluate(const PipelineConfig& config, std::ostream& out, std::ostream& err);

// Emits the frequency-response CSV for the configured filter to `out`.
int run_filter_check(const PipelineConfig& config, std::ostream& out, std::ostream& err);

// Writes config.synth_count fixtures per class into config.root in the
// corpus on-disk format.
int run_synth(const PipelineConfig& config, std::ostream& out, std::ostream& err);

}  // namespace falldet
