#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "falldet/classify.hpp"
#include "falldet/dsp.hpp"
#include "falldet/ingest.hpp"

namespace falldet {

struct PipelineConfig {
    std::string root;                    // dataset root (extract) / output corpus dir (synth)
    std::string cache = "features.csv";  // feature cache file
    std::string out_dir = "reports";     // evaluation artifacts

    FilterSpec filter;  // order 4, 5 Hz at 200 Hz
    CalibrationTable calibration = default_calibration();
    ClassifierParams params;
    std::vector<ClassifierKind> classifiers = {
        ClassifierKind::DecisionTree,
        ClassifierKind::LogisticRegression,
        ClassifierKind::Knn,
        ClassifierKind::Svm,
    };

    int folds = 10;
    std::uint64_t seed = 0;
    bool no_scaling = false;    // skip per-fold standardization
    bool no_stratify = false;   // plain random folds
    bool zero_phase = false;    // forward-backward filtering instead of causal
    int workers = 0;            // 0 = all hardware threads

    int synth_count = 100;          // fixtures per class
    double synth_duration_s = 10.0;

    void validate() const;  // throws ConfigError before any work starts
};

// Flat key-value file: one `key = value` per line, '#' comments. Unknown keys
// are rejected. Values parsed over `base` so CLI flags can override later.
PipelineConfig load_config_file(const std::filesystem::path& path, const PipelineConfig& base);
void apply_config_entry(PipelineConfig& config, const std::string& key, const std::string& value);

std::vector<ClassifierKind> parse_classifier_list(const std::string& csv);

}  // namespace falldet
