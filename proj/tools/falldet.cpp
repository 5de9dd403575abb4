// falldet: extract statistical features from waist-sensor recordings and
// cross-validate four fall-vs-ADL classifiers over them.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "falldet/config.hpp"
#include "falldet/errors.hpp"
#include "falldet/pipeline.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config_file;
    std::optional<std::string> root;
    std::optional<std::string> cache;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> folds;
    std::optional<int> workers;
    std::optional<std::string> classifiers;
    std::optional<int> count;
    std::optional<double> duration;
    bool no_scaling = false;
    bool no_stratify = false;
    bool zero_phase = false;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_file, "flat key=value config file");
    cmd->add_option("--root", o.root, "dataset root (extract) / output dir (synth)");
    cmd->add_option("--cache", o.cache, "feature cache file");
    cmd->add_option("--out", o.out_dir, "report output directory");
    cmd->add_option("--seed", o.seed, "base seed for folds, solvers and fixtures");
    cmd->add_option("--folds", o.folds, "number of cross-validation folds");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
    cmd->add_option("--classifiers", o.classifiers, "comma list of dt,lr,knn,svm");
    cmd->add_flag("--no-scaling", o.no_scaling, "skip per-fold feature standardization");
    cmd->add_flag("--no-stratify", o.no_stratify, "plain random folds instead of stratified");
    cmd->add_flag("--zero-phase", o.zero_phase, "forward-backward filtering instead of causal");
}

falldet::PipelineConfig resolve(const Overrides& o) {
    falldet::PipelineConfig config;
    if (o.config_file) config = falldet::load_config_file(*o.config_file, config);
    if (o.root) config.root = *o.root;
    if (o.cache) config.cache = *o.cache;
    if (o.out_dir) config.out_dir = *o.out_dir;
    if (o.seed) config.seed = *o.seed;
    if (o.folds) config.folds = *o.folds;
    if (o.workers) config.workers = *o.workers;
    if (o.classifiers) config.classifiers = falldet::parse_classifier_list(*o.classifiers);
    if (o.count) config.synth_count = *o.count;
    if (o.duration) config.synth_duration_s = *o.duration;
    if (o.no_scaling) config.no_scaling = true;
    if (o.no_stratify) config.no_stratify = true;
    if (o.zero_phase) config.zero_phase = true;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fall-vs-ADL detection pipeline over waist-sensor recordings"};
    app.require_subcommand(1);

    Overrides o;
    CLI::App* extract = app.add_subcommand("extract", "parse a corpus and write the feature cache");
    CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validate classifiers on a cache");
    CLI::App* filter_check = app.add_subcommand("filter-check", "dump the filter frequency response");
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic fixture corpus");
    for (CLI::App* cmd : {extract, evaluate, filter_check, synth}) {
        add_common_options(cmd, o);
    }
    synth->add_option("--count", o.count, "fixtures per class");
    synth->add_option("--duration", o.duration, "fixture length in seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : falldet::kExitConfig;
    }

    try {
        const falldet::PipelineConfig config = resolve(o);
        if (extract->parsed()) return falldet::run_extract(config, std::cout, std::cerr);
        if (evaluate->parsed()) return falldet::run_evaluate(config, std::cout, std::cerr);
        if (filter_check->parsed()) return falldet::run_filter_check(config, std::cout, std::cerr);
        if (synth->parsed()) return falldet::run_synth(config, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return falldet::kExitConfig;
    }
    return falldet::kExitConfig;
}
