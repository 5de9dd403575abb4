#include "falldet/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "falldet/errors.hpp"
#include "falldet/eval.hpp"
#include "falldet/features.hpp"
#include "falldet/parallel.hpp"
#include "falldet/rng.hpp"

namespace falldet {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int exit_code_for(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const TrainError*>(&e)) return kExitTrain;
    return kExitConfig;  // ConfigError, IoError, filesystem errors
}

}  // namespace

int run_extract(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    try {
        config.validate();
        if (config.root.empty()) {
            throw ConfigError("extract needs a dataset root (--root)");
        }

        const ScanResult scan = scan_corpus(config.root);
        for (const std::string& name : scan.skipped) {
            err << "warning: skipping unrecognized file name '" << name << "'\n";
        }
        if (scan.entries.empty()) {
            throw IoError("no recordings found under '" + config.root + "'");
        }

        const BiquadCascade cascade = design_butterworth(config.filter);
        FeatureMatrix matrix;
        matrix.rows.resize(scan.entries.size());
        struct Failure {
            bool io = false;
            std::string message;
        };
        std::vector<std::optional<Failure>> failures(scan.entries.size());

        parallel_for(scan.entries.size(), config.workers, [&](std::size_t i) {
            try {
                const RawRecording raw =
                    parse_recording_file(scan.entries[i].source_path, scan.entries[i]);
                const Recording rec = calibrate(raw, config.calibration);
                matrix.rows[i] = feature_vector(rec, cascade, config.zero_phase);
            } catch (const IoError& e) {
                failures[i] = Failure{true, e.what()};
            } catch (const std::exception& e) {
                failures[i] = Failure{false, e.what()};
            }
        });
        // report the first failure in scan order so reruns are reproducible
        for (const auto& failure : failures) {
            if (!failure) continue;
            if (failure->io) throw IoError(failure->message);
            throw ParseError(failure->message);
        }

        write_cache(matrix, config.cache);

        char line[256];
        std::snprintf(line, sizeof(line),
                      "extracted %zu recordings (%zu FALL / %zu ADL) -> %s\n"
                      "skipped %zu file(s), %.1f s\n",
                      matrix.rows.size(), matrix.count(Label::Fall), matrix.count(Label::ADL),
                      config.cache.c_str(), scan.skipped.size(), seconds_since(start));
        out << line;
        return kExitOk;
    } catch (const std::exception& e) {
        return exit_code_for(e, err);
    }
}

int run_evaluate(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    try {
        config.validate();
        const FeatureMatrix matrix = read_cache(config.cache);
        if (matrix.rows.empty()) {
            throw IoError("feature cache '" + config.cache + "' holds no rows");
        }

        std::vector<Label> labels;
        labels.reserve(matrix.rows.size());
        for (const FeatureVector& row : matrix.rows) labels.push_back(row.label);
        const FoldAssignment folds =
            make_folds(labels, config.folds, config.seed, !config.no_stratify);

        std::vector<ClassifierReport> results;
        for (ClassifierKind kind : config.classifiers) {
            ClassifierReport r;
            r.kind = kind;
            const CvResult cv = cross_validate(matrix, kind, config.params, folds,
                                               !config.no_scaling, config.seed, config.workers);
            r.pooled = cv.pooled;
            r.per_fold = cv.per_fold;
            r.metrics = compute_metrics(cv.pooled);
            results.push_back(std::move(r));
        }

        const Report report = build_report(results, config, seconds_since(start));

        const std::filesystem::path out_dir = config.out_dir.empty() ? "." : config.out_dir;
        std::filesystem::create_directories(out_dir);
        const auto write_file = [](const std::filesystem::path& p, const std::string& body) {
            std::ofstream f(p, std::ios::binary | std::ios::trunc);
            if (!f || !(f << body).flush()) {
                throw IoError("cannot write '" + p.string() + "'");
            }
        };
        write_file(out_dir / "report.json", report_to_json(report));
        write_file(out_dir / "folds.csv", report_to_csv(report));

        out << render_metrics_table(report);
        out << "report: " << (out_dir / "report.json").string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return exit_code_for(e, err);
    }
}

int run_filter_check(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        const BiquadCascade cascade = design_butterworth(config.filter);
        write_filter_check_csv(cascade, config.filter, out);
        return kExitOk;
    } catch (const std::exception& e) {
        return exit_code_for(e, err);
    }
}

int run_synth(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        if (config.root.empty()) {
            throw ConfigError("synth needs an output directory (--root)");
        }

        std::error_code ec;
        std::filesystem::create_directories(config.root, ec);
        if (ec || !std::filesystem::is_directory(config.root)) {
            throw IoError("cannot create output directory '" + config.root + "'");
        }

        std::size_t written = 0;
        for (const Label label : {Label::Fall, Label::ADL}) {
            const int activities = label == Label::Fall ? 15 : 19;
            for (int i = 0; i < config.synth_count; ++i) {
                const std::uint64_t file_seed =
                    mix_seed(config.seed, (label == Label::Fall ? 0x100000u : 0x200000u) + i);
                Recording rec = generate_synthetic(label, config.synth_duration_s, file_seed);

                char stem[32];
                std::snprintf(stem, sizeof(stem), "%c%02d_SA%02d_R01",
                              label == Label::Fall ? 'F' : 'D', i % activities + 1,
                              i / activities + 1);
                const std::filesystem::path path =
                    std::filesystem::path(config.root) / (std::string(stem) + ".txt");
                rec.meta = label_from_name(path.string());

                const RawRecording raw = quantize(rec, config.calibration);
                std::ofstream f(path, std::ios::binary | std::ios::trunc);
                if (!f) {
                    throw IoError("cannot write '" + path.string() + "'");
                }
                serialize_recording(raw, f);
                if (!f.flush()) {
                    throw IoError("failed writing '" + path.string() + "'");
                }
                ++written;
            }
        }

        out << "wrote " << written << " fixtures (" << config.synth_count << " FALL / "
            << config.synth_count << " ADL) under " << config.root << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return exit_code_for(e, err);
    }
}

}  // namespace falldet
