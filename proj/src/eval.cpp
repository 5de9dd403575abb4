#include "falldet/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "falldet/errors.hpp"
#include "falldet/parallel.hpp"
#include "falldet/rng.hpp"

#include <nlohmann/json.hpp>

namespace falldet {

FoldAssignment make_folds(const std::vector<Label>& labels, int k, std::uint64_t seed,
                          bool stratified) {
    const std::size_t n = labels.size();
    if (k < 2 || static_cast<std::size_t>(k) > n) {
        throw ConfigError("cannot make " + std::to_string(k) + " folds from " + std::to_string(n) +
                          " rows");
    }

    FoldAssignment assignment;
    assignment.fold_of_row.assign(n, -1);
    assignment.k = k;
    assignment.seed = seed;
    assignment.stratified = stratified;

    Rng rng(mix_seed(seed, 0xf01d));

    std::vector<std::vector<std::size_t>> groups;
    if (stratified) {
        groups.resize(2);
        for (std::size_t i = 0; i < n; ++i) {
            groups[labels[i] == Label::Fall ? 0 : 1].push_back(i);
        }
        for (const auto& g : groups) {
            if (g.size() < static_cast<std::size_t>(k)) {
                throw ConfigError("stratified folds need at least k rows per class");
            }
        }
    } else {
        groups.resize(1);
        groups[0].resize(n);
        std::iota(groups[0].begin(), groups[0].end(), 0);
    }

    // Deal each shuffled group into per-fold quotas. The fold window that
    // receives the remainder rotates between groups so total fold sizes also
    // stay within one of each other.
    int extra_cursor = 0;
    for (auto& group : groups) {
        rng.shuffle(group);
        const std::size_t base = group.size() / static_cast<std::size_t>(k);
        const int extras = static_cast<int>(group.size() % static_cast<std::size_t>(k));
        std::size_t next = 0;
        for (int fold = 0; fold < k; ++fold) {
            const int offset = (fold - extra_cursor + 2 * k) % k;
            std::size_t quota = base + (offset < extras ? 1 : 0);
            while (quota-- > 0) assignment.fold_of_row[group[next++]] = fold;
        }
        extra_cursor = (extra_cursor + extras) % k;
    }
    return assignment;
}

void ConfusionMatrix::add(Label truth, Label predicted) {
    if (truth == Label::Fall) {
        predicted == Label::Fall ? ++tp : ++fn;
    } else {
        predicted == Label::Fall ? ++fp : ++tn;
    }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    tp += other.tp;
    fn += other.fn;
    fp += other.fp;
    tn += other.tn;
    return *this;
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0 || cm.tn + cm.fp == 0) {
        throw TrainError("metrics undefined: a class has no evaluated rows (tp+fn=" +
                         std::to_string(cm.tp + cm.fn) + ", tn+fp=" + std::to_string(cm.tn + cm.fp) +
                         ")");
    }
    Metrics m;
    m.sensitivity = 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    m.specificity = 100.0 * static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
    m.accuracy = 100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    return m;
}

CvResult cross_validate(const FeatureMatrix& matrix, ClassifierKind kind,
                        const ClassifierParams& params, const FoldAssignment& folds, bool scaling,
                        std::uint64_t seed, int workers) {
    const std::size_t n = matrix.rows.size();
    if (folds.fold_of_row.size() != n) {
        throw TrainError("fold assignment does not cover the feature matrix");
    }

    CvResult result;
    result.per_fold.assign(static_cast<std::size_t>(folds.k), ConfusionMatrix{});
    const bool use_scaler = scaling && kind != ClassifierKind::DecisionTree;

    parallel_for(static_cast<std::size_t>(folds.k), workers, [&](std::size_t fold) {
        try {
            Matrix train_x, test_x;
            std::vector<Label> train_y, test_y;
            for (std::size_t i = 0; i < n; ++i) {
                const bool held_out = folds.fold_of_row[i] == static_cast<int>(fold);
                Vec row(matrix.rows[i].values.begin(), matrix.rows[i].values.end());
                if (held_out) {
                    test_x.push_back(std::move(row));
                    test_y.push_back(matrix.rows[i].label);
                } else {
                    train_x.push_back(std::move(row));
                    train_y.push_back(matrix.rows[i].label);
                }
            }

            if (use_scaler) {
                const Scaler scaler = fit_scaler(train_x);
                train_x = transform(scaler, train_x);
                test_x = transform(scaler, test_x);
            }

            ClassifierParams fold_params = params;
            fold_params.svm.seed = mix_seed(seed, fold * 8 + static_cast<std::size_t>(kind));
            const TrainedModel model = train_model(kind, train_x, train_y, fold_params);

            ConfusionMatrix& cm = result.per_fold[fold];
            for (std::size_t i = 0; i < test_x.size(); ++i) {
                cm.add(test_y[i], predict(model, test_x[i]));
            }
        } catch (const TrainError& e) {
            throw TrainError(std::string(to_string(kind)) + " fold " + std::to_string(fold) + ": " +
                             e.what());
        }
    });

    for (const ConfusionMatrix& cm : result.per_fold) result.pooled += cm;
    return result;
}

Report build_report(const std::vector<ClassifierReport>& results, const PipelineConfig& config,
                    double evaluate_seconds) {
    if (results.empty()) {
        throw TrainError("report needs at least one classifier result");
    }
    for (const ClassifierReport& r : results) {
        ConfusionMatrix sum;
        for (const ConfusionMatrix& cm : r.per_fold) sum += cm;
        if (!(sum == r.pooled)) {
            throw TrainError(std::string(display_name(r.kind)) +
                             ": pooled matrix is not the sum of its folds");
        }
        if (r.per_fold.size() != results.front().per_fold.size()) {
            throw TrainError("classifiers were evaluated on different fold counts");
        }
        for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
            if (r.per_fold[f].total() != results.front().per_fold[f].total()) {
                throw TrainError("classifiers were evaluated on different fold assignments");
            }
        }
    }

    Report report;
    report.classifiers = results;
    report.config = config;
    report.evaluate_seconds = evaluate_seconds;
    return report;
}

namespace {

nlohmann::ordered_json matrix_json(const ConfusionMatrix& cm) {
    return {{"tp", cm.tp}, {"fn", cm.fn}, {"fp", cm.fp}, {"tn", cm.tn}};
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string report_to_json(const Report& report) {
    nlohmann::ordered_json j;

    const PipelineConfig& c = report.config;
    nlohmann::ordered_json classifiers = nlohmann::ordered_json::array();
    for (ClassifierKind kind : c.classifiers) classifiers.push_back(to_string(kind));
    j["config"] = {
        {"cache", c.cache},
        {"seed", c.seed},
        {"folds", c.folds},
        {"classifiers", classifiers},
        {"scaling", !c.no_scaling},
        {"stratified", !c.no_stratify},
        {"zero_phase", c.zero_phase},
        {"filter", {{"order", c.filter.order},
                    {"cutoff_hz", c.filter.cutoff_hz},
                    {"sample_rate_hz", c.filter.sample_rate_hz}}},
        {"hyperparameters",
         {{"svm", {{"c", c.params.svm.c},
                   {"scale", c.params.svm.kernel_scale},
                   {"tol", c.params.svm.tol},
                   {"max_passes", c.params.svm.max_passes}}},
          {"dt", {{"max_depth", c.params.dt.max_depth}, {"min_leaf", c.params.dt.min_leaf}}},
          {"lr", {{"learning_rate", c.params.lr.learning_rate},
                  {"l2", c.params.lr.l2},
                  {"epochs", c.params.lr.epochs}}}}},
    };

    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const ClassifierReport& r : report.classifiers) {
        nlohmann::ordered_json folds = nlohmann::ordered_json::array();
        for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
            nlohmann::ordered_json fold = matrix_json(r.per_fold[f]);
            fold["fold"] = f;
            folds.push_back(std::move(fold));
        }
        results.push_back({
            {"classifier", to_string(r.kind)},
            {"pooled", matrix_json(r.pooled)},
            {"metrics", {{"sensitivity_pct", r.metrics.sensitivity},
                         {"specificity_pct", r.metrics.specificity},
                         {"accuracy_pct", r.metrics.accuracy}}},
            {"folds", std::move(folds)},
        });
    }
    j["results"] = std::move(results);

    // wall time lives in its own subtree so reports stay byte-comparable
    j["timing"] = {{"evaluate_seconds", report.evaluate_seconds}};
    return j.dump(2) + "\n";
}

std::string report_to_csv(const Report& report) {
    std::string out = "classifier,fold,tp,fn,fp,tn\n";
    for (const ClassifierReport& r : report.classifiers) {
        for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
            const ConfusionMatrix& cm = r.per_fold[f];
            out += to_string(r.kind);
            out += ',' + std::to_string(f);
            out += ',' + std::to_string(cm.tp);
            out += ',' + std::to_string(cm.fn);
            out += ',' + std::to_string(cm.fp);
            out += ',' + std::to_string(cm.tn);
            out += '\n';
        }
    }
    return out;
}

std::string render_metrics_table(const Report& report) {
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s\n", "classifier", "SE", "SP", "accuracy");
    out << line;
    for (const ClassifierReport& r : report.classifiers) {
        std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s\n", display_name(r.kind),
                      fmt2(r.metrics.sensitivity).c_str(), fmt2(r.metrics.specificity).c_str(),
                      fmt2(r.metrics.accuracy).c_str());
        out << line;
    }
    return out.str();
}

}  // namespace falldet
