#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "falldet/classify.hpp"
#include "falldet/config.hpp"
#include "falldet/features.hpp"

namespace falldet {

struct FoldAssignment {
    std::vector<int> fold_of_row;  // one entry per matrix row, values 0..k-1
    int k = 10;
    std::uint64_t seed = 0;
    bool stratified = true;
};

// Random partition into k folds with sizes differing by at most one; when
// stratified, per-fold counts of each class also differ by at most one.
FoldAssignment make_folds(const std::vector<Label>& labels, int k, std::uint64_t seed,
                          bool stratified);

// Fall is the positive class throughout.
struct ConfusionMatrix {
    std::uint64_t tp = 0, fn = 0, fp = 0, tn = 0;

    std::uint64_t total() const { return tp + fn + fp + tn; }
    void add(Label truth, Label predicted);
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    bool operator==(const ConfusionMatrix&) const = default;
};

struct Metrics {
    double sensitivity = 0.0;  // percent
    double specificity = 0.0;
    double accuracy = 0.0;
};

// SE = TP/(TP+FN)*100, SP = TN/(TN+FP)*100, Acc = (TP+TN)/total*100.
// A zero denominator raises instead of silently reporting 0.
Metrics compute_metrics(const ConfusionMatrix& cm);

struct CvResult {
    ConfusionMatrix pooled;
    std::vector<ConfusionMatrix> per_fold;
};

// For every fold: fit the scaler (where the classifier wants one) and the
// model on the other k-1 folds, predict the held-out rows, accumulate counts.
CvResult cross_validate(const FeatureMatrix& matrix, ClassifierKind kind,
                        const ClassifierParams& params, const FoldAssignment& folds, bool scaling,
                        std::uint64_t seed, int workers);

struct ClassifierReport {
    ClassifierKind kind = ClassifierKind::DecisionTree;
    ConfusionMatrix pooled;
    std::vector<ConfusionMatrix> per_fold;
    Metrics metrics;
};

struct Report {
    std::vector<ClassifierReport> classifiers;
    PipelineConfig config;     // run echo: seed, hyperparameters, flags
    double evaluate_seconds = 0.0;  // kept out of the determinism contract
};

// Validates that every pooled matrix is the sum of its folds and that all
// classifiers were evaluated on the same fold sizes.
Report build_report(const std::vector<ClassifierReport>& results, const PipelineConfig& config,
                    double evaluate_seconds);

std::string report_to_json(const Report& report);  // timing segregated under "timing"
std::string report_to_csv(const Report& report);   // classifier,fold,tp,fn,fp,tn
std::string render_metrics_table(const Report& report);

}  // namespace falldet
