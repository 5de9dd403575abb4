#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "falldet/ingest.hpp"

namespace falldet {

using Vec = std::vector<double>;
using Matrix = std::vector<Vec>;  // rows of equal width

enum class ClassifierKind { DecisionTree, LogisticRegression, Knn, Svm };

const char* to_string(ClassifierKind kind);          // "dt" / "lr" / "knn" / "svm"
const char* display_name(ClassifierKind kind);       // "DT" / "LR" / "KNN" / "SVM"
ClassifierKind classifier_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Feature standardization (fitted on training rows only)

struct Scaler {
    Vec mean;
    Vec std;  // population std, floored at 1e-12
};

Scaler fit_scaler(const Matrix& rows);  // requires >= 2 rows
Vec transform(const Scaler& scaler, const Vec& v);
Matrix transform(const Scaler& scaler, const Matrix& rows);

// ---------------------------------------------------------------------------
// K-nearest neighbor, k = 1, Euclidean; distance ties resolve to the lowest
// training index.

struct KnnModel {
    Matrix train_x;
    std::vector<Label> train_y;
};

KnnModel knn_fit(const Matrix& x, const std::vector<Label>& y);
Label knn_predict(const KnnModel& model, const Vec& query);

// ---------------------------------------------------------------------------
// CART decision tree, Gini impurity, axis-aligned midpoint thresholds.

struct DtParams {
    int max_depth = 32;  // <= 0 means unlimited
    int min_leaf = 1;
};

struct TreeNode {
    int feature = -1;       // -1 for leaves
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    Label leaf = Label::Fall;
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

double gini_impurity(std::size_t fall, std::size_t adl);
TreeModel dt_fit(const Matrix& x, const std::vector<Label>& y, const DtParams& params);
Label dt_predict(const TreeModel& model, const Vec& query);

// ---------------------------------------------------------------------------
// Logistic regression, full-batch gradient descent on the L2-regularized
// negative log-likelihood, deterministic from zero initialization.

struct LrParams {
    double learning_rate = 0.1;
    double l2 = 1e-4;
    int epochs = 500;
};

struct LogRegModel {
    Vec weights;
    double bias = 0.0;
};

double lr_loss(const Matrix& x, const std::vector<Label>& y, const Vec& w, double bias, double l2);
void lr_gradient(const Matrix& x, const std::vector<Label>& y, const Vec& w, double bias, double l2,
                 Vec& grad_w, double& grad_b);
LogRegModel lr_fit(const Matrix& x, const std::vector<Label>& y, const LrParams& params);
double lr_probability(const LogRegModel& model, const Vec& query);
Label lr_predict(const LogRegModel& model, const Vec& query);  // p >= 0.5 -> Fall

// ---------------------------------------------------------------------------
// SVM with quadratic kernel, trained by sequential minimal optimization.

// K(u, v) = (u.v / scale^2 + 1)^2
double kernel_quadratic(const Vec& u, const Vec& v, double scale);

struct SvmParams {
    double c = 1.0;
    double kernel_scale = 7.3484692283495345;  // sqrt(54), dimension heuristic
    double tol = 1e-3;
    int max_passes = 1000;  // cap on outer optimization sweeps
    std::uint64_t seed = 0;
};

struct SvmModel {
    Matrix support_vectors;
    Vec dual_coef;  // alpha_i * y_i
    double bias = 0.0;
    double kernel_scale = 1.0;
    double c = 1.0;
    double max_kkt_violation = 0.0;  // measured after convergence

    double decision(const Vec& query) const;
};

// y must be +1 (Fall) / -1 (ADL) with both classes present.
SvmModel svm_fit(const Matrix& x, const std::vector<int>& y, const SvmParams& params);
Label svm_predict(const SvmModel& model, const Vec& query);  // sign; exact 0 -> Fall

// ---------------------------------------------------------------------------
// Common train/predict contract over the four parameterizations.

struct ClassifierParams {
    DtParams dt;
    LrParams lr;
    SvmParams svm;
};

using TrainedModel = std::variant<TreeModel, LogRegModel, KnnModel, SvmModel>;

TrainedModel train_model(ClassifierKind kind, const Matrix& x, const std::vector<Label>& y,
                         const ClassifierParams& params);
Label predict(const TrainedModel& model, const Vec& query);

inline int to_pm1(Label label) { return label == Label::Fall ? 1 : -1; }

}  // namespace falldet
