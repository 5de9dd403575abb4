#include "falldet/classify.hpp"

#include <algorithm>
#include <limits>

#include "falldet/errors.hpp"

namespace falldet {

const char* to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::DecisionTree: return "dt";
        case ClassifierKind::LogisticRegression: return "lr";
        case ClassifierKind::Knn: return "knn";
        case ClassifierKind::Svm: return "svm";
    }
    return "?";
}

const char* display_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::DecisionTree: return "DT";
        case ClassifierKind::LogisticRegression: return "LR";
        case ClassifierKind::Knn: return "KNN";
        case ClassifierKind::Svm: return "SVM";
    }
    return "?";
}

ClassifierKind classifier_from_string(const std::string& s) {
    if (s == "dt") return ClassifierKind::DecisionTree;
    if (s == "lr") return ClassifierKind::LogisticRegression;
    if (s == "knn") return ClassifierKind::Knn;
    if (s == "svm") return ClassifierKind::Svm;
    throw ConfigError("unknown classifier '" + s + "' (expected dt, lr, knn or svm)");
}

Scaler fit_scaler(const Matrix& rows) {
    if (rows.size() < 2) {
        throw TrainError("scaler needs at least 2 training rows, got " + std::to_string(rows.size()));
    }
    const std::size_t dim = rows.front().size();
    Scaler scaler;
    scaler.mean.assign(dim, 0.0);
    scaler.std.assign(dim, 0.0);

    const double n = static_cast<double>(rows.size());
    for (const Vec& row : rows) {
        if (row.size() != dim) throw TrainError("scaler: inconsistent row width");
        for (std::size_t j = 0; j < dim; ++j) scaler.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < dim; ++j) scaler.mean[j] /= n;
    for (const Vec& row : rows) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = row[j] - scaler.mean[j];
            scaler.std[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < dim; ++j) {
        scaler.std[j] = std::max(std::sqrt(scaler.std[j] / n), 1e-12);
    }
    return scaler;
}

Vec transform(const Scaler& scaler, const Vec& v) {
    if (v.size() != scaler.mean.size()) {
        throw TrainError("scaler: dimension mismatch");
    }
    Vec out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        out[j] = (v[j] - scaler.mean[j]) / scaler.std[j];
    }
    return out;
}

Matrix transform(const Scaler& scaler, const Matrix& rows) {
    Matrix out;
    out.reserve(rows.size());
    for (const Vec& row : rows) out.push_back(transform(scaler, row));
    return out;
}

KnnModel knn_fit(const Matrix& x, const std::vector<Label>& y) {
    if (x.empty() || x.size() != y.size()) {
        throw TrainError("knn: empty training set or row/label count mismatch");
    }
    return KnnModel{x, y};
}

Label knn_predict(const KnnModel& model, const Vec& query) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < model.train_x.size(); ++i) {
        const Vec& row = model.train_x[i];
        if (row.size() != query.size()) {
            throw TrainError("knn: dimension mismatch");
        }
        double d = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double diff = row[j] - query[j];
            d += diff * diff;
        }
        if (d < best) {  // strict: ties keep the lowest index
            best = d;
            best_index = i;
        }
    }
    return model.train_y[best_index];
}

TrainedModel train_model(ClassifierKind kind, const Matrix& x, const std::vector<Label>& y,
                         const ClassifierParams& params) {
    switch (kind) {
        case ClassifierKind::DecisionTree:
            return dt_fit(x, y, params.dt);
        case ClassifierKind::LogisticRegression:
            return lr_fit(x, y, params.lr);
        case ClassifierKind::Knn:
            return knn_fit(x, y);
        case ClassifierKind::Svm: {
            std::vector<int> pm1(y.size());
            std::transform(y.begin(), y.end(), pm1.begin(), to_pm1);
            return svm_fit(x, pm1, params.svm);
        }
    }
    throw TrainError("unknown classifier kind");
}

Label predict(const TrainedModel& model, const Vec& query) {
    return std::visit(
        [&query](const auto& m) -> Label {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TreeModel>) return dt_predict(m, query);
            else if constexpr (std::is_same_v<T, LogRegModel>) return lr_predict(m, query);
            else if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(m, query);
            else return svm_predict(m, query);
        },
        model);
}

}  // namespace falldet
