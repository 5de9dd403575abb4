#include <cmath>

#include "falldet/classify.hpp"
#include "falldet/errors.hpp"

namespace falldet {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow
double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double dot_with_bias(const Vec& w, double bias, const Vec& x) {
    if (w.size() != x.size()) {
        throw TrainError("lr: dimension mismatch");
    }
    double z = bias;
    for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
    return z;
}

void check_shapes(const Matrix& x, const std::vector<Label>& y) {
    if (x.empty() || x.size() != y.size()) {
        throw TrainError("lr: empty training set or row/label count mismatch");
    }
    for (const Vec& row : x) {
        if (row.size() != x.front().size()) throw TrainError("lr: inconsistent row width");
    }
}

}  // namespace

double lr_loss(const Matrix& x, const std::vector<Label>& y, const Vec& w, double bias, double l2) {
    check_shapes(x, y);
    const double n = static_cast<double>(x.size());
    double nll = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = dot_with_bias(w, bias, x[i]);
        const double target = y[i] == Label::Fall ? 1.0 : 0.0;
        nll += softplus(z) - target * z;
    }
    double reg = 0.0;
    for (double wj : w) reg += wj * wj;  // bias is not regularized
    return nll / n + 0.5 * l2 * reg;
}

void lr_gradient(const Matrix& x, const std::vector<Label>& y, const Vec& w, double bias, double l2,
                 Vec& grad_w, double& grad_b) {
    check_shapes(x, y);
    const std::size_t dim = x.front().size();
    grad_w.assign(dim, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double residual = sigmoid(dot_with_bias(w, bias, x[i])) - (y[i] == Label::Fall ? 1.0 : 0.0);
        for (std::size_t j = 0; j < dim; ++j) grad_w[j] += residual * x[i][j];
        grad_b += residual;
    }
    const double n = static_cast<double>(x.size());
    for (std::size_t j = 0; j < dim; ++j) grad_w[j] = grad_w[j] / n + l2 * w[j];
    grad_b /= n;
}

LogRegModel lr_fit(const Matrix& x, const std::vector<Label>& y, const LrParams& params) {
    check_shapes(x, y);
    bool has_fall = false, has_adl = false;
    for (Label label : y) (label == Label::Fall ? has_fall : has_adl) = true;
    if (!has_fall || !has_adl) {
        throw TrainError("lr: both classes must be present");
    }
    if (!(params.learning_rate > 0.0) || params.epochs < 1 || params.l2 < 0.0) {
        throw TrainError("lr: invalid hyperparameters");
    }

    LogRegModel model;
    model.weights.assign(x.front().size(), 0.0);
    Vec grad_w;
    double grad_b = 0.0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        lr_gradient(x, y, model.weights, model.bias, params.l2, grad_w, grad_b);
        for (std::size_t j = 0; j < model.weights.size(); ++j) {
            model.weights[j] -= params.learning_rate * grad_w[j];
        }
        model.bias -= params.learning_rate * grad_b;

        if (!std::isfinite(model.bias) ||
            !std::isfinite(lr_loss(x, y, model.weights, model.bias, params.l2))) {
            throw TrainError("lr: loss diverged at epoch " + std::to_string(epoch) +
                             "; try a smaller learning rate");
        }
    }
    return model;
}

double lr_probability(const LogRegModel& model, const Vec& query) {
    return sigmoid(dot_with_bias(model.weights, model.bias, query));
}

Label lr_predict(const LogRegModel& model, const Vec& query) {
    return lr_probability(model, query) >= 0.5 ? Label::Fall : Label::ADL;
}

}  // namespace falldet
