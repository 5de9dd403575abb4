#include <algorithm>
#include <cmath>
#include <limits>

#include "falldet/classify.hpp"
#include "falldet/errors.hpp"
#include "falldet/rng.hpp"

namespace falldet {

double kernel_quadratic(const Vec& u, const Vec& v, double scale) {
    if (u.size() != v.size()) {
        throw TrainError("svm: kernel dimension mismatch");
    }
    double dot = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) dot += u[j] * v[j];
    const double k = dot / (scale * scale) + 1.0;
    return k * k;
}

double SvmModel::decision(const Vec& query) const {
    double sum = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        sum += dual_coef[i] * kernel_quadratic(support_vectors[i], query, kernel_scale);
    }
    return sum;
}

Label svm_predict(const SvmModel& model, const Vec& query) {
    return model.decision(query) >= 0.0 ? Label::Fall : Label::ADL;
}

namespace {

// Platt's SMO over the dual of the soft-margin problem. The working-set
// heuristics follow the original formulation: first choice is any KKT
// violator, second choice maximizes |E1 - E2| over non-bound multipliers
// with seeded random sweeps as fallback.
class SmoSolver {
public:
    SmoSolver(const Matrix& x, const std::vector<int>& y, const SvmParams& params)
        : x_(x), y_(y), params_(params), n_(x.size()), rng_(mix_seed(params.seed, 0x5140)) {
        alpha_.assign(n_, 0.0);
        fraw_.assign(n_, 0.0);  // sum_j alpha_j y_j K(j, i); decision = fraw + b
    }

    SvmModel solve() {
        int passes = 0;
        bool examine_all = true;
        std::size_t num_changed = 0;
        while (num_changed > 0 || examine_all) {
            if (++passes > params_.max_passes) {
                throw TrainError("svm: no convergence after " + std::to_string(params_.max_passes) +
                                 " passes; max KKT violation " + std::to_string(max_violation()));
            }
            num_changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (examine_all || is_non_bound(i)) num_changed += examine(i);
            }
            if (examine_all) {
                examine_all = false;
            } else if (num_changed == 0) {
                examine_all = true;
            }
        }
        return extract_model();
    }

private:
    double kernel(std::size_t i, std::size_t j) const {
        return kernel_quadratic(x_[i], x_[j], params_.kernel_scale);
    }

    double error(std::size_t i) const { return fraw_[i] + b_ - y_[i]; }

    bool is_non_bound(std::size_t i) const {
        return alpha_[i] > 0.0 && alpha_[i] < params_.c;
    }

    // violation of the tolerance-relaxed optimality conditions at point i
    double violation(std::size_t i) const {
        const double margin = y_[i] * (fraw_[i] + b_);  // y * f(x)
        double v = 0.0;
        if (alpha_[i] < params_.c) v = std::max(v, 1.0 - margin);
        if (alpha_[i] > 0.0) v = std::max(v, margin - 1.0);
        return v;
    }

    double max_violation() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i) worst = std::max(worst, violation(i));
        return worst;
    }

    std::size_t examine(std::size_t i2) {
        const double e2 = error(i2);
        const double r2 = e2 * y_[i2];
        const bool violates = (r2 < -params_.tol && alpha_[i2] < params_.c) ||
                              (r2 > params_.tol && alpha_[i2] > 0.0);
        if (!violates) return 0;

        // heuristic 1: largest |E1 - E2| among non-bound points
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_non_bound(i)) continue;
            const double gap = std::abs(error(i) - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return 1;

        // heuristic 2: sweep non-bound points from a random start
        const std::size_t start1 = rng_.uniform_index(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start1 + k) % n_;
            if (is_non_bound(i1) && take_step(i1, i2)) return 1;
        }
        // heuristic 3: sweep everything from a random start
        const std::size_t start2 = rng_.uniform_index(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start2 + k) % n_;
            if (take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1 = alpha_[i1], a2 = alpha_[i2];
        const int y1 = y_[i1], y2 = y_[i2];
        const double e1 = error(i1), e2 = error(i2);
        const double s = y1 * y2;
        const double c = params_.c;

        double lo, hi;
        if (s > 0) {
            lo = std::max(0.0, a1 + a2 - c);
            hi = std::min(c, a1 + a2);
        } else {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c, c + a2 - a1);
        }
        if (lo >= hi) return false;

        const double k11 = kernel(i1, i1);
        const double k12 = kernel(i1, i2);
        const double k22 = kernel(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // flat direction: evaluate the objective at both clip bounds
            const double f1 = y1 * (fraw_[i1] - y1) - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * (fraw_[i2] - y2) - s * a1 * k12 - a2 * k22;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                                  s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                                  s * hi * h1 * k12;
            if (obj_lo < obj_hi - kEps) a2_new = lo;
            else if (obj_lo > obj_hi + kEps) a2_new = hi;
            else return false;
        }
        if (a2_new < kBoundSnap) a2_new = 0.0;
        else if (a2_new > c - kBoundSnap) a2_new = c;
        if (std::abs(a2_new - a2) < kEps * (a2_new + a2 + kEps)) return false;

        double a1_new = a1 + s * (a2 - a2_new);
        if (a1_new < kBoundSnap) a1_new = 0.0;
        else if (a1_new > c - kBoundSnap) a1_new = c;

        const double d1 = y1 * (a1_new - a1);
        const double d2 = y2 * (a2_new - a2);
        const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
        if (a1_new > 0.0 && a1_new < c) b_ = b1;
        else if (a2_new > 0.0 && a2_new < c) b_ = b2;
        else b_ = (b1 + b2) / 2.0;

        for (std::size_t j = 0; j < n_; ++j) {
            fraw_[j] += d1 * kernel(i1, j) + d2 * kernel(i2, j);
        }
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        return true;
    }

    SvmModel extract_model() {
        SvmModel model;
        model.bias = b_;
        model.kernel_scale = params_.kernel_scale;
        model.c = params_.c;
        model.max_kkt_violation = max_violation();
        bool sv_fall = false, sv_adl = false;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] <= 0.0) continue;
            model.support_vectors.push_back(x_[i]);
            model.dual_coef.push_back(alpha_[i] * y_[i]);
            (y_[i] > 0 ? sv_fall : sv_adl) = true;
        }
        if (!sv_fall || !sv_adl) {
            throw TrainError("svm: degenerate solution without support vectors in both classes");
        }
        return model;
    }

    static constexpr double kEps = 1e-12;
    static constexpr double kBoundSnap = 1e-10;

    const Matrix& x_;
    const std::vector<int>& y_;
    SvmParams params_;
    std::size_t n_;
    Rng rng_;
    std::vector<double> alpha_;
    std::vector<double> fraw_;
    double b_ = 0.0;
};

}  // namespace

SvmModel svm_fit(const Matrix& x, const std::vector<int>& y, const SvmParams& params) {
    if (x.empty() || x.size() != y.size()) {
        throw TrainError("svm: empty training set or row/label count mismatch");
    }
    bool has_pos = false, has_neg = false;
    for (int yi : y) {
        if (yi == 1) has_pos = true;
        else if (yi == -1) has_neg = true;
        else throw TrainError("svm: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) {
        throw TrainError("svm: both classes must be present");
    }
    if (!(params.c > 0.0) || !(params.kernel_scale > 0.0) || !(params.tol > 0.0) ||
        params.max_passes < 1) {
        throw TrainError("svm: invalid hyperparameters");
    }
    for (const Vec& row : x) {
        if (row.size() != x.front().size()) throw TrainError("svm: inconsistent row width");
    }

    return SmoSolver(x, y, params).solve();
}

}  // namespace falldet
