#include <algorithm>
#include <numeric>

#include "falldet/classify.hpp"
#include "falldet/errors.hpp"

namespace falldet {

double gini_impurity(std::size_t fall, std::size_t adl) {
    const double n = static_cast<double>(fall + adl);
    if (n == 0.0) return 0.0;
    const double pf = static_cast<double>(fall) / n;
    const double pa = static_cast<double>(adl) / n;
    return 1.0 - pf * pf - pa * pa;
}

namespace {

struct Split {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child Gini
};

struct TreeBuilder {
    const Matrix& x;
    const std::vector<Label>& y;
    DtParams params;
    std::vector<TreeNode> nodes;

    Label majority(const std::vector<std::size_t>& rows) const {
        std::size_t fall = 0;
        for (std::size_t r : rows) fall += y[r] == Label::Fall;
        // tie resolves to Fall (missing a fall costs more than a false alarm)
        return 2 * fall >= rows.size() ? Label::Fall : Label::ADL;
    }

    Split best_split(const std::vector<std::size_t>& rows) const {
        const std::size_t dim = x.front().size();
        const std::size_t n = rows.size();
        const std::size_t min_leaf = static_cast<std::size_t>(params.min_leaf);

        std::size_t total_fall = 0;
        for (std::size_t r : rows) total_fall += y[r] == Label::Fall;

        Split best;
        std::vector<std::size_t> order(rows);
        for (std::size_t feature = 0; feature < dim; ++feature) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return x[a][feature] < x[b][feature];
            });

            std::size_t left_fall = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_fall += y[order[i]] == Label::Fall;
                const double lo = x[order[i]][feature];
                const double hi = x[order[i + 1]][feature];
                if (!(lo < hi)) continue;  // threshold must sit strictly between two values
                const std::size_t left_n = i + 1;
                const std::size_t right_n = n - left_n;
                if (left_n < min_leaf || right_n < min_leaf) continue;

                const std::size_t right_fall = total_fall - left_fall;
                const double weighted =
                    (static_cast<double>(left_n) * gini_impurity(left_fall, left_n - left_fall) +
                     static_cast<double>(right_n) * gini_impurity(right_fall, right_n - right_fall)) /
                    static_cast<double>(n);
                if (!best.found || weighted < best.impurity) {
                    best.found = true;
                    best.feature = static_cast<int>(feature);
                    best.threshold = lo + (hi - lo) / 2.0;
                    best.impurity = weighted;
                }
            }
        }
        return best;
    }

    int build(std::vector<std::size_t> rows, int depth) {
        std::size_t fall = 0;
        for (std::size_t r : rows) fall += y[r] == Label::Fall;
        const bool pure = fall == 0 || fall == rows.size();
        const bool depth_capped = params.max_depth > 0 && depth >= params.max_depth;

        Split split;
        if (!pure && !depth_capped && rows.size() >= 2 * static_cast<std::size_t>(params.min_leaf)) {
            split = best_split(rows);
        }

        const int index = static_cast<int>(nodes.size());
        nodes.emplace_back();
        if (!split.found) {
            nodes[index].leaf = majority(rows);
            return index;
        }

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) {
            (x[r][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        nodes[index].feature = split.feature;
        nodes[index].threshold = split.threshold;
        const int l = build(std::move(left), depth + 1);
        const int r = build(std::move(right), depth + 1);
        nodes[index].left = l;
        nodes[index].right = r;
        return index;
    }
};

}  // namespace

TreeModel dt_fit(const Matrix& x, const std::vector<Label>& y, const DtParams& params) {
    if (x.empty() || x.size() != y.size()) {
        throw TrainError("dt: empty training set or row/label count mismatch");
    }
    if (params.min_leaf < 1) {
        throw TrainError("dt: min_leaf must be >= 1");
    }
    TreeBuilder builder{x, y, params, {}};
    std::vector<std::size_t> rows(x.size());
    std::iota(rows.begin(), rows.end(), 0);
    builder.build(std::move(rows), 0);
    return TreeModel{std::move(builder.nodes)};
}

Label dt_predict(const TreeModel& model, const Vec& query) {
    int index = 0;
    while (model.nodes[static_cast<std::size_t>(index)].feature >= 0) {
        const TreeNode& node = model.nodes[static_cast<std::size_t>(index)];
        const std::size_t feature = static_cast<std::size_t>(node.feature);
        if (feature >= query.size()) {
            throw TrainError("dt: dimension mismatch");
        }
        index = query[feature] <= node.threshold ? node.left : node.right;
    }
    return model.nodes[static_cast<std::size_t>(index)].leaf;
}

}  // namespace falldet
