#include "cnrl/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cnrl {

namespace {

// Full-batch objective and gradient of one binary problem:
//   f(w, b) = 0.5*lambda*|w|^2 + sum_i log(1 + exp(-y_i (w.x_i + b)))
// y in {-1, +1}; the intercept is unregularized.
struct BinaryProblem {
    std::span<const double> features;
    std::size_t dim;
    const std::vector<std::size_t>& rows;
    const std::vector<double>& y;
    double lambda;

    double loss(const std::vector<double>& wb) const {
        const double* w = wb.data();
        const double b = wb[dim];
        double f = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double* x = features.data() + rows[r] * dim;
            double margin = b;
            for (std::size_t j = 0; j < dim; ++j) margin += w[j] * x[j];
            const double ym = y[r] * margin;
            // log(1+exp(-ym)) computed stably
            f += ym > 0 ? std::log1p(std::exp(-ym)) : -ym + std::log1p(std::exp(ym));
        }
        double reg = 0.0;
        for (std::size_t j = 0; j < dim; ++j) reg += w[j] * w[j];
        return f + 0.5 * lambda * reg;
    }

    void gradient(const std::vector<double>& wb, std::vector<double>& grad) const {
        const double* w = wb.data();
        const double b = wb[dim];
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double* x = features.data() + rows[r] * dim;
            double margin = b;
            for (std::size_t j = 0; j < dim; ++j) margin += w[j] * x[j];
            const double ym = y[r] * margin;
            const double coeff = -y[r] / (1.0 + std::exp(ym));  // -y * sigmoid(-ym)
            for (std::size_t j = 0; j < dim; ++j) grad[j] += coeff * x[j];
            grad[dim] += coeff;
        }
        for (std::size_t j = 0; j < dim; ++j) grad[j] += lambda * w[j];
    }
};

// Gradient descent with Armijo backtracking.
std::vector<double> solve_binary(const BinaryProblem& problem, const LogRegConfig& config) {
    const std::size_t dim = problem.dim;
    std::vector<double> wb(dim + 1, 0.0), grad(dim + 1, 0.0), trial(dim + 1, 0.0);
    double f = problem.loss(wb);
    double step = 1.0 / std::max<double>(1.0, static_cast<double>(problem.rows.size()));
    const double n_train = static_cast<double>(problem.rows.size());
    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        problem.gradient(wb, grad);
        double gnorm2 = 0.0;
        for (double gj : grad) gnorm2 += gj * gj;
        if (std::sqrt(gnorm2) / n_train <= config.tolerance) break;

        step *= 2.0;  // optimistic growth, then backtrack
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t j = 0; j <= dim; ++j) trial[j] = wb[j] - step * grad[j];
            const double ft = problem.loss(trial);
            if (ft <= f - 1e-4 * step * gnorm2) {
                wb.swap(trial);
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent direction at double precision
    }
    return wb;
}

}  // namespace

OneVsRestClassifier OneVsRestClassifier::train(std::span<const double> features, std::size_t n,
                                               std::size_t dim, const std::vector<std::vector<int>>& labels,
                                               int n_classes, const LogRegConfig& config) {
    if (features.size() != n * dim) throw std::invalid_argument("classifier: feature shape mismatch");
    if (labels.size() != n) throw std::invalid_argument("classifier: labels not row-aligned with features");
    if (n_classes < 1) throw std::invalid_argument("classifier: need at least one class");

    OneVsRestClassifier clf;
    clf.n_classes_ = n_classes;
    clf.dim_ = dim;
    clf.weights_.assign(static_cast<std::size_t>(n_classes) * (dim + 1), 0.0);

    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);

    // Degenerate guard: a single distinct class in the training set.
    std::vector<std::size_t> class_counts(n_classes, 0);
    for (const auto& ls : labels) {
        for (int c : ls) {
            if (c < 0 || c >= n_classes) throw std::invalid_argument("classifier: label id out of range");
            ++class_counts[c];
        }
    }
    const auto present = std::count_if(class_counts.begin(), class_counts.end(), [](std::size_t c) { return c > 0; });
    if (present <= 1) {
        clf.degenerate_ = true;
        clf.majority_class_ = static_cast<int>(std::max_element(class_counts.begin(), class_counts.end()) -
                                               class_counts.begin());
        std::cerr << "warning: single-class training set, falling back to majority predictor\n";
        return clf;
    }

    std::vector<double> y(n);
    for (int c = 0; c < n_classes; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            const auto& ls = labels[r];
            y[r] = std::find(ls.begin(), ls.end(), c) != ls.end() ? 1.0 : -1.0;
        }
        BinaryProblem problem{features, dim, rows, y, config.lambda};
        const auto wb = solve_binary(problem, config);
        std::copy(wb.begin(), wb.end(), clf.weights_.begin() + static_cast<std::size_t>(c) * (dim + 1));
    }
    return clf;
}

std::vector<double> OneVsRestClassifier::scores(std::span<const double> x) const {
    if (x.size() != dim_) throw std::invalid_argument("classifier: feature dimension mismatch");
    std::vector<double> out(n_classes_, 0.0);
    if (degenerate_) {
        out[majority_class_] = 1.0;
        return out;
    }
    for (int c = 0; c < n_classes_; ++c) {
        const double* wb = weights_.data() + static_cast<std::size_t>(c) * (dim_ + 1);
        double margin = wb[dim_];
        for (std::size_t j = 0; j < dim_; ++j) margin += wb[j] * x[j];
        out[c] = margin;
    }
    return out;
}

int OneVsRestClassifier::predict(std::span<const double> x) const {
    const auto s = scores(x);
    return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

std::vector<int> OneVsRestClassifier::predict_top_k(std::span<const double> x, std::size_t k) const {
    const auto s = scores(x);
    std::vector<int> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s[a] > s[b]; });
    order.resize(std::min(k, order.size()));
    return order;
}

double accuracy(const OneVsRestClassifier& clf, std::span<const double> features, std::size_t dim,
                std::span<const std::size_t> rows, const std::vector<std::vector<int>>& labels) {
    if (rows.empty()) throw std::invalid_argument("accuracy: empty evaluation set");
    std::size_t correct = 0;
    for (std::size_t r : rows) {
        const int predicted = clf.predict({features.data() + r * dim, dim});
        const auto& truth = labels[r];
        if (!truth.empty() && std::find(truth.begin(), truth.end(), predicted) != truth.end()) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(rows.size());
}

double micro_f1(const OneVsRestClassifier& clf, std::span<const double> features, std::size_t dim,
                std::span<const std::size_t> rows, const std::vector<std::vector<int>>& labels) {
    if (rows.empty()) throw std::invalid_argument("micro_f1: empty evaluation set");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t r : rows) {
        const auto& truth = labels[r];
        const auto predicted = clf.predict_top_k({features.data() + r * dim, dim}, truth.size());
        for (int p : predicted) {
            if (std::find(truth.begin(), truth.end(), p) != truth.end()) ++tp;
            else ++fp;
        }
        for (int t : truth) {
            if (std::find(predicted.begin(), predicted.end(), t) == predicted.end()) ++fn;
        }
    }
    const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp) + static_cast<double>(fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

}  // namespace cnrl
