#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cnrl {

struct LogRegConfig {
    double lambda = 1.0;        // L2 penalty weight (liblinear's C=1 convention)
    double tolerance = 1e-4;    // on the mean gradient norm
    std::size_t max_iters = 500;
};

/// One-vs-rest L2-regularized logistic regression, trained by full-batch
/// gradient descent with backtracking line search. Deterministic. Each
/// binary problem minimizes
///   0.5*lambda*|w|^2 + sum_i log(1 + exp(-y_i (w.x_i + b)))
/// with an unregularized intercept.
class OneVsRestClassifier {
public:
    /// features: n x dim row-major. labels: per-row list of class ids
    /// (multi-label allowed). A single-class training set degenerates to a
    /// majority predictor (flagged).
    static OneVsRestClassifier train(std::span<const double> features, std::size_t n, std::size_t dim,
                                     const std::vector<std::vector<int>>& labels, int n_classes,
                                     const LogRegConfig& config = {});

    std::vector<double> scores(std::span<const double> x) const;
    int predict(std::span<const double> x) const;
    std::vector<int> predict_top_k(std::span<const double> x, std::size_t k) const;

    bool degenerate() const { return degenerate_; }
    int n_classes() const { return n_classes_; }

private:
    int n_classes_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> weights_;  // n_classes x (dim+1), intercept last
    bool degenerate_ = false;
    int majority_class_ = 0;
};

/// Single-label accuracy: argmax prediction against the first label.
double accuracy(const OneVsRestClassifier& clf, std::span<const double> features, std::size_t dim,
                std::span<const std::size_t> rows, const std::vector<std::vector<int>>& labels);

/// Multi-label micro-F1 with per-row top-k selection, k = true label count.
double micro_f1(const OneVsRestClassifier& clf, std::span<const double> features, std::size_t dim,
                std::span<const std::size_t> rows, const std::vector<std::vector<int>>& labels);

}  // namespace cnrl
