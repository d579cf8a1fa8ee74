#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "cnrl/rng.hpp"

namespace cnrl {

/// Walker's alias table for O(1) categorical sampling (Vose construction).
/// Build is O(n); sampling draws one index and one double.
class AliasTable {
public:
    AliasTable() = default;

    explicit AliasTable(std::span<const double> weights) {
        const std::size_t n = weights.size();
        if (n == 0) throw std::invalid_argument("AliasTable: empty weight vector");
        double total = 0.0;
        for (double w : weights) {
            if (!(w > 0.0)) throw std::invalid_argument("AliasTable: weights must be positive");
            total += w;
        }
        prob_.resize(n);
        alias_.resize(n);
        // Scale so the average cell mass is exactly 1.
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;

        std::vector<std::uint32_t> small, large;
        small.reserve(n);
        large.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            const std::uint32_t s = small.back();
            const std::uint32_t l = large.back();
            small.pop_back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        // Leftovers are exactly 1 up to rounding.
        for (std::uint32_t i : large) {
            prob_[i] = 1.0;
            alias_[i] = i;
        }
        for (std::uint32_t i : small) {
            prob_[i] = 1.0;
            alias_[i] = i;
        }
    }

    std::size_t size() const { return prob_.size(); }

    std::uint32_t sample(Rng& rng) const {
        const auto cell = static_cast<std::uint32_t>(rng.next_below(prob_.size()));
        return rng.next_double() < prob_[cell] ? cell : alias_[cell];
    }

    // Cell access for direct table inspection.
    double cell_prob(std::size_t i) const { return prob_[i]; }
    std::uint32_t cell_alias(std::size_t i) const { return alias_[i]; }

    /// Exact probability of drawing index i, computed by enumerating cells.
    double exact_probability(std::size_t i) const {
        const double n = static_cast<double>(prob_.size());
        double p = prob_[i] / n;
        for (std::size_t cell = 0; cell < prob_.size(); ++cell) {
            if (alias_[cell] == i && cell != i) p += (1.0 - prob_[cell]) / n;
        }
        return p;
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

}  // namespace cnrl
