#include "cnrl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace cnrl {

namespace {

// Common neighbors via two-pointer merge over the sorted adjacency rows.
std::size_t common_neighbor_count(const Graph& g, VertexId i, VertexId j) {
    const auto a = g.neighbors(i);
    const auto b = g.neighbors(j);
    std::size_t ia = 0, ib = 0, count = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] < b[ib]) ++ia;
        else if (b[ib] < a[ia]) ++ib;
        else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

}  // namespace

double cn_score(const Graph& g, VertexId i, VertexId j) {
    return static_cast<double>(common_neighbor_count(g, i, j));
}

double salton_score(const Graph& g, VertexId i, VertexId j) {
    const std::size_t di = g.out_degree(i), dj = g.out_degree(j);
    if (di == 0 || dj == 0) return 0.0;
    return static_cast<double>(common_neighbor_count(g, i, j)) /
           std::sqrt(static_cast<double>(di) * static_cast<double>(dj));
}

double jaccard_score(const Graph& g, VertexId i, VertexId j) {
    const std::size_t cn = common_neighbor_count(g, i, j);
    const std::size_t uni = g.out_degree(i) + g.out_degree(j) - cn;
    if (uni == 0) return 0.0;
    return static_cast<double>(cn) / static_cast<double>(uni);
}

double ra_score(const Graph& g, VertexId i, VertexId j) {
    // Resource allocation over the common-neighbor set, ascending id order.
    const auto a = g.neighbors(i);
    const auto b = g.neighbors(j);
    std::size_t ia = 0, ib = 0;
    double score = 0.0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] < b[ib]) ++ia;
        else if (b[ib] < a[ia]) ++ib;
        else {
            const std::size_t dk = g.out_degree(a[ia]);
            if (dk > 0) score += 1.0 / static_cast<double>(dk);
            ++ia;
            ++ib;
        }
    }
    return score;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double auc_exhaustive(std::span<const double> positive_scores, std::span<const double> negative_scores) {
    if (positive_scores.empty() || negative_scores.empty()) {
        throw std::invalid_argument("auc: empty score list");
    }
    std::vector<double> neg(negative_scores.begin(), negative_scores.end());
    std::sort(neg.begin(), neg.end());
    long double wins = 0.0L, ties = 0.0L;
    for (double p : positive_scores) {
        const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
        const auto hi = std::upper_bound(neg.begin(), neg.end(), p);
        wins += static_cast<long double>(lo - neg.begin());
        ties += static_cast<long double>(hi - lo);
    }
    const long double n = static_cast<long double>(positive_scores.size()) *
                          static_cast<long double>(negative_scores.size());
    return static_cast<double>((wins + 0.5L * ties) / n);
}

double auc_sampled(std::span<const double> positive_scores, std::span<const double> negative_scores,
                   std::size_t comparisons, Rng& rng) {
    if (positive_scores.empty() || negative_scores.empty()) {
        throw std::invalid_argument("auc: empty score list");
    }
    std::uint64_t wins = 0, ties = 0;
    for (std::size_t i = 0; i < comparisons; ++i) {
        const double p = positive_scores[rng.next_below(positive_scores.size())];
        const double q = negative_scores[rng.next_below(negative_scores.size())];
        if (p > q) ++wins;
        else if (p == q) ++ties;
    }
    return (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) / static_cast<double>(comparisons);
}

double auc(std::span<const double> positive_scores, std::span<const double> negative_scores,
           std::uint64_t seed) {
    const auto product = static_cast<std::uint64_t>(positive_scores.size()) * negative_scores.size();
    if (product <= 100'000'000ULL) return auc_exhaustive(positive_scores, negative_scores);
    Rng rng(derive_seed(seed, 0xA0C));
    return auc_sampled(positive_scores, negative_scores, 1'000'000, rng);
}

EdgeSplit split_edges(const Graph& g, double removal_ratio, std::uint64_t seed) {
    if (!(removal_ratio > 0.0) || !(removal_ratio < 1.0)) {
        throw std::invalid_argument("split_edges: removal ratio must lie in (0,1)");
    }
    const std::size_t n = g.n_vertices();

    // Edge inventory: unordered pairs (u < v) for undirected graphs, arcs otherwise.
    std::vector<std::tuple<VertexId, VertexId, double>> edges;
    for (VertexId u = 0; u < n; ++u) {
        const auto nbs = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nbs.size(); ++i) {
            if (!g.directed() && nbs[i] < u) continue;
            edges.emplace_back(u, nbs[i], ws[i]);
        }
    }
    const std::size_t m = edges.size();
    if (m == 0) throw std::invalid_argument("split_edges: graph has no edges");
    const auto n_remove = static_cast<std::size_t>(std::ceil(removal_ratio * static_cast<double>(m)));
    if (n_remove >= m) throw std::invalid_argument("split_edges: removal would leave no edges");

    Rng rng(derive_seed(seed, 0x5D17));
    // Fisher-Yates prefix: the first n_remove slots become the test positives.
    for (std::size_t i = 0; i < n_remove; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(m - i));
        std::swap(edges[i], edges[j]);
    }

    EdgeSplit split;
    split.removal_ratio = removal_ratio;
    split.seed = seed;
    split.removed.reserve(n_remove);
    for (std::size_t i = 0; i < n_remove; ++i) {
        split.removed.emplace_back(std::get<0>(edges[i]), std::get<1>(edges[i]));
    }
    std::vector<std::tuple<VertexId, VertexId, double>> retained_edges(edges.begin() + n_remove, edges.end());
    split.retained = Graph::build(n, g.directed(), std::move(retained_edges), g.names());

    // Negatives: distinct non-edges of the original graph, uniform.
    const std::uint64_t total_pairs = g.directed()
                                          ? static_cast<std::uint64_t>(n) * (n - 1)
                                          : static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (total_pairs - m < n_remove) throw std::invalid_argument("split_edges: not enough non-edges to sample");
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(n_remove * 2);
    split.negatives.reserve(n_remove);
    while (split.negatives.size() < n_remove) {
        auto u = static_cast<VertexId>(rng.next_below(n));
        auto v = static_cast<VertexId>(rng.next_below(n));
        if (u == v) continue;
        if (!g.directed() && u > v) std::swap(u, v);
        const std::uint64_t key = static_cast<std::uint64_t>(u) * n + v;
        if (taken.count(key)) continue;
        if (g.has_edge(u, v)) continue;
        taken.insert(key);
        split.negatives.emplace_back(u, v);
    }
    return split;
}

LabeledSplit split_labeled_vertices(const Graph& g, const LabelMap& labels, double train_ratio,
                                    std::uint64_t seed) {
    if (!(train_ratio > 0.0) || !(train_ratio < 1.0)) {
        throw std::invalid_argument("split_labeled_vertices: train ratio must lie in (0,1)");
    }
    std::vector<VertexId> labeled;
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        if (labels.is_labeled(v)) labeled.push_back(v);
    }
    if (labeled.size() < 2) throw std::invalid_argument("split_labeled_vertices: needs at least two labeled vertices");
    Rng rng(derive_seed(seed, 0xC1A5));
    for (std::size_t i = 0; i + 1 < labeled.size(); ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(labeled.size() - i));
        std::swap(labeled[i], labeled[j]);
    }
    auto n_train = static_cast<std::size_t>(std::ceil(train_ratio * static_cast<double>(labeled.size())));
    n_train = std::min(n_train, labeled.size() - 1);
    LabeledSplit split;
    split.train_ratio = train_ratio;
    split.seed = seed;
    split.train.assign(labeled.begin(), labeled.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.assign(labeled.begin() + static_cast<std::ptrdiff_t>(n_train), labeled.end());
    return split;
}

double modified_modularity(const Graph& g, const std::vector<std::vector<VertexId>>& communities) {
    if (g.directed()) throw std::invalid_argument("modified_modularity: undirected graphs only");
    if (communities.empty()) throw std::invalid_argument("modified_modularity: empty community list");
    const std::size_t n = g.n_vertices();
    const double two_m = 2.0 * g.total_edge_weight();
    if (two_m == 0.0) throw std::invalid_argument("modified_modularity: graph has no edges");

    // o_i = number of communities containing i.
    std::vector<double> memberships(n, 0.0);
    for (const auto& c : communities) {
        for (VertexId v : c) {
            if (v >= n) throw std::invalid_argument("modified_modularity: member vertex out of range");
            memberships[v] += 1.0;
        }
    }

    std::vector<char> in_community(n, 0);
    double q = 0.0;
    for (const auto& c : communities) {
        for (VertexId v : c) in_community[v] = 1;
        double adjacency_term = 0.0;
        double degree_term = 0.0;
        for (VertexId v : c) {
            const double ov = memberships[v];
            const auto nbs = g.neighbors(v);
            const auto ws = g.weights(v);
            for (std::size_t i = 0; i < nbs.size(); ++i) {
                if (in_community[nbs[i]]) adjacency_term += ws[i] / (ov * memberships[nbs[i]]);
            }
            degree_term += g.weighted_degree(v) / ov;
        }
        q += adjacency_term - degree_term * degree_term / two_m;
        for (VertexId v : c) in_community[v] = 0;
    }
    return q / two_m;
}

double newman_modularity(const Graph& g, std::span<const int> partition) {
    if (g.directed()) throw std::invalid_argument("newman_modularity: undirected graphs only");
    if (partition.size() != g.n_vertices()) throw std::invalid_argument("newman_modularity: partition size mismatch");
    const double two_m = 2.0 * g.total_edge_weight();
    if (two_m == 0.0) throw std::invalid_argument("newman_modularity: graph has no edges");
    int max_label = 0;
    for (int c : partition) {
        if (c < 0) throw std::invalid_argument("newman_modularity: negative community label");
        max_label = std::max(max_label, c);
    }
    std::vector<double> intra(max_label + 1, 0.0), volume(max_label + 1, 0.0);
    for (VertexId u = 0; u < g.n_vertices(); ++u) {
        const auto nbs = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nbs.size(); ++i) {
            if (partition[u] == partition[nbs[i]]) intra[partition[u]] += ws[i];  // counts each edge twice
        }
        volume[partition[u]] += g.weighted_degree(u);
    }
    double q = 0.0;
    for (std::size_t c = 0; c < intra.size(); ++c) {
        q += intra[c] / two_m - (volume[c] / two_m) * (volume[c] / two_m);
    }
    return q;
}

void write_metrics(std::ostream& out, std::span<const MetricReport> reports) {
    char buf[32];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf), "%.6g", r.value);
        out << r.task << ' ' << r.metric << ' ' << buf << ' ' << r.seed << ' ' << std::hex << r.config_hash
            << std::dec << '\n';
    }
}

Aggregate aggregate(std::span<const double> values) {
    Aggregate agg;
    agg.count = values.size();
    if (values.empty()) return agg;
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    return agg;
}

}  // namespace cnrl
