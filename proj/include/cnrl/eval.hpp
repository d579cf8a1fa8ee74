#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnrl/graph.hpp"
#include "cnrl/rng.hpp"

namespace cnrl {

// Neighborhood-overlap link-prediction heuristics. All four are symmetric on
// undirected graphs; 0/0 conventions score 0 (non-links are not rewarded).
double cn_score(const Graph& g, VertexId i, VertexId j);       // |N_i ∩ N_j|
double salton_score(const Graph& g, VertexId i, VertexId j);   // CN / sqrt(|N_i||N_j|)
double jaccard_score(const Graph& g, VertexId i, VertexId j);  // CN / |N_i ∪ N_j|
double ra_score(const Graph& g, VertexId i, VertexId j);       // sum 1/|N_k| over common k

/// Cosine similarity; 0 when either vector is all-zero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// AUC = (n1 + 0.5 n2) / n over positive/negative score comparisons, where
/// n1 counts positives scoring strictly higher and n2 counts ties.
/// Exhaustive mode compares all |pos| x |neg| pairs.
double auc_exhaustive(std::span<const double> positive_scores, std::span<const double> negative_scores);
double auc_sampled(std::span<const double> positive_scores, std::span<const double> negative_scores,
                   std::size_t comparisons, Rng& rng);
/// Exhaustive when |pos|*|neg| <= 1e8, otherwise sampled with 1e6 draws.
double auc(std::span<const double> positive_scores, std::span<const double> negative_scores,
           std::uint64_t seed = 1);

struct EdgeSplit {
    Graph retained;
    std::vector<std::pair<VertexId, VertexId>> removed;    // test positives
    std::vector<std::pair<VertexId, VertexId>> negatives;  // sampled non-edges of the original graph
    double removal_ratio = 0.0;
    std::uint64_t seed = 0;
};

/// Removes ceil(ratio*|E|) edges uniformly and samples an equal number of
/// distinct non-edges of the original graph. The retained graph keeps all
/// vertices and names.
EdgeSplit split_edges(const Graph& g, double removal_ratio, std::uint64_t seed);

struct LabeledSplit {
    std::vector<VertexId> train;
    std::vector<VertexId> test;
    double train_ratio = 0.0;
    std::uint64_t seed = 0;
};

/// Uniform split of the labeled vertices into train/test.
LabeledSplit split_labeled_vertices(const Graph& g, const LabelMap& labels, double train_ratio,
                                    std::uint64_t seed);

/// Overlapping-community quality:
///   Q = (1/2m) sum_c sum_{i,j in c} (1/(o_i o_j)) [A_ij - k_i k_j / 2m]
/// where o_i is the number of communities containing i (membership
/// down-weighting) and the inner sum runs over ordered pairs including i=j.
/// Undirected graphs only; throws on an empty community list.
double modified_modularity(const Graph& g, const std::vector<std::vector<VertexId>>& communities);

/// Standard Newman modularity of a hard partition (labels per vertex).
double newman_modularity(const Graph& g, std::span<const int> partition);

struct MetricReport {
    std::string task;
    std::string metric;
    double value = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
};

/// One record per line: `task metric value seed config_hash`.
void write_metrics(std::ostream& out, std::span<const MetricReport> reports);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
};
Aggregate aggregate(std::span<const double> values);

}  // namespace cnrl
