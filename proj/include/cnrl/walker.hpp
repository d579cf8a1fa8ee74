#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cnrl/graph.hpp"

namespace cnrl {

enum class WalkStrategy { uniform, biased };

struct WalkConfig {
    std::uint32_t walks_per_vertex = 10;
    std::uint32_t walk_length = 40;
    WalkStrategy strategy = WalkStrategy::uniform;
    double p = 1.0;  // return parameter (biased only)
    double q = 1.0;  // in-out parameter (biased only)
    std::uint64_t seed = 1;

    void validate() const;
};

/// The random-walk corpus: the "documents" the community sampler and the
/// skip-gram trainer consume. Sequences are stored in canonical order
/// (walk index major, start vertex minor), independent of worker count.
struct WalkCorpus {
    std::vector<std::vector<VertexId>> sequences;
    std::size_t n_vertices = 0;
    WalkConfig config;
    std::uint64_t graph_fingerprint = 0;

    std::size_t total_tokens() const;
    std::uint64_t fingerprint() const;

    /// Header line with n, w, length, strategy and seed, then one
    /// space-separated sequence of internal ids per line.
    void save(std::ostream& out) const;
    static WalkCorpus load(std::istream& in);
};

/// Generates walks_per_vertex truncated random walks from every vertex.
/// `uniform` moves to a neighbor with probability proportional to edge
/// weight. `biased` performs second-order transitions: the weight of
/// candidate x after the step (t -> v) is scaled by 1/p if x == t, by 1 if
/// x is adjacent to t, and by 1/q otherwise (the first step has no
/// predecessor and is weight-proportional). Vertices without out-neighbors
/// emit length-1 sequences. Output is deterministic for a given seed; each
/// walk owns an RNG stream derived from (seed, start vertex, walk index),
/// so generation parallelizes without changing the result.
WalkCorpus generate_walks(const Graph& graph, const WalkConfig& config, unsigned workers = 1);

}  // namespace cnrl
