#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cnrl/embedding.hpp"
#include "cnrl/rng.hpp"
#include "cnrl/walker.hpp"

namespace cnrl {

enum class AssignMode { statistic, embedding };

/// Per-token community assignments plus the sufficient statistics of the
/// collapsed sampler:
///   vertex_community[v][c]  how often vertex v carries community c (N(v,c))
///   seq_community[s][c]     how many tokens of sequence s carry c (N(c,s))
///   community_total[c]      column sums of vertex_community (N(c))
/// Count invariants (rows sum to token counts, columns to totals) hold after
/// every sweep; rebuild_counts/validate_counts verify them from scratch.
struct CommunityState {
    std::uint32_t k = 0;
    double alpha = 2.0;
    double beta = 0.5;
    std::size_t n = 0;  // vertices

    std::vector<std::vector<std::uint32_t>> z;  // parallel to corpus sequences
    std::vector<std::int64_t> vertex_community;  // n x k
    std::vector<std::int64_t> seq_community;     // |S| x k
    std::vector<std::int64_t> community_total;   // k
    std::vector<std::int64_t> seq_total;         // |S| (current token mass per sequence)
    std::vector<std::int64_t> vertex_tokens;     // n (token count of each vertex, fixed)

    std::uint64_t corpus_fingerprint = 0;

    std::int64_t n_vc(VertexId v, std::uint32_t c) const {
        return vertex_community[static_cast<std::size_t>(v) * k + c];
    }
    std::int64_t n_cs(std::size_t s, std::uint32_t c) const { return seq_community[s * k + c]; }
};

/// Uniform-random assignment for every token, count tables built to match.
CommunityState init_assignments(const WalkCorpus& corpus, std::uint32_t k, std::uint64_t seed);

/// Smoothed community-vertex distribution, (N(v,c)+beta)/(N(c)+|V|beta).
double prob_v_given_c(const CommunityState& state, VertexId v, std::uint32_t c);

/// Smoothed sequence-community distribution, (N(c,s)+alpha)/(sum_c N(c,s)+K alpha).
double prob_c_given_s_stat(const CommunityState& state, std::size_t s, std::uint32_t c);

/// Embedding-based sequence-community distribution: softmax over communities
/// of dot(community vector, mean vertex vector of the sequence).
std::vector<double> prob_c_given_s_emb(const EmbeddingModel& model, std::span<const VertexId> sequence);

/// Embedding-based Pr(v|c): softmax over all vertices of dot(vertex, community).
/// Degrades assignment quality; kept behind an expert flag for ablations.
double prob_v_given_c_emb(const EmbeddingModel& model, VertexId v, std::uint32_t c);

struct SweepOptions {
    AssignMode mode = AssignMode::statistic;
    const EmbeddingModel* model = nullptr;      // required in embedding mode
    bool embedding_vertex_term = false;         // expert: replace the count-based Pr(v|c)
};

/// Reassigns one token: decrement its counts, score every community by
/// Pr(v|c)*Pr(c|s) without the current assignment, sample, increment.
/// `seq_probs` supplies the embedding-based Pr(c|s) (null -> statistic mode);
/// `vertex_scores` supplies an expert Pr(v|c) override indexed [v*k+c]
/// (null -> count-based). Count updates go through relaxed atomics so the
/// optional sharded trainer can share the tables.
std::uint32_t reassign_token(CommunityState& state, std::size_t s, std::size_t i, VertexId v,
                             const double* seq_probs, const double* vertex_scores, Rng& rng,
                             std::vector<double>& scratch);

/// One pass over every token in canonical order.
void gibbs_sweep(CommunityState& state, const WalkCorpus& corpus, const SweepOptions& options, Rng& rng);

/// L statistic-mode sweeps (the warm-up loop before joint training).
void warmup(CommunityState& state, const WalkCorpus& corpus, std::uint32_t loops, Rng& rng);

/// Pr(c|v): alpha-smoothed row normalization of the vertex-community counts.
std::vector<double> community_distribution(const CommunityState& state, VertexId v);

/// Communities with Pr(c|v) > tau. May be empty. tau must lie in (0,1).
std::vector<std::uint32_t> select_communities(std::span<const double> distribution, double tau);

/// Vertices with Pr(v|c) > eta, ordered by descending probability.
std::vector<VertexId> representative_vertices(const CommunityState& state, std::uint32_t c, double eta);

/// Rebuilds all count tables from the raw assignments.
void rebuild_counts(CommunityState& state, const WalkCorpus& corpus);

/// Full recount check; throws std::logic_error on any mismatch.
void validate_counts(const CommunityState& state, const WalkCorpus& corpus);

/// Checkpoint: header (K, alpha, beta, corpus fingerprint) plus assignments.
/// Counts are rebuilt on load, never trusted from disk.
void save_state(std::ostream& out, const CommunityState& state);
CommunityState load_state(std::istream& in, const WalkCorpus& corpus);

}  // namespace cnrl
