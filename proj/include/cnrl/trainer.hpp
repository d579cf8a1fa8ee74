#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cnrl/alias.hpp"
#include "cnrl/community.hpp"
#include "cnrl/embedding.hpp"
#include "cnrl/graph.hpp"
#include "cnrl/rng.hpp"
#include "cnrl/walker.hpp"

namespace cnrl {

struct TrainConfig {
    std::uint32_t window = 5;          // context range t on each side
    std::uint32_t negatives = 5;       // noise samples per context pair
    double learning_rate = 0.025;      // decays linearly to learning_rate/1e4
    std::uint32_t epochs = 5;          // joint (or plain) passes over the corpus
    std::uint32_t pretrain_epochs = 1; // skip-gram initialization passes
    std::uint64_t seed = 1;
    AssignMode mode = AssignMode::statistic;
    double noise_exponent = 0.75;      // unigram power for negative sampling
    bool init_context_zero = false;
    // Expert switch: when false, the community-side SGD steps no longer write
    // the shared context table (community vectors still train). Used by the
    // degenerate-K differential check.
    bool community_writes_context = true;

    void validate() const;
};

/// Unigram^exponent noise distribution over corpus token counts.
class NoiseTable {
public:
    NoiseTable(const WalkCorpus& corpus, std::size_t n_vertices, double exponent);

    /// Draws a vertex, re-drawing (bounded) when it equals `exclude`.
    VertexId draw(Rng& rng, VertexId exclude) const;

    const std::vector<double>& probabilities() const { return probabilities_; }

private:
    AliasTable table_;
    std::vector<VertexId> support_;
    std::vector<double> probabilities_;  // per vertex id, sums to 1
};

/// Loss and exact analytic gradients of one negative-sampling step:
///   loss = -log sigmoid(ctx[positive] . center)
///          - sum_neg log sigmoid(-ctx[neg] . center)
/// grad_negatives holds one row per draw, in draw order.
struct NegSampleGrads {
    double loss = 0.0;
    std::vector<double> grad_center;
    std::vector<double> grad_positive;
    std::vector<double> grad_negatives;  // negatives.size() x dim
};
NegSampleGrads negative_sample_loss_and_grads(std::span<const double> center,
                                              std::span<const double> context_table, std::size_t dim,
                                              VertexId positive, std::span<const VertexId> negatives);

/// One SGD step on `center` predicting `positive` against explicit negative
/// draws — the exact update the training loop performs per context pair
/// (same kernel). Context rows stay untouched when write_context is false.
/// Returns the pair loss.
double apply_negative_sampling_step(std::span<double> center, std::span<double> context_table,
                                    std::size_t dim, VertexId positive, std::span<const VertexId> negatives,
                                    double lr, bool write_context = true);

struct TrainStats {
    std::uint64_t tokens_processed = 0;
    std::uint64_t pair_updates = 0;
    double final_learning_rate = 0.0;
    double average_loss = 0.0;  // over sampled pairs (1 in 16 tokens tracked)
};

/// Skip-gram initialization: fresh model, pretrain_epochs plain passes over
/// the corpus training vertex and context vectors; community vectors stay at
/// their random init.
EmbeddingModel init_skipgram(const WalkCorpus& corpus, std::size_t n_vertices, std::size_t k,
                             std::size_t d_vertex, std::size_t d_community, const TrainConfig& config,
                             TrainStats* stats = nullptr, unsigned workers = 1);

/// Plain skip-gram passes (no community term) on an existing model.
void train_skipgram(const WalkCorpus& corpus, EmbeddingModel& model, const TrainConfig& config,
                    TrainStats* stats = nullptr, unsigned workers = 1);

/// Joint training, one token at a time in canonical order: reassign the
/// token's community (statistic- or embedding-based scoring), then for every
/// context position take one SGD step predicting the context vertex from the
/// center vertex and one from the assigned community, both by negative
/// sampling against the shared context table. Requires warm-up to have run.
/// workers > 1 shards sequences across threads (hogwild updates, atomic
/// count tables); sequential mode is bit-reproducible.
void joint_train(const Graph& graph, const WalkCorpus& corpus, CommunityState& state,
                 EmbeddingModel& model, const TrainConfig& config, TrainStats* stats = nullptr,
                 unsigned workers = 1);

/// v-hat = v (+) sum_c Pr(c|v) c.
EnhancedEmbeddings enhanced_embeddings(const EmbeddingModel& model, const CommunityState& state);

}  // namespace cnrl
