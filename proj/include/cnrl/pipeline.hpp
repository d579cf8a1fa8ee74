#pragma once

#include <cstdint>
#include <string>

#include "cnrl/community.hpp"
#include "cnrl/embedding.hpp"
#include "cnrl/graph.hpp"
#include "cnrl/trainer.hpp"
#include "cnrl/walker.hpp"

namespace cnrl {

/// Every tunable of a training run. A single master seed drives derived
/// streams for walks, initialization, SGD noise and the Gibbs sampler, so a
/// run is fully reproducible from (input, config).
struct RunConfig {
    // walks
    std::uint32_t walks_per_vertex = 10;
    std::uint32_t walk_length = 40;
    WalkStrategy strategy = WalkStrategy::uniform;
    double p = 1.0;
    double q = 1.0;

    // communities
    std::uint32_t communities = 20;  // K
    double alpha = 2.0;
    double beta = 0.5;
    std::uint32_t warmup_loops = 10;  // L
    AssignMode mode = AssignMode::statistic;

    // embeddings
    std::size_t d_vertex = 64;
    std::size_t d_community = 64;
    std::uint32_t window = 5;
    std::uint32_t negatives = 5;
    double learning_rate = 0.025;
    std::uint32_t epochs = 5;
    std::uint32_t pretrain_epochs = 1;
    bool init_context_zero = false;
    bool community_writes_context = true;

    // evaluation
    double tau = 0.1;
    double eta = 0.005;
    double removal_ratio = 0.05;
    double train_ratio = 0.5;
    double lambda = 1.0;

    std::uint64_t seed = 1;
    unsigned workers = 1;

    WalkConfig walk_config() const;
    TrainConfig train_config() const;

    /// Canonical `key = value` serialization (config-file format).
    std::string serialize() const;
    std::uint64_t hash() const;
};

struct TrainArtifacts {
    WalkCorpus corpus;
    EmbeddingModel model;
    CommunityState state;
    EnhancedEmbeddings enhanced;
    TrainStats stats;
};

/// The end-to-end training procedure: walks, skip-gram initialization,
/// random assignment, L warm-up sweeps, joint training, enhanced embeddings.
TrainArtifacts run_training(const Graph& graph, const RunConfig& config);

/// Same procedure on a pre-generated corpus (must match the graph).
TrainArtifacts run_training(const Graph& graph, const RunConfig& config, WalkCorpus corpus);

/// Community-term-disabled twin: same walks (pass the corpus to reuse it),
/// plain skip-gram training only. Used for DeepWalk-style baselines.
EmbeddingModel run_plain(const Graph& graph, const RunConfig& config,
                         const WalkCorpus* corpus = nullptr, TrainStats* stats = nullptr);

}  // namespace cnrl
