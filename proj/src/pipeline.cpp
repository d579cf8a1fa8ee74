#include "cnrl/pipeline.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "cnrl/rng.hpp"

namespace cnrl {

WalkConfig RunConfig::walk_config() const {
    WalkConfig wc;
    wc.walks_per_vertex = walks_per_vertex;
    wc.walk_length = walk_length;
    wc.strategy = strategy;
    wc.p = p;
    wc.q = q;
    wc.seed = derive_seed(seed, 0x57A1);
    return wc;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig tc;
    tc.window = window;
    tc.negatives = negatives;
    tc.learning_rate = learning_rate;
    tc.epochs = epochs;
    tc.pretrain_epochs = pretrain_epochs;
    tc.seed = derive_seed(seed, 0x57A2);
    tc.mode = mode;
    tc.init_context_zero = init_context_zero;
    tc.community_writes_context = community_writes_context;
    return tc;
}

std::string RunConfig::serialize() const {
    char buf[64];
    std::ostringstream out;
    auto put = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    auto put_real = [&](const char* key, double value) {
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        put(key, buf);
    };
    put("strategy", strategy == WalkStrategy::biased ? "biased" : "uniform");
    put_real("p", p);
    put_real("q", q);
    put("walks", std::to_string(walks_per_vertex));
    put("walk-length", std::to_string(walk_length));
    put("communities", std::to_string(communities));
    put_real("alpha", alpha);
    put_real("beta", beta);
    put("warmup", std::to_string(warmup_loops));
    put("mode", mode == AssignMode::embedding ? "e" : "s");
    put("dim-vertex", std::to_string(d_vertex));
    put("dim-community", std::to_string(d_community));
    put("window", std::to_string(window));
    put("negatives", std::to_string(negatives));
    put_real("lr", learning_rate);
    put("epochs", std::to_string(epochs));
    put("pretrain-epochs", std::to_string(pretrain_epochs));
    put("init-context-zero", init_context_zero ? "true" : "false");
    put("community-writes-context", community_writes_context ? "true" : "false");
    put_real("tau", tau);
    put_real("eta", eta);
    put_real("removal-ratio", removal_ratio);
    put_real("train-ratio", train_ratio);
    put_real("lambda", lambda);
    put("seed", std::to_string(seed));
    return out.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(serialize()); }

TrainArtifacts run_training(const Graph& graph, const RunConfig& config) {
    return run_training(graph, config, generate_walks(graph, config.walk_config(), config.workers));
}

TrainArtifacts run_training(const Graph& graph, const RunConfig& config, WalkCorpus corpus) {
    if (config.communities < 1) throw std::invalid_argument("run_training: K must be >= 1");
    if (corpus.n_vertices != graph.n_vertices()) {
        throw std::invalid_argument("run_training: corpus was generated for a different vertex count");
    }
    TrainArtifacts art;
    art.corpus = std::move(corpus);
    const TrainConfig tc = config.train_config();
    art.model = init_skipgram(art.corpus, graph.n_vertices(), config.communities, config.d_vertex,
                              config.d_community, tc, nullptr, config.workers);
    art.state = init_assignments(art.corpus, config.communities, derive_seed(config.seed, 0x57A3));
    art.state.alpha = config.alpha;
    art.state.beta = config.beta;
    Rng warmup_rng(derive_seed(config.seed, 0x57A4));
    warmup(art.state, art.corpus, config.warmup_loops, warmup_rng);
    joint_train(graph, art.corpus, art.state, art.model, tc, &art.stats, config.workers);
    art.enhanced = enhanced_embeddings(art.model, art.state);
    return art;
}

EmbeddingModel run_plain(const Graph& graph, const RunConfig& config, const WalkCorpus* corpus,
                         TrainStats* stats) {
    WalkCorpus local;
    if (!corpus) {
        local = generate_walks(graph, config.walk_config(), config.workers);
        corpus = &local;
    }
    const TrainConfig tc = config.train_config();
    EmbeddingModel model = init_skipgram(*corpus, graph.n_vertices(), 0, config.d_vertex, config.d_community,
                                         tc, nullptr, config.workers);
    train_skipgram(*corpus, model, tc, stats, config.workers);
    return model;
}

}  // namespace cnrl
