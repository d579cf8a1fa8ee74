#include "cnrl/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace cnrl {

void TrainConfig::validate() const {
    if (window < 1) throw std::invalid_argument("TrainConfig: window must be >= 1");
    if (negatives < 1) throw std::invalid_argument("TrainConfig: negatives must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning rate must be positive");
}

NoiseTable::NoiseTable(const WalkCorpus& corpus, std::size_t n_vertices, double exponent) {
    std::vector<std::int64_t> counts(n_vertices, 0);
    for (const auto& seq : corpus.sequences) {
        for (VertexId v : seq) ++counts[v];
    }
    std::vector<double> weights;
    probabilities_.assign(n_vertices, 0.0);
    double total = 0.0;
    for (std::size_t v = 0; v < n_vertices; ++v) {
        if (counts[v] > 0) {
            const double w = std::pow(static_cast<double>(counts[v]), exponent);
            support_.push_back(static_cast<VertexId>(v));
            weights.push_back(w);
            total += w;
        }
    }
    if (support_.empty()) throw std::invalid_argument("NoiseTable: corpus has no tokens");
    for (std::size_t i = 0; i < support_.size(); ++i) probabilities_[support_[i]] = weights[i] / total;
    table_ = AliasTable(weights);
}

VertexId NoiseTable::draw(Rng& rng, VertexId exclude) const {
    VertexId pick = exclude;
    for (int attempt = 0; attempt < 100; ++attempt) {
        pick = support_[table_.sample(rng)];
        if (pick != exclude) return pick;
    }
    return pick;  // single-support corner: accept the collision
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// One fused negative-sampling step for the pair (center -> target): the
/// positive row and each drawn negative row of the context table receive
/// their gradient immediately; the center gradient accumulates and lands
/// after all samples (word2vec discipline). `draw` supplies negative ids.
/// Returns the pair loss when tracking, else 0.
template <typename DrawFn>
inline double ns_step(double* center, std::size_t dim, VertexId target, double* context_table,
                      DrawFn&& draw, std::uint32_t negatives, double lr, bool write_context, double* acc,
                      bool track_loss) {
    std::fill(acc, acc + dim, 0.0);
    double loss = 0.0;
    for (std::uint32_t s = 0; s <= negatives; ++s) {
        VertexId t;
        double label;
        if (s == 0) {
            t = target;
            label = 1.0;
        } else {
            t = draw(s - 1);
            label = 0.0;
        }
        double* row = context_table + static_cast<std::size_t>(t) * dim;
        double dot = 0.0;
        for (std::size_t j = 0; j < dim; ++j) dot += center[j] * row[j];
        const double sig = sigmoid(dot);
        if (track_loss) {
            const double p = label == 1.0 ? sig : 1.0 - sig;
            loss -= std::log(std::max(p, 1e-12));
        }
        const double g = (label - sig) * lr;
        for (std::size_t j = 0; j < dim; ++j) acc[j] += g * row[j];
        if (write_context) {
            for (std::size_t j = 0; j < dim; ++j) row[j] += g * center[j];
        }
    }
    for (std::size_t j = 0; j < dim; ++j) center[j] += acc[j];
    return loss;
}

struct PassContext {
    const WalkCorpus& corpus;
    EmbeddingModel& model;
    const TrainConfig& cfg;
    const NoiseTable& noise;
    CommunityState* state;  // null -> plain skip-gram pass
    std::uint32_t epochs;
    std::uint64_t phase;  // 0 pretrain, 1 main; keeps stream derivation symmetric
    unsigned workers;
};

void run_pass(const PassContext& ctx, TrainStats* stats) {
    const std::size_t dim = ctx.model.d_vertex;
    const std::size_t total_tokens = ctx.corpus.total_tokens();
    const std::uint64_t scheduled = static_cast<std::uint64_t>(ctx.epochs) * total_tokens;
    if (scheduled == 0) return;
    const double lr0 = ctx.cfg.learning_rate;
    const std::uint32_t window = ctx.cfg.window;

    std::atomic<std::uint64_t> processed_global{0};
    std::atomic<std::uint64_t> pair_updates{0};
    std::atomic<double> loss_sum{0.0};
    std::atomic<std::uint64_t> loss_pairs{0};

    auto worker_fn = [&](std::size_t seq_begin, std::size_t seq_end, unsigned worker_id) {
        Rng rng_vertex(derive_seed(derive_seed(ctx.cfg.seed, 0x21, ctx.phase), worker_id));
        Rng rng_community(derive_seed(derive_seed(ctx.cfg.seed, 0x22, ctx.phase), worker_id));
        Rng rng_gibbs(derive_seed(derive_seed(ctx.cfg.seed, 0x23, ctx.phase), worker_id));
        std::vector<double> acc(dim);
        std::vector<double> scratch;
        std::vector<double> seq_probs;
        double local_loss = 0.0;
        std::uint64_t local_loss_pairs = 0;
        std::uint64_t local_pairs = 0;
        std::uint64_t token_counter = 0;

        for (std::uint32_t epoch = 0; epoch < ctx.epochs; ++epoch) {
            for (std::size_t s = seq_begin; s < seq_end; ++s) {
                const auto& seq = ctx.corpus.sequences[s];
                if (seq.empty()) continue;
                if (ctx.state && ctx.cfg.mode == AssignMode::embedding) {
                    seq_probs = prob_c_given_s_emb(ctx.model, seq);
                }
                const auto len = seq.size();
                for (std::size_t i = 0; i < len; ++i) {
                    const std::uint64_t done = processed_global.fetch_add(1, std::memory_order_relaxed);
                    const double progress = static_cast<double>(done) / static_cast<double>(scheduled);
                    const double lr = lr0 * std::max(1.0 - progress, 1e-4);
                    const bool track = (token_counter++ & 15u) == 0;

                    std::uint32_t community = 0;
                    if (ctx.state) {
                        community = reassign_token(*ctx.state, s, i, seq[i],
                                                   seq_probs.empty() ? nullptr : seq_probs.data(), nullptr,
                                                   rng_gibbs, scratch);
                    }
                    double* center = ctx.model.vertex(seq[i]);
                    double* community_vec = ctx.state ? ctx.model.community(community) : nullptr;
                    const std::size_t lo = i >= window ? i - window : 0;
                    const std::size_t hi = std::min(len - 1, i + window);
                    for (std::size_t j = lo; j <= hi; ++j) {
                        if (j == i) continue;
                        const VertexId target = seq[j];
                        auto draw_vertex = [&](std::uint32_t) { return ctx.noise.draw(rng_vertex, target); };
                        double pair_loss =
                            ns_step(center, dim, target, ctx.model.context_vecs.data(), draw_vertex,
                                    ctx.cfg.negatives, lr, /*write_context=*/true, acc.data(), track);
                        ++local_pairs;
                        if (ctx.state) {
                            auto draw_community = [&](std::uint32_t) { return ctx.noise.draw(rng_community, target); };
                            pair_loss += ns_step(community_vec, dim, target, ctx.model.context_vecs.data(),
                                                 draw_community, ctx.cfg.negatives, lr,
                                                 ctx.cfg.community_writes_context, acc.data(), track);
                            ++local_pairs;
                        }
                        if (track) {
                            local_loss += pair_loss;
                            local_loss_pairs += ctx.state ? 2 : 1;
                        }
                    }
                }
            }
        }
        pair_updates.fetch_add(local_pairs, std::memory_order_relaxed);
        loss_pairs.fetch_add(local_loss_pairs, std::memory_order_relaxed);
        double expected = loss_sum.load(std::memory_order_relaxed);
        while (!loss_sum.compare_exchange_weak(expected, expected + local_loss, std::memory_order_relaxed)) {
        }
    };

    const std::size_t n_seqs = ctx.corpus.sequences.size();
    if (ctx.workers <= 1 || n_seqs < 2 * ctx.workers) {
        worker_fn(0, n_seqs, 0);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_seqs + ctx.workers - 1) / ctx.workers;
        for (unsigned w = 0; w < ctx.workers; ++w) {
            const std::size_t begin = std::min<std::size_t>(w * chunk, n_seqs);
            const std::size_t end = std::min<std::size_t>(begin + chunk, n_seqs);
            if (begin < end) pool.emplace_back(worker_fn, begin, end, w);
        }
        for (auto& t : pool) t.join();
    }

    if (stats) {
        stats->tokens_processed += processed_global.load();
        stats->pair_updates += pair_updates.load();
        const double done = static_cast<double>(processed_global.load()) / static_cast<double>(scheduled);
        stats->final_learning_rate = lr0 * std::max(1.0 - done, 1e-4);
        const auto lp = loss_pairs.load();
        stats->average_loss = lp ? loss_sum.load() / static_cast<double>(lp) : 0.0;
    }
}

}  // namespace

double apply_negative_sampling_step(std::span<double> center, std::span<double> context_table,
                                    std::size_t dim, VertexId positive, std::span<const VertexId> negatives,
                                    double lr, bool write_context) {
    if (center.size() != dim || context_table.size() % dim != 0) {
        throw std::invalid_argument("apply_negative_sampling_step: shape mismatch");
    }
    std::vector<double> acc(dim);
    auto draw = [&](std::uint32_t idx) { return negatives[idx]; };
    return ns_step(center.data(), dim, positive, context_table.data(), draw,
                   static_cast<std::uint32_t>(negatives.size()), lr, write_context, acc.data(), true);
}

NegSampleGrads negative_sample_loss_and_grads(std::span<const double> center,
                                              std::span<const double> context_table, std::size_t dim,
                                              VertexId positive, std::span<const VertexId> negatives) {
    if (dim == 0 || center.size() != dim || context_table.size() % dim != 0) {
        throw std::invalid_argument("negative_sample_loss_and_grads: shape mismatch");
    }
    NegSampleGrads out;
    out.grad_center.assign(dim, 0.0);
    out.grad_positive.assign(dim, 0.0);
    out.grad_negatives.assign(negatives.size() * dim, 0.0);

    const double* pos_row = context_table.data() + static_cast<std::size_t>(positive) * dim;
    double dot = 0.0;
    for (std::size_t j = 0; j < dim; ++j) dot += center[j] * pos_row[j];
    const double sig_pos = sigmoid(dot);
    out.loss -= std::log(std::max(sig_pos, 1e-300));
    for (std::size_t j = 0; j < dim; ++j) {
        out.grad_center[j] += (sig_pos - 1.0) * pos_row[j];
        out.grad_positive[j] = (sig_pos - 1.0) * center[j];
    }
    for (std::size_t m = 0; m < negatives.size(); ++m) {
        const double* row = context_table.data() + static_cast<std::size_t>(negatives[m]) * dim;
        double ndot = 0.0;
        for (std::size_t j = 0; j < dim; ++j) ndot += center[j] * row[j];
        const double sig = sigmoid(ndot);
        out.loss -= std::log(std::max(1.0 - sig, 1e-300));
        for (std::size_t j = 0; j < dim; ++j) {
            out.grad_center[j] += sig * row[j];
            out.grad_negatives[m * dim + j] = sig * center[j];
        }
    }
    return out;
}

EmbeddingModel init_skipgram(const WalkCorpus& corpus, std::size_t n_vertices, std::size_t k,
                             std::size_t d_vertex, std::size_t d_community, const TrainConfig& config,
                             TrainStats* stats, unsigned workers) {
    config.validate();
    if (corpus.sequences.empty()) throw std::invalid_argument("init_skipgram: empty corpus");
    EmbeddingModel model = init_model(n_vertices, k, d_vertex, d_community, config.seed, config.init_context_zero);
    if (config.pretrain_epochs > 0) {
        NoiseTable noise(corpus, n_vertices, config.noise_exponent);
        PassContext ctx{corpus, model, config, noise, nullptr, config.pretrain_epochs, /*phase=*/0, workers};
        run_pass(ctx, stats);
    }
    return model;
}

void train_skipgram(const WalkCorpus& corpus, EmbeddingModel& model, const TrainConfig& config,
                    TrainStats* stats, unsigned workers) {
    config.validate();
    if (model.n != corpus.n_vertices) throw std::invalid_argument("train_skipgram: model/corpus shape mismatch");
    NoiseTable noise(corpus, model.n, config.noise_exponent);
    PassContext ctx{corpus, model, config, noise, nullptr, config.epochs, /*phase=*/1, workers};
    run_pass(ctx, stats);
}

void joint_train(const Graph& graph, const WalkCorpus& corpus, CommunityState& state,
                 EmbeddingModel& model, const TrainConfig& config, TrainStats* stats, unsigned workers) {
    config.validate();
    if (model.n != graph.n_vertices() || corpus.n_vertices != graph.n_vertices()) {
        throw std::invalid_argument("joint_train: graph/corpus/model vertex counts differ");
    }
    if (state.k != model.k || state.n != model.n) {
        throw std::invalid_argument("joint_train: community state and model shapes differ");
    }
    if (model.d_community != model.d_vertex) {
        throw std::invalid_argument("joint_train: community and vertex dimensions must match "
                                    "(community vectors predict context vectors)");
    }
    if (state.z.size() != corpus.sequences.size()) {
        throw std::invalid_argument("joint_train: state does not match corpus");
    }
    NoiseTable noise(corpus, model.n, config.noise_exponent);
    PassContext ctx{corpus, model, config, noise, &state, config.epochs, /*phase=*/1, workers};
    run_pass(ctx, stats);
}

EnhancedEmbeddings enhanced_embeddings(const EmbeddingModel& model, const CommunityState& state) {
    if (state.n != model.n || state.k != model.k) {
        throw std::invalid_argument("enhanced_embeddings: model/state shape mismatch");
    }
    EnhancedEmbeddings out;
    out.n = model.n;
    out.dim = model.d_vertex + model.d_community;
    out.data.assign(out.n * out.dim, 0.0);
    for (std::size_t v = 0; v < model.n; ++v) {
        double* row = out.data.data() + v * out.dim;
        const double* vv = model.vertex(static_cast<VertexId>(v));
        std::copy(vv, vv + model.d_vertex, row);
        const auto dist = community_distribution(state, static_cast<VertexId>(v));
        double* cv_part = row + model.d_vertex;
        for (std::size_t c = 0; c < model.k; ++c) {
            const double* cv = model.community(c);
            for (std::size_t j = 0; j < model.d_community; ++j) cv_part[j] += dist[c] * cv[j];
        }
    }
    return out;
}

}  // namespace cnrl
