#include "cnrl/community.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cnrl {

namespace {

// All count mutations go through relaxed atomics so the sharded trainer can
// share the tables; sequential sweeps pay nothing measurable for it.
inline void count_add(std::int64_t& cell, std::int64_t delta) {
    std::atomic_ref<std::int64_t>(cell).fetch_add(delta, std::memory_order_relaxed);
}

void apply_token(CommunityState& st, std::size_t s, VertexId v, std::uint32_t c, std::int64_t delta) {
    count_add(st.vertex_community[static_cast<std::size_t>(v) * st.k + c], delta);
    count_add(st.seq_community[s * st.k + c], delta);
    count_add(st.community_total[c], delta);
    count_add(st.seq_total[s], delta);
}

}  // namespace

CommunityState init_assignments(const WalkCorpus& corpus, std::uint32_t k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("init_assignments: K must be >= 1");
    CommunityState st;
    st.k = k;
    st.n = corpus.n_vertices;
    st.corpus_fingerprint = corpus.fingerprint();
    st.z.resize(corpus.sequences.size());
    Rng rng(derive_seed(seed, 0xA551));
    for (std::size_t s = 0; s < corpus.sequences.size(); ++s) {
        st.z[s].resize(corpus.sequences[s].size());
        for (auto& c : st.z[s]) c = static_cast<std::uint32_t>(rng.next_below(k));
    }
    rebuild_counts(st, corpus);
    return st;
}

void rebuild_counts(CommunityState& st, const WalkCorpus& corpus) {
    if (st.z.size() != corpus.sequences.size()) throw std::logic_error("rebuild_counts: corpus shape mismatch");
    st.vertex_community.assign(st.n * st.k, 0);
    st.seq_community.assign(st.z.size() * st.k, 0);
    st.community_total.assign(st.k, 0);
    st.seq_total.assign(st.z.size(), 0);
    st.vertex_tokens.assign(st.n, 0);
    for (std::size_t s = 0; s < st.z.size(); ++s) {
        if (st.z[s].size() != corpus.sequences[s].size()) {
            throw std::logic_error("rebuild_counts: sequence length mismatch");
        }
        for (std::size_t i = 0; i < st.z[s].size(); ++i) {
            const VertexId v = corpus.sequences[s][i];
            const std::uint32_t c = st.z[s][i];
            if (c >= st.k) throw std::logic_error("rebuild_counts: assignment out of range");
            st.vertex_community[static_cast<std::size_t>(v) * st.k + c] += 1;
            st.seq_community[s * st.k + c] += 1;
            st.community_total[c] += 1;
            st.seq_total[s] += 1;
            st.vertex_tokens[v] += 1;
        }
    }
}

void validate_counts(const CommunityState& st, const WalkCorpus& corpus) {
    CommunityState fresh;
    fresh.k = st.k;
    fresh.n = st.n;
    fresh.z = st.z;
    rebuild_counts(fresh, corpus);
    if (fresh.vertex_community != st.vertex_community) throw std::logic_error("counts: vertex-community mismatch");
    if (fresh.seq_community != st.seq_community) throw std::logic_error("counts: sequence-community mismatch");
    if (fresh.community_total != st.community_total) throw std::logic_error("counts: community total mismatch");
    if (fresh.seq_total != st.seq_total) throw std::logic_error("counts: sequence total mismatch");
    if (fresh.vertex_tokens != st.vertex_tokens) throw std::logic_error("counts: vertex token mismatch");
}

double prob_v_given_c(const CommunityState& st, VertexId v, std::uint32_t c) {
    const double num = static_cast<double>(st.n_vc(v, c)) + st.beta;
    const double den = static_cast<double>(st.community_total[c]) + static_cast<double>(st.n) * st.beta;
    return num / den;
}

double prob_c_given_s_stat(const CommunityState& st, std::size_t s, std::uint32_t c) {
    const double num = static_cast<double>(st.n_cs(s, c)) + st.alpha;
    const double den = static_cast<double>(st.seq_total[s]) + static_cast<double>(st.k) * st.alpha;
    return num / den;
}

std::vector<double> prob_c_given_s_emb(const EmbeddingModel& model, std::span<const VertexId> sequence) {
    if (sequence.empty()) throw std::invalid_argument("prob_c_given_s_emb: empty sequence");
    if (model.d_community != model.d_vertex) {
        throw std::invalid_argument("prob_c_given_s_emb: community/vertex dimension mismatch");
    }
    const std::size_t d = model.d_vertex;
    std::vector<double> mean(d, 0.0);
    for (VertexId v : sequence) {
        const double* row = model.vertex(v);
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    }
    const double inv = 1.0 / static_cast<double>(sequence.size());
    for (double& m : mean) m *= inv;

    std::vector<double> probs(model.k);
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.k; ++c) {
        const double* cv = model.community(c);
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) dot += cv[j] * mean[j];
        probs[c] = dot;
        max_logit = std::max(max_logit, dot);
    }
    double total = 0.0;
    for (double& p : probs) {
        p = std::exp(p - max_logit);
        total += p;
    }
    for (double& p : probs) p /= total;
    return probs;
}

double prob_v_given_c_emb(const EmbeddingModel& model, VertexId v, std::uint32_t c) {
    const std::size_t d = model.d_vertex;
    if (model.d_community != d) throw std::invalid_argument("prob_v_given_c_emb: dimension mismatch");
    const double* cv = model.community(c);
    double max_logit = -std::numeric_limits<double>::infinity();
    std::vector<double> logits(model.n);
    for (std::size_t u = 0; u < model.n; ++u) {
        const double* row = model.vertex(static_cast<VertexId>(u));
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) dot += row[j] * cv[j];
        logits[u] = dot;
        max_logit = std::max(max_logit, dot);
    }
    double total = 0.0;
    for (double& x : logits) {
        x = std::exp(x - max_logit);
        total += x;
    }
    return logits[v] / total;
}

std::uint32_t reassign_token(CommunityState& st, std::size_t s, std::size_t i, VertexId v,
                             const double* seq_probs, const double* vertex_scores, Rng& rng,
                             std::vector<double>& scratch) {
    const std::uint32_t k = st.k;
    const std::uint32_t old = st.z[s][i];
    apply_token(st, s, v, old, -1);

    scratch.resize(k);
    double total = 0.0;
    const double n_beta = static_cast<double>(st.n) * st.beta;
    const double seq_den = static_cast<double>(st.seq_total[s]) + static_cast<double>(k) * st.alpha;
    const std::int64_t* vc_row = st.vertex_community.data() + static_cast<std::size_t>(v) * k;
    const std::int64_t* cs_row = st.seq_community.data() + s * k;
    for (std::uint32_t c = 0; c < k; ++c) {
        const double pvc = vertex_scores
                               ? vertex_scores[static_cast<std::size_t>(v) * k + c]
                               : (static_cast<double>(vc_row[c]) + st.beta) /
                                     (static_cast<double>(st.community_total[c]) + n_beta);
        const double pcs = seq_probs ? seq_probs[c]
                                     : (static_cast<double>(cs_row[c]) + st.alpha) / seq_den;
        scratch[c] = pvc * pcs;
        total += scratch[c];
    }
    const double target = rng.next_double() * total;
    double acc = 0.0;
    std::uint32_t pick = k - 1;
    for (std::uint32_t c = 0; c < k; ++c) {
        acc += scratch[c];
        if (target < acc) {
            pick = c;
            break;
        }
    }
    st.z[s][i] = pick;
    apply_token(st, s, v, pick, +1);
    return pick;
}

namespace {

// Expert ablation path: per-community softmax tables over all vertices,
// recomputed once per sweep (embeddings are fixed within a warm-up sweep).
std::vector<double> embedding_vertex_scores(const EmbeddingModel& model) {
    const std::size_t d = model.d_vertex;
    std::vector<double> scores(model.n * model.k);
    for (std::size_t c = 0; c < model.k; ++c) {
        const double* cv = model.community(c);
        double max_logit = -std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < model.n; ++v) {
            const double* row = model.vertex(static_cast<VertexId>(v));
            double dot = 0.0;
            for (std::size_t j = 0; j < d; ++j) dot += row[j] * cv[j];
            scores[v * model.k + c] = dot;
            max_logit = std::max(max_logit, dot);
        }
        double total = 0.0;
        for (std::size_t v = 0; v < model.n; ++v) {
            double& x = scores[v * model.k + c];
            x = std::exp(x - max_logit);
            total += x;
        }
        for (std::size_t v = 0; v < model.n; ++v) scores[v * model.k + c] /= total;
    }
    return scores;
}

}  // namespace

void gibbs_sweep(CommunityState& st, const WalkCorpus& corpus, const SweepOptions& options, Rng& rng) {
    if (options.mode == AssignMode::embedding && options.model == nullptr) {
        throw std::invalid_argument("gibbs_sweep: embedding mode requires a model");
    }
    std::vector<double> scratch;
    std::vector<double> vertex_scores;
    if (options.embedding_vertex_term) {
        if (options.mode != AssignMode::embedding) {
            throw std::invalid_argument("gibbs_sweep: embedding_vertex_term requires embedding mode");
        }
        vertex_scores = embedding_vertex_scores(*options.model);
    }
    for (std::size_t s = 0; s < corpus.sequences.size(); ++s) {
        const auto& seq = corpus.sequences[s];
        if (seq.empty()) continue;
        std::vector<double> seq_probs;
        if (options.mode == AssignMode::embedding) seq_probs = prob_c_given_s_emb(*options.model, seq);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            reassign_token(st, s, i, seq[i], seq_probs.empty() ? nullptr : seq_probs.data(),
                           vertex_scores.empty() ? nullptr : vertex_scores.data(), rng, scratch);
        }
    }
}

void warmup(CommunityState& st, const WalkCorpus& corpus, std::uint32_t loops, Rng& rng) {
    SweepOptions options;  // warm-up is always statistic-mode
    for (std::uint32_t l = 0; l < loops; ++l) gibbs_sweep(st, corpus, options, rng);
}

std::vector<double> community_distribution(const CommunityState& st, VertexId v) {
    std::vector<double> dist(st.k);
    const double den = static_cast<double>(st.vertex_tokens[v]) + static_cast<double>(st.k) * st.alpha;
    for (std::uint32_t c = 0; c < st.k; ++c) {
        dist[c] = (static_cast<double>(st.n_vc(v, c)) + st.alpha) / den;
    }
    return dist;
}

std::vector<std::uint32_t> select_communities(std::span<const double> distribution, double tau) {
    if (!(tau > 0.0) || !(tau < 1.0)) throw std::invalid_argument("select_communities: tau must lie in (0,1)");
    std::vector<std::uint32_t> selected;
    for (std::size_t c = 0; c < distribution.size(); ++c) {
        if (distribution[c] > tau) selected.push_back(static_cast<std::uint32_t>(c));
    }
    return selected;
}

std::vector<VertexId> representative_vertices(const CommunityState& st, std::uint32_t c, double eta) {
    std::vector<std::pair<double, VertexId>> scored;
    for (std::size_t v = 0; v < st.n; ++v) {
        const double p = prob_v_given_c(st, static_cast<VertexId>(v), c);
        if (p > eta) scored.emplace_back(-p, static_cast<VertexId>(v));
    }
    std::sort(scored.begin(), scored.end());
    std::vector<VertexId> result;
    result.reserve(scored.size());
    for (const auto& [negp, v] : scored) result.push_back(v);
    return result;
}

namespace {
constexpr char kStateMagic[8] = {'C', 'N', 'R', 'L', 'S', 'T', 'A', '1'};

template <typename T>
void put(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("state checkpoint: truncated input");
    return value;
}
}  // namespace

void save_state(std::ostream& out, const CommunityState& st) {
    out.write(kStateMagic, sizeof(kStateMagic));
    put(out, st.k);
    put(out, st.alpha);
    put(out, st.beta);
    put(out, static_cast<std::uint64_t>(st.n));
    put(out, st.corpus_fingerprint);
    put(out, static_cast<std::uint64_t>(st.z.size()));
    for (const auto& seq : st.z) {
        put(out, static_cast<std::uint64_t>(seq.size()));
        out.write(reinterpret_cast<const char*>(seq.data()),
                  static_cast<std::streamsize>(seq.size() * sizeof(std::uint32_t)));
    }
}

CommunityState load_state(std::istream& in, const WalkCorpus& corpus) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kStateMagic, sizeof(magic)) != 0) {
        throw std::runtime_error("state checkpoint: bad magic");
    }
    CommunityState st;
    st.k = get<std::uint32_t>(in);
    st.alpha = get<double>(in);
    st.beta = get<double>(in);
    st.n = static_cast<std::size_t>(get<std::uint64_t>(in));
    st.corpus_fingerprint = get<std::uint64_t>(in);
    if (st.corpus_fingerprint != corpus.fingerprint()) {
        throw std::runtime_error("state checkpoint: corpus fingerprint mismatch");
    }
    const auto n_seqs = static_cast<std::size_t>(get<std::uint64_t>(in));
    if (n_seqs != corpus.sequences.size()) throw std::runtime_error("state checkpoint: sequence count mismatch");
    st.z.resize(n_seqs);
    for (auto& seq : st.z) {
        const auto len = static_cast<std::size_t>(get<std::uint64_t>(in));
        seq.resize(len);
        in.read(reinterpret_cast<char*>(seq.data()), static_cast<std::streamsize>(len * sizeof(std::uint32_t)));
        if (!in) throw std::runtime_error("state checkpoint: truncated assignments");
    }
    rebuild_counts(st, corpus);  // counts are never trusted from disk
    return st;
}

}  // namespace cnrl
