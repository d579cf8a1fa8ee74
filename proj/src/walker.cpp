#include "cnrl/walker.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cnrl/alias.hpp"
#include "cnrl/rng.hpp"

namespace cnrl {

void WalkConfig::validate() const {
    if (walks_per_vertex < 1) throw std::invalid_argument("WalkConfig: walks_per_vertex must be >= 1");
    if (walk_length < 2) throw std::invalid_argument("WalkConfig: walk_length must be >= 2");
    if (strategy == WalkStrategy::biased && (!(p > 0.0) || !(q > 0.0))) {
        throw std::invalid_argument("WalkConfig: biased strategy requires p > 0 and q > 0");
    }
}

std::size_t WalkCorpus::total_tokens() const {
    std::size_t total = 0;
    for (const auto& s : sequences) total += s.size();
    return total;
}

std::uint64_t WalkCorpus::fingerprint() const {
    std::uint64_t h = fnv1a64_u64(n_vertices);
    h = fnv1a64_u64(config.walks_per_vertex, h);
    h = fnv1a64_u64(config.walk_length, h);
    h = fnv1a64_u64(config.strategy == WalkStrategy::biased ? 1 : 0, h);
    h = fnv1a64_u64(config.seed, h);
    h = fnv1a64_u64(graph_fingerprint, h);
    for (const auto& s : sequences) {
        h = fnv1a64_u64(s.size(), h);
        for (VertexId v : s) h = fnv1a64_u64(v, h);
    }
    return h;
}

void WalkCorpus::save(std::ostream& out) const {
    out << "#cnrl-corpus n=" << n_vertices << " w=" << config.walks_per_vertex
        << " len=" << config.walk_length
        << " strategy=" << (config.strategy == WalkStrategy::biased ? "biased" : "uniform");
    if (config.strategy == WalkStrategy::biased) out << " p=" << config.p << " q=" << config.q;
    out << " seed=" << config.seed << " graph=" << std::hex << graph_fingerprint << std::dec << '\n';
    for (const auto& s : sequences) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) out << ' ';
            out << s[i];
        }
        out << '\n';
    }
}

WalkCorpus WalkCorpus::load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("#cnrl-corpus", 0) != 0) {
        throw std::invalid_argument("corpus: missing #cnrl-corpus header line");
    }
    WalkCorpus corpus;
    std::istringstream hs(header.substr(12));
    std::string field;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("corpus header: bad field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "n") corpus.n_vertices = std::stoull(value);
        else if (key == "w") corpus.config.walks_per_vertex = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "len") corpus.config.walk_length = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "strategy") corpus.config.strategy = value == "biased" ? WalkStrategy::biased : WalkStrategy::uniform;
        else if (key == "p") corpus.config.p = std::stod(value);
        else if (key == "q") corpus.config.q = std::stod(value);
        else if (key == "seed") corpus.config.seed = std::stoull(value);
        else if (key == "graph") corpus.graph_fingerprint = std::stoull(value, nullptr, 16);
        else throw std::invalid_argument("corpus header: unknown field '" + key + "'");
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<VertexId> seq;
        unsigned long long id = 0;
        while (ls >> id) {
            if (id >= corpus.n_vertices) throw std::invalid_argument("corpus: vertex id out of range");
            seq.push_back(static_cast<VertexId>(id));
        }
        if (!ls.eof()) throw std::invalid_argument("corpus: non-numeric token in sequence");
        corpus.sequences.push_back(std::move(seq));
    }
    return corpus;
}

namespace {

// Weight-proportional step samplers, one alias table per non-sink vertex.
std::vector<AliasTable> build_step_samplers(const Graph& g) {
    std::vector<AliasTable> samplers(g.n_vertices());
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        if (g.out_degree(v) > 0) samplers[v] = AliasTable(g.weights(v));
    }
    return samplers;
}

std::vector<VertexId> walk_uniform(const Graph& g, const std::vector<AliasTable>& samplers, VertexId start,
                                   std::uint32_t length, Rng& rng) {
    std::vector<VertexId> seq;
    seq.reserve(length);
    seq.push_back(start);
    VertexId cur = start;
    while (seq.size() < length) {
        if (g.out_degree(cur) == 0) break;
        cur = g.neighbors(cur)[samplers[cur].sample(rng)];
        seq.push_back(cur);
    }
    return seq;
}

std::vector<VertexId> walk_biased(const Graph& g, const std::vector<AliasTable>& samplers, VertexId start,
                                  const WalkConfig& cfg, Rng& rng, std::vector<double>& scratch) {
    std::vector<VertexId> seq;
    seq.reserve(cfg.walk_length);
    seq.push_back(start);
    if (g.out_degree(start) == 0) return seq;
    VertexId prev = start;
    VertexId cur = g.neighbors(start)[samplers[start].sample(rng)];
    seq.push_back(cur);
    const double inv_p = 1.0 / cfg.p;
    const double inv_q = 1.0 / cfg.q;
    while (seq.size() < cfg.walk_length) {
        const auto nbs = g.neighbors(cur);
        if (nbs.empty()) break;
        const auto ws = g.weights(cur);
        scratch.resize(nbs.size());
        double total = 0.0;
        for (std::size_t i = 0; i < nbs.size(); ++i) {
            const VertexId x = nbs[i];
            double factor;
            if (x == prev) factor = inv_p;
            else if (g.has_edge(prev, x)) factor = 1.0;
            else factor = inv_q;
            scratch[i] = ws[i] * factor;
            total += scratch[i];
        }
        const double target = rng.next_double() * total;
        double acc = 0.0;
        std::size_t pick = nbs.size() - 1;
        for (std::size_t i = 0; i < nbs.size(); ++i) {
            acc += scratch[i];
            if (target < acc) {
                pick = i;
                break;
            }
        }
        prev = cur;
        cur = nbs[pick];
        seq.push_back(cur);
    }
    return seq;
}

}  // namespace

WalkCorpus generate_walks(const Graph& graph, const WalkConfig& config, unsigned workers) {
    config.validate();
    const std::size_t n = graph.n_vertices();
    if (n == 0) throw std::invalid_argument("generate_walks: graph is empty");

    const auto samplers = build_step_samplers(graph);

    WalkCorpus corpus;
    corpus.n_vertices = n;
    corpus.config = config;
    corpus.graph_fingerprint = graph.fingerprint();
    corpus.sequences.resize(static_cast<std::size_t>(config.walks_per_vertex) * n);

    // Canonical slot: walk k of vertex v lands at k*n + v, whichever worker
    // produced it.
    auto run_range = [&](std::size_t begin, std::size_t end) {
        std::vector<double> scratch;
        for (std::size_t idx = begin; idx < end; ++idx) {
            const auto k = static_cast<std::uint32_t>(idx / n);
            const auto v = static_cast<VertexId>(idx % n);
            Rng rng(derive_seed(config.seed, v, k));
            corpus.sequences[idx] = config.strategy == WalkStrategy::uniform
                                        ? walk_uniform(graph, samplers, v, config.walk_length, rng)
                                        : walk_biased(graph, samplers, v, config, rng, scratch);
        }
    };

    const std::size_t total = corpus.sequences.size();
    if (workers <= 1 || total < 2 * workers) {
        run_range(0, total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min<std::size_t>(w * chunk, total);
            const std::size_t end = std::min<std::size_t>(begin + chunk, total);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return corpus;
}

}  // namespace cnrl
