#include "cnrl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cnrl/rng.hpp"

namespace cnrl {

Graph Graph::build(std::size_t n_vertices, bool directed,
                   std::vector<std::tuple<VertexId, VertexId, double>> edges,
                   std::vector<std::string> names, LoadReport* report) {
    if (names.empty()) {
        names.reserve(n_vertices);
        for (std::size_t v = 0; v < n_vertices; ++v) names.push_back(std::to_string(v));
    }
    if (names.size() != n_vertices) throw std::invalid_argument("Graph::build: names/vertex-count mismatch");

    LoadReport local;
    LoadReport& rep = report ? *report : local;
    rep.edges_read = edges.size();

    // Canonicalize, drop loops, merge duplicates by weight summation.
    std::vector<std::tuple<VertexId, VertexId, double>> kept;
    kept.reserve(edges.size());
    for (auto& [u, v, w] : edges) {
        if (u >= n_vertices || v >= n_vertices) throw std::invalid_argument("Graph::build: vertex id out of range");
        if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("Graph::build: edge weights must be positive");
        if (u == v) {
            ++rep.self_loops_dropped;
            continue;
        }
        if (!directed && u > v) std::swap(u, v);
        kept.emplace_back(u, v, w);
    }
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
              });
    std::vector<std::tuple<VertexId, VertexId, double>> merged;
    merged.reserve(kept.size());
    for (const auto& e : kept) {
        if (!merged.empty() && std::get<0>(merged.back()) == std::get<0>(e) &&
            std::get<1>(merged.back()) == std::get<1>(e)) {
            std::get<2>(merged.back()) += std::get<2>(e);
            ++rep.duplicates_merged;
        } else {
            merged.push_back(e);
        }
    }

    Graph g;
    g.directed_ = directed;
    g.n_edges_ = merged.size();
    g.names_ = std::move(names);
    g.name_to_id_.reserve(g.names_.size());
    for (std::size_t v = 0; v < g.names_.size(); ++v) {
        auto [it, inserted] = g.name_to_id_.emplace(g.names_[v], static_cast<VertexId>(v));
        if (!inserted) throw std::invalid_argument("Graph::build: duplicate vertex name '" + g.names_[v] + "'");
    }

    // CSR (undirected edges land in both rows).
    std::vector<std::size_t> degree(n_vertices, 0);
    for (const auto& [u, v, w] : merged) {
        ++degree[u];
        if (!directed) ++degree[v];
    }
    g.offsets_.assign(n_vertices + 1, 0);
    for (std::size_t v = 0; v < n_vertices; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    g.targets_.resize(g.offsets_.back());
    g.edge_weights_.resize(g.offsets_.back());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    auto emit = [&](VertexId from, VertexId to, double w) {
        g.targets_[cursor[from]] = to;
        g.edge_weights_[cursor[from]] = w;
        ++cursor[from];
    };
    for (const auto& [u, v, w] : merged) {
        emit(u, v, w);
        if (!directed) emit(v, u, w);
    }
    for (std::size_t v = 0; v < n_vertices; ++v) {
        // Neighbor lists sorted by id; weights follow their edge.
        const std::size_t begin = g.offsets_[v], end = g.offsets_[v + 1];
        std::vector<std::pair<VertexId, double>> row;
        row.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) row.emplace_back(g.targets_[i], g.edge_weights_[i]);
        std::sort(row.begin(), row.end());
        for (std::size_t i = begin; i < end; ++i) {
            g.targets_[i] = row[i - begin].first;
            g.edge_weights_[i] = row[i - begin].second;
        }
    }
    return g;
}

void Graph::check_vertex(VertexId v) const {
    if (v >= n_vertices()) {
        throw std::out_of_range("Graph: vertex id " + std::to_string(v) + " out of range [0, " +
                                std::to_string(n_vertices()) + ")");
    }
}

std::size_t Graph::out_degree(VertexId v) const {
    check_vertex(v);
    return offsets_[v + 1] - offsets_[v];
}

double Graph::weighted_degree(VertexId v) const {
    check_vertex(v);
    double total = 0.0;
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) total += edge_weights_[i];
    return total;
}

std::span<const VertexId> Graph::neighbors(VertexId v) const {
    check_vertex(v);
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const double> Graph::weights(VertexId v) const {
    check_vertex(v);
    return {edge_weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    const auto nbs = neighbors(u);
    return std::binary_search(nbs.begin(), nbs.end(), v);
}

double Graph::total_edge_weight() const {
    double total = 0.0;
    for (double w : edge_weights_) total += w;
    return directed_ ? total : total / 2.0;
}

const std::string& Graph::name_of(VertexId v) const {
    check_vertex(v);
    return names_[v];
}

std::optional<VertexId> Graph::id_of(std::string_view name) const {
    auto it = name_to_id_.find(std::string(name));
    if (it == name_to_id_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t Graph::fingerprint() const {
    std::uint64_t h = fnv1a64_u64(n_vertices());
    h = fnv1a64_u64(directed_ ? 1 : 0, h);
    for (std::size_t v = 0; v < n_vertices(); ++v) {
        h = fnv1a64(names_[v], h);
        for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
            h = fnv1a64_u64(targets_[i], h);
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(double));
            std::memcpy(&bits, &edge_weights_[i], sizeof(bits));
            h = fnv1a64_u64(bits, h);
        }
    }
    return h;
}

void Graph::save_edge_list(std::ostream& out) const {
    char buf[64];
    for (std::size_t u = 0; u < n_vertices(); ++u) {
        for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
            const VertexId v = targets_[i];
            if (!directed_ && v < u) continue;  // emit each undirected edge once
            std::snprintf(buf, sizeof(buf), "%.17g", edge_weights_[i]);
            out << names_[u] << ' ' << names_[v] << ' ' << buf << '\n';
        }
    }
}

namespace {

bool is_comment(const std::string& line, const std::string& prefix) {
    return !prefix.empty() && line.compare(0, prefix.size(), prefix) == 0;
}

double parse_weight(const std::string& token, std::size_t line_no) {
    std::size_t consumed = 0;
    double w = 0.0;
    try {
        w = std::stod(token, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": bad weight '" + token + "'");
    }
    if (consumed != token.size() || !std::isfinite(w)) {
        throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": bad weight '" + token + "'");
    }
    if (!(w > 0.0)) {
        throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": nonpositive weight " + token);
    }
    return w;
}

}  // namespace

LoadResult load_edge_list(std::istream& in, const EdgeListOptions& options) {
    std::vector<std::string> names;
    std::unordered_map<std::string, VertexId> ids;
    auto intern = [&](const std::string& name) {
        auto [it, inserted] = ids.emplace(name, static_cast<VertexId>(names.size()));
        if (inserted) names.push_back(name);
        return it->second;
    };

    std::vector<std::tuple<VertexId, VertexId, double>> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || is_comment(line, options.comment_prefix)) continue;
        std::istringstream ls(line);
        std::string src, dst, extra, trailing;
        ls >> src >> dst;
        if (dst.empty()) {
            throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": expected 'src dst [weight]'");
        }
        double w = 1.0;
        if (ls >> extra) {
            if (!options.weighted) {
                throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                            ": unexpected third column (input not declared weighted)");
            }
            w = parse_weight(extra, line_no);
        }
        if (ls >> trailing) {
            throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": trailing tokens");
        }
        edges.emplace_back(intern(src), intern(dst), w);
    }
    if (edges.empty()) throw std::invalid_argument("edge list: no edges found in input");

    LoadResult result;
    result.graph = Graph::build(names.size(), options.directed, std::move(edges), std::move(names), &result.report);
    return result;
}

LoadResult load_edge_list_file(const std::string& path, const EdgeListOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list file: " + path);
    return load_edge_list(in, options);
}

LabelMap::LabelMap(std::size_t n_vertices, std::size_t n_labels, std::vector<std::vector<int>> labels_of,
                   std::vector<std::string> label_names)
    : labels_of_(std::move(labels_of)), label_names_(std::move(label_names)) {
    if (labels_of_.size() != n_vertices || label_names_.size() != n_labels) {
        throw std::invalid_argument("LabelMap: shape mismatch");
    }
}

std::size_t LabelMap::n_labeled_vertices() const {
    std::size_t count = 0;
    for (const auto& ls : labels_of_) count += ls.empty() ? 0 : 1;
    return count;
}

bool LabelMap::multi_label() const {
    for (const auto& ls : labels_of_) {
        if (ls.size() > 1) return true;
    }
    return false;
}

LabelMap load_labels(std::istream& in, const Graph& graph) {
    std::vector<std::vector<int>> labels_of(graph.n_vertices());
    std::vector<std::string> label_names;
    std::unordered_map<std::string, int> label_ids;
    auto intern = [&](const std::string& name) {
        auto [it, inserted] = label_ids.emplace(name, static_cast<int>(label_names.size()));
        if (inserted) label_names.push_back(name);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string vertex, label;
        ls >> vertex;
        auto id = graph.id_of(vertex);
        if (!id) {
            throw std::invalid_argument("label file line " + std::to_string(line_no) + ": unknown vertex '" +
                                        vertex + "'");
        }
        std::size_t count = 0;
        while (ls >> label) {
            labels_of[*id].push_back(intern(label));
            ++count;
        }
        if (count == 0) {
            throw std::invalid_argument("label file line " + std::to_string(line_no) + ": vertex without labels");
        }
        auto& row = labels_of[*id];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return LabelMap(graph.n_vertices(), label_names.size(), std::move(labels_of), std::move(label_names));
}

LabelMap load_labels_file(const std::string& path, const Graph& graph) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path);
    return load_labels(in, graph);
}

}  // namespace cnrl
