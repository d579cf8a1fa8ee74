#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace cnrl {

using VertexId = std::uint32_t;

struct EdgeListOptions {
    bool directed = false;
    bool weighted = false;
    std::string comment_prefix = "#";
};

struct LoadReport {
    std::size_t edges_read = 0;
    std::size_t duplicates_merged = 0;
    std::size_t self_loops_dropped = 0;
};

/// Immutable network topology with dense vertex ids and CSR adjacency.
/// Undirected edges are stored in both adjacency lists with equal weight;
/// per-vertex neighbor lists are sorted by id. Safe for concurrent reads.
class Graph {
public:
    Graph() = default;

    /// Assembles a graph from internal-id edges. Self-loops are dropped and
    /// duplicate edges merged by weight summation (for undirected graphs,
    /// (u,v) and (v,u) are the same edge). `names` may be empty, in which
    /// case decimal ids are used as external names.
    static Graph build(std::size_t n_vertices, bool directed,
                       std::vector<std::tuple<VertexId, VertexId, double>> edges,
                       std::vector<std::string> names = {}, LoadReport* report = nullptr);

    std::size_t n_vertices() const { return names_.size(); }
    bool directed() const { return directed_; }

    /// Undirected: number of unordered edges. Directed: number of arcs.
    std::size_t n_edges() const { return n_edges_; }

    std::size_t out_degree(VertexId v) const;
    double weighted_degree(VertexId v) const;
    std::span<const VertexId> neighbors(VertexId v) const;
    std::span<const double> weights(VertexId v) const;
    bool has_edge(VertexId u, VertexId v) const;

    double total_edge_weight() const;  // sum over undirected edges (or arcs) once

    const std::string& name_of(VertexId v) const;
    std::optional<VertexId> id_of(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }

    /// FNV-1a over topology, ids and weights; embedded in corpus provenance.
    std::uint64_t fingerprint() const;

    /// One line per edge: `name_u name_v weight`. Reloading with
    /// weighted=true reproduces the graph exactly (isolated vertices are not
    /// representable in edge-list form).
    void save_edge_list(std::ostream& out) const;

private:
    void check_vertex(VertexId v) const;

    bool directed_ = false;
    std::size_t n_edges_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> targets_;
    std::vector<double> edge_weights_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, VertexId> name_to_id_;
};

struct LoadResult {
    Graph graph;
    LoadReport report;
};

/// Parses `src dst [weight]` lines. Vertex names are arbitrary tokens and are
/// mapped to dense ids in order of first appearance. Lines starting with the
/// comment prefix are ignored. Throws std::invalid_argument with the line
/// number on malformed input, nonpositive weights, or empty input.
LoadResult load_edge_list(std::istream& in, const EdgeListOptions& options = {});
LoadResult load_edge_list_file(const std::string& path, const EdgeListOptions& options = {});

/// Vertex labels for classification tasks. Multi-label permitted.
class LabelMap {
public:
    LabelMap() = default;
    LabelMap(std::size_t n_vertices, std::size_t n_labels,
             std::vector<std::vector<int>> labels_of, std::vector<std::string> label_names);

    std::size_t n_labels() const { return label_names_.size(); }
    std::size_t n_labeled_vertices() const;
    bool is_labeled(VertexId v) const { return !labels_of_[v].empty(); }
    const std::vector<int>& labels(VertexId v) const { return labels_of_[v]; }
    const std::string& label_name(int label) const { return label_names_[label]; }
    bool multi_label() const;

private:
    std::vector<std::vector<int>> labels_of_;
    std::vector<std::string> label_names_;
};

/// Parses `vertex_name label [label ...]` lines. Every labeled vertex must
/// exist in the graph; unknown names raise an error naming the vertex.
LabelMap load_labels(std::istream& in, const Graph& graph);
LabelMap load_labels_file(const std::string& path, const Graph& graph);

}  // namespace cnrl
