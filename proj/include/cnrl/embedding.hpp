#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cnrl/graph.hpp"

namespace cnrl {

/// Three dense row-major matrices: vertex vectors (center role), context
/// vectors (output role, shared by vertex and community predictions), and
/// community vectors.
struct EmbeddingModel {
    std::size_t n = 0;            // vertices
    std::size_t k = 0;            // communities
    std::size_t d_vertex = 64;
    std::size_t d_community = 64;
    std::vector<double> vertex_vecs;     // n x d_vertex
    std::vector<double> context_vecs;    // n x d_vertex
    std::vector<double> community_vecs;  // k x d_community

    double* vertex(VertexId v) { return vertex_vecs.data() + static_cast<std::size_t>(v) * d_vertex; }
    const double* vertex(VertexId v) const { return vertex_vecs.data() + static_cast<std::size_t>(v) * d_vertex; }
    double* context(VertexId v) { return context_vecs.data() + static_cast<std::size_t>(v) * d_vertex; }
    const double* context(VertexId v) const { return context_vecs.data() + static_cast<std::size_t>(v) * d_vertex; }
    double* community(std::size_t c) { return community_vecs.data() + c * d_community; }
    const double* community(std::size_t c) const { return community_vecs.data() + c * d_community; }

    void validate_shapes() const;
};

/// Uniform init in [-0.5/dim, 0.5/dim] per matrix, each from its own RNG
/// stream so the presence of one matrix never shifts another's values.
/// With context_zero the context table starts at zero instead.
EmbeddingModel init_model(std::size_t n, std::size_t k, std::size_t d_vertex, std::size_t d_community,
                          std::uint64_t seed, bool context_zero = false);

/// Per-vertex concatenation of the vertex vector with its community
/// expectation vector sum_c Pr(c|v) * community_vec[c].
struct EnhancedEmbeddings {
    std::size_t n = 0;
    std::size_t dim = 0;  // d_vertex + d_community
    std::vector<double> data;

    const double* row(VertexId v) const { return data.data() + static_cast<std::size_t>(v) * dim; }
};

/// Text export: first line `n dim`, then `vertex_name value...` per line
/// with 6 significant digits.
void write_embeddings(std::ostream& out, const std::vector<std::string>& names,
                      std::span<const double> data, std::size_t dim);

struct LoadedEmbeddings {
    std::size_t dim = 0;
    std::vector<std::string> names;
    std::vector<double> data;  // rows in file order

    std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
};
LoadedEmbeddings read_embeddings(std::istream& in);
LoadedEmbeddings read_embeddings_file(const std::string& path);

/// Binary model checkpoint (all three matrices plus the config fingerprint).
void save_model(std::ostream& out, const EmbeddingModel& model, std::uint64_t config_hash);
EmbeddingModel load_model(std::istream& in, std::uint64_t* config_hash = nullptr);

}  // namespace cnrl
