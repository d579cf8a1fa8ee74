#include "cnrl/embedding.hpp"

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

void EmbeddingModel::validate_shapes() const {
    if (vertex_vecs.size() != n * d_vertex || context_vecs.size() != n * d_vertex ||
        community_vecs.size() != k * d_community) {
        throw std::invalid_argument("EmbeddingModel: matrix shapes inconsistent");
    }
    for (double x : vertex_vecs) {
        if (!std::isfinite(x)) throw std::invalid_argument("EmbeddingModel: non-finite vertex entry");
    }
    for (double x : context_vecs) {
        if (!std::isfinite(x)) throw std::invalid_argument("EmbeddingModel: non-finite context entry");
    }
    for (double x : community_vecs) {
        if (!std::isfinite(x)) throw std::invalid_argument("EmbeddingModel: non-finite community entry");
    }
}

namespace {
void fill_uniform(std::vector<double>& m, std::size_t dim, Rng& rng) {
    const double half = 0.5 / static_cast<double>(dim);
    for (double& x : m) x = (rng.next_double() * 2.0 - 1.0) * half;
}
}  // namespace

EmbeddingModel init_model(std::size_t n, std::size_t k, std::size_t d_vertex, std::size_t d_community,
                          std::uint64_t seed, bool context_zero) {
    if (n == 0 || d_vertex == 0 || d_community == 0) throw std::invalid_argument("init_model: empty dimensions");
    EmbeddingModel model;
    model.n = n;
    model.k = k;
    model.d_vertex = d_vertex;
    model.d_community = d_community;
    model.vertex_vecs.resize(n * d_vertex);
    model.context_vecs.resize(n * d_vertex);
    model.community_vecs.resize(k * d_community);

    Rng rng_v(derive_seed(seed, 0x11));
    fill_uniform(model.vertex_vecs, d_vertex, rng_v);
    if (context_zero) {
        std::fill(model.context_vecs.begin(), model.context_vecs.end(), 0.0);
    } else {
        Rng rng_c(derive_seed(seed, 0x12));
        fill_uniform(model.context_vecs, d_vertex, rng_c);
    }
    if (k > 0) {
        Rng rng_k(derive_seed(seed, 0x13));
        fill_uniform(model.community_vecs, d_community, rng_k);
    }
    return model;
}

void write_embeddings(std::ostream& out, const std::vector<std::string>& names,
                      std::span<const double> data, std::size_t dim) {
    if (dim == 0 || data.size() != names.size() * dim) {
        throw std::invalid_argument("write_embeddings: shape mismatch");
    }
    out << names.size() << ' ' << dim << '\n';
    char buf[32];
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << names[i];
        for (std::size_t j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof(buf), "%.6g", data[i * dim + j]);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

LoadedEmbeddings read_embeddings(std::istream& in) {
    LoadedEmbeddings result;
    std::size_t n = 0;
    if (!(in >> n >> result.dim) || result.dim == 0) {
        throw std::invalid_argument("embeddings: bad `n dim` header");
    }
    result.names.reserve(n);
    result.data.reserve(n * result.dim);
    for (std::size_t i = 0; i < n; ++i) {
        std::string name;
        if (!(in >> name)) throw std::invalid_argument("embeddings: truncated at row " + std::to_string(i));
        result.names.push_back(name);
        for (std::size_t j = 0; j < result.dim; ++j) {
            double x = 0.0;
            if (!(in >> x)) throw std::invalid_argument("embeddings: truncated values at row " + std::to_string(i));
            result.data.push_back(x);
        }
    }
    return result;
}

LoadedEmbeddings read_embeddings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings file: " + path);
    return read_embeddings(in);
}

namespace {
constexpr char kModelMagic[8] = {'C', 'N', 'R', 'L', 'M', 'D', 'L', '1'};

template <typename T>
void put(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("model checkpoint: truncated input");
    return value;
}

void put_matrix(std::ostream& out, const std::vector<double>& m) {
    out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
}

void get_matrix(std::istream& in, std::vector<double>& m, std::size_t count) {
    m.resize(count);
    in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("model checkpoint: truncated matrix");
}
}  // namespace

void save_model(std::ostream& out, const EmbeddingModel& model, std::uint64_t config_hash) {
    out.write(kModelMagic, sizeof(kModelMagic));
    put(out, static_cast<std::uint64_t>(model.n));
    put(out, static_cast<std::uint64_t>(model.k));
    put(out, static_cast<std::uint64_t>(model.d_vertex));
    put(out, static_cast<std::uint64_t>(model.d_community));
    put(out, config_hash);
    put_matrix(out, model.vertex_vecs);
    put_matrix(out, model.context_vecs);
    put_matrix(out, model.community_vecs);
}

EmbeddingModel load_model(std::istream& in, std::uint64_t* config_hash) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
        throw std::runtime_error("model checkpoint: bad magic");
    }
    EmbeddingModel model;
    model.n = static_cast<std::size_t>(get<std::uint64_t>(in));
    model.k = static_cast<std::size_t>(get<std::uint64_t>(in));
    model.d_vertex = static_cast<std::size_t>(get<std::uint64_t>(in));
    model.d_community = static_cast<std::size_t>(get<std::uint64_t>(in));
    const std::uint64_t hash = get<std::uint64_t>(in);
    if (config_hash) *config_hash = hash;
    get_matrix(in, model.vertex_vecs, model.n * model.d_vertex);
    get_matrix(in, model.context_vecs, model.n * model.d_vertex);
    get_matrix(in, model.community_vecs, model.k * model.d_community);
    return model;
}

}  // namespace cnrl
