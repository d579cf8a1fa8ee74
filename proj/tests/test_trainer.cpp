#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cnrl/pipeline.hpp"
#include "cnrl/trainer.hpp"
#include "test_util.hpp"

using namespace cnrl;

namespace {

WalkCorpus small_corpus(const Graph& g, std::uint64_t seed, std::uint32_t walks = 4, std::uint32_t len = 12) {
    WalkConfig cfg;
    cfg.walks_per_vertex = walks;
    cfg.walk_length = len;
    cfg.seed = seed;
    return generate_walks(g, cfg);
}

}  // namespace

TEST_CASE("zero center vector gives loss (1+m) ln 2") {
    const std::size_t dim = 6;
    std::vector<double> center(dim, 0.0);
    std::vector<double> ctx(8 * dim);
    Rng rng(5);
    for (double& x : ctx) x = rng.next_double() - 0.5;
    const std::vector<VertexId> negs{2, 4, 6, 7, 1};
    const auto grads = negative_sample_loss_and_grads(center, ctx, dim, 0, negs);
    CHECK(grads.loss == doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(11);
    for (int config = 0; config < 20; ++config) {
        const std::size_t dim = 2 + rng.next_below(10);
        const std::size_t table = 3 + rng.next_below(6);
        const std::size_t m = 1 + rng.next_below(4);
        std::vector<double> center(dim), ctx(table * dim);
        for (double& x : center) x = 2.0 * rng.next_double() - 1.0;
        for (double& x : ctx) x = 2.0 * rng.next_double() - 1.0;
        const auto positive = static_cast<VertexId>(rng.next_below(table));
        std::vector<VertexId> negs(m);
        for (auto& t : negs) t = static_cast<VertexId>(rng.next_below(table));

        const auto grads = negative_sample_loss_and_grads(center, ctx, dim, positive, negs);
        const double h = 1e-4;
        auto loss_at = [&](const std::vector<double>& c, const std::vector<double>& table_v) {
            return negative_sample_loss_and_grads(c, table_v, dim, positive, negs).loss;
        };
        auto check = [&](double analytic, double numeric) {
            CHECK(std::abs(analytic - numeric) <= 1e-5 * std::max({1.0, std::abs(analytic), std::abs(numeric)}));
        };
        for (std::size_t j = 0; j < dim; ++j) {
            auto cp = center;
            cp[j] += h;
            auto cm = center;
            cm[j] -= h;
            check(grads.grad_center[j], (loss_at(cp, ctx) - loss_at(cm, ctx)) / (2 * h));
        }
        // positive row and (possibly repeated) negative rows: perturb the
        // table cell and compare against the summed analytic contributions
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t cell = 0; cell < table; ++cell) {
                double analytic = 0.0;
                if (cell == positive) analytic += grads.grad_positive[j];
                for (std::size_t t = 0; t < m; ++t) {
                    if (negs[t] == cell) analytic += grads.grad_negatives[t * dim + j];
                }
                if (analytic == 0.0 && cell != positive) continue;
                auto tp = ctx;
                tp[cell * dim + j] += h;
                auto tm = ctx;
                tm[cell * dim + j] -= h;
                check(analytic, (loss_at(center, tp) - loss_at(center, tm)) / (2 * h));
            }
        }
    }
}

TEST_CASE("raising the positive dot product lowers the positive loss term") {
    const std::size_t dim = 4;
    std::vector<double> ctx(3 * dim, 0.2);
    std::vector<double> weak(dim, 0.1), strong(dim, 0.9);
    const std::vector<VertexId> no_negs;
    const double weak_loss = negative_sample_loss_and_grads(weak, ctx, dim, 1, no_negs).loss;
    const double strong_loss = negative_sample_loss_and_grads(strong, ctx, dim, 1, no_negs).loss;
    CHECK(strong_loss < weak_loss);
}

TEST_CASE("fused SGD step equals exact-gradient descent for distinct rows") {
    const std::size_t dim = 5;
    Rng rng(3);
    std::vector<double> center(dim), ctx(6 * dim);
    for (double& x : center) x = rng.next_double() - 0.5;
    for (double& x : ctx) x = rng.next_double() - 0.5;
    const VertexId positive = 0;
    const std::vector<VertexId> negs{2, 3, 5};  // all distinct, none equal to positive
    const double lr = 0.01;

    auto stepped_center = center;
    auto stepped_ctx = ctx;
    apply_negative_sampling_step(stepped_center, stepped_ctx, dim, positive, negs, lr);

    const auto grads = negative_sample_loss_and_grads(center, ctx, dim, positive, negs);
    for (std::size_t j = 0; j < dim; ++j) {
        CHECK(stepped_center[j] == doctest::Approx(center[j] - lr * grads.grad_center[j]).epsilon(1e-12));
        CHECK(stepped_ctx[positive * dim + j] ==
              doctest::Approx(ctx[positive * dim + j] - lr * grads.grad_positive[j]).epsilon(1e-12));
        for (std::size_t t = 0; t < negs.size(); ++t) {
            CHECK(stepped_ctx[negs[t] * dim + j] ==
                  doctest::Approx(ctx[negs[t] * dim + j] - lr * grads.grad_negatives[t * dim + j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("an SGD step touches only the center, positive and negative rows") {
    const std::size_t dim = 4, table = 10;
    Rng rng(9);
    std::vector<double> center(dim), ctx(table * dim);
    for (double& x : center) x = rng.next_double() - 0.5;
    for (double& x : ctx) x = rng.next_double() - 0.5;
    const auto before = ctx;
    const std::vector<VertexId> negs{7, 2};
    apply_negative_sampling_step(center, ctx, dim, 4, negs, 0.05);
    for (std::size_t cell = 0; cell < table; ++cell) {
        const bool touched = cell == 4 || cell == 7 || cell == 2;
        for (std::size_t j = 0; j < dim; ++j) {
            if (touched) continue;
            CHECK(ctx[cell * dim + j] == before[cell * dim + j]);
        }
    }
    // frozen context: the table is bit-identical afterwards
    auto frozen_ctx = before;
    std::vector<double> center2(dim, 0.3);
    apply_negative_sampling_step(center2, frozen_ctx, dim, 4, negs, 0.05, /*write_context=*/false);
    CHECK(frozen_ctx == before);
}

TEST_CASE("loss on a frozen pair decreases after one small step") {
    const std::size_t dim = 8;
    Rng rng(21);
    std::vector<double> center(dim), ctx(5 * dim);
    for (double& x : center) x = rng.next_double() - 0.5;
    for (double& x : ctx) x = rng.next_double() - 0.5;
    const std::vector<VertexId> negs{1, 3};
    const double before = negative_sample_loss_and_grads(center, ctx, dim, 0, negs).loss;
    apply_negative_sampling_step(center, ctx, dim, 0, negs, 1e-3);
    const double after = negative_sample_loss_and_grads(center, ctx, dim, 0, negs).loss;
    CHECK(after < before);
}

TEST_CASE("noise distribution follows unigram^0.75 (3 sigma over 1e6 draws)") {
    const Graph g = testutil::make_er_graph(12, 24, 5);
    const auto corpus = small_corpus(g, 9);
    NoiseTable noise(corpus, g.n_vertices(), 0.75);

    const auto& probs = noise.probabilities();
    CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));

    const std::size_t draws = 1'000'000;
    std::vector<std::size_t> counts(g.n_vertices(), 0);
    Rng rng(77);
    const auto no_exclude = static_cast<VertexId>(g.n_vertices());  // matches nothing
    for (std::size_t i = 0; i < draws; ++i) ++counts[noise.draw(rng, no_exclude)];
    for (std::size_t v = 0; v < g.n_vertices(); ++v) {
        const double expectation = probs[v] * draws;
        const double sigma = std::sqrt(probs[v] * (1 - probs[v]) * draws);
        CHECK(std::abs(static_cast<double>(counts[v]) - expectation) <= 3 * sigma + 1e-9);
    }
    // the excluded vertex is never drawn
    for (std::size_t i = 0; i < 10'000; ++i) CHECK(noise.draw(rng, 3) != 3);
}

TEST_CASE("init_skipgram") {
    SUBCASE("zero pretrain epochs leave the random initialization untouched") {
        const Graph g = testutil::make_er_graph(10, 20, 2);
        const auto corpus = small_corpus(g, 4);
        TrainConfig cfg;
        cfg.pretrain_epochs = 0;
        cfg.seed = 42;
        const auto model = init_skipgram(corpus, g.n_vertices(), 2, 16, 16, cfg);
        const auto raw = init_model(g.n_vertices(), 2, 16, 16, cfg.seed, cfg.init_context_zero);
        CHECK(model.vertex_vecs == raw.vertex_vecs);
        CHECK(model.context_vecs == raw.context_vecs);
        CHECK(model.community_vecs == raw.community_vecs);
    }
    SUBCASE("deterministic for a fixed seed") {
        const Graph g = testutil::make_er_graph(12, 25, 3);
        const auto corpus = small_corpus(g, 6);
        TrainConfig cfg;
        cfg.seed = 19;
        const auto a = init_skipgram(corpus, g.n_vertices(), 0, 8, 8, cfg);
        const auto b = init_skipgram(corpus, g.n_vertices(), 0, 8, 8, cfg);
        CHECK(a.vertex_vecs == b.vertex_vecs);
        CHECK(a.context_vecs == b.context_vecs);
    }
    SUBCASE("pretraining separates two cliques (intra vs inter cosine)") {
        const Graph g = testutil::make_clique_pair(8);
        int wins = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto corpus = small_corpus(g, seed, 6, 20);
            TrainConfig cfg;
            cfg.seed = seed;
            cfg.pretrain_epochs = 3;
            const auto model = init_skipgram(corpus, g.n_vertices(), 0, 32, 32, cfg);
            double intra = 0.0, inter = 0.0;
            std::size_t n_intra = 0, n_inter = 0;
            auto cosine = [&](VertexId a, VertexId b) {
                double dot = 0, na = 0, nb = 0;
                for (std::size_t j = 0; j < model.d_vertex; ++j) {
                    dot += model.vertex(a)[j] * model.vertex(b)[j];
                    na += model.vertex(a)[j] * model.vertex(a)[j];
                    nb += model.vertex(b)[j] * model.vertex(b)[j];
                }
                return dot / std::sqrt(na * nb);
            };
            for (VertexId a = 0; a < 16; ++a) {
                for (VertexId b = a + 1; b < 16; ++b) {
                    if (a / 8 == b / 8) {
                        intra += cosine(a, b);
                        ++n_intra;
                    } else {
                        inter += cosine(a, b);
                        ++n_inter;
                    }
                }
            }
            if (intra / n_intra > inter / n_inter) ++wins;
        }
        CHECK(wins == 5);
    }
}

TEST_CASE("degenerate K=1 joint run reproduces plain skip-gram bit for bit") {
    const Graph g = testutil::make_er_graph(20, 50, 13);
    const auto corpus = small_corpus(g, 31, 3, 10);
    TrainConfig cfg;
    cfg.seed = 5;
    cfg.epochs = 2;
    cfg.pretrain_epochs = 1;

    // joint run, community updates isolated from the shared context table
    TrainConfig joint_cfg = cfg;
    joint_cfg.community_writes_context = false;
    auto joint_model = init_skipgram(corpus, g.n_vertices(), 1, 12, 12, joint_cfg);
    auto state = init_assignments(corpus, 1, 99);
    joint_train(g, corpus, state, joint_model, joint_cfg);

    auto plain_model = init_skipgram(corpus, g.n_vertices(), 0, 12, 12, cfg);
    train_skipgram(corpus, plain_model, cfg);

    CHECK(joint_model.vertex_vecs == plain_model.vertex_vecs);
    CHECK(joint_model.context_vecs == plain_model.context_vecs);
}

TEST_CASE("joint training is deterministic in sequential mode") {
    const Graph g = testutil::make_er_graph(15, 35, 8);
    const auto corpus = small_corpus(g, 3, 2, 8);
    auto run_once = [&]() {
        TrainConfig cfg;
        cfg.seed = 7;
        cfg.epochs = 2;
        auto model = init_skipgram(corpus, g.n_vertices(), 3, 8, 8, cfg);
        auto state = init_assignments(corpus, 3, 55);
        Rng warm(1);
        warmup(state, corpus, 3, warm);
        joint_train(g, corpus, state, model, cfg);
        return model;
    };
    const auto a = run_once();
    const auto b = run_once();
    CHECK(a.vertex_vecs == b.vertex_vecs);
    CHECK(a.context_vecs == b.context_vecs);
    CHECK(a.community_vecs == b.community_vecs);
}

TEST_CASE("joint training validates shapes before touching anything") {
    const Graph g = testutil::make_er_graph(10, 20, 2);
    const auto corpus = small_corpus(g, 1, 2, 6);
    TrainConfig cfg;
    auto state = init_assignments(corpus, 2, 3);

    auto wrong_k = init_model(g.n_vertices(), 3, 8, 8, 1);
    CHECK_THROWS_AS(joint_train(g, corpus, state, wrong_k, cfg), std::invalid_argument);

    auto wrong_dims = init_model(g.n_vertices(), 2, 8, 16, 1);
    CHECK_THROWS_AS(joint_train(g, corpus, state, wrong_dims, cfg), std::invalid_argument);

    auto wrong_n = init_model(g.n_vertices() + 1, 2, 8, 8, 1);
    CHECK_THROWS_AS(joint_train(g, corpus, state, wrong_n, cfg), std::invalid_argument);
}

TEST_CASE("parallel joint training keeps count invariants and shapes") {
    const Graph g = testutil::make_er_graph(30, 80, 6);
    const auto corpus = small_corpus(g, 77, 4, 12);
    TrainConfig cfg;
    cfg.seed = 2;
    cfg.epochs = 2;
    auto model = init_skipgram(corpus, g.n_vertices(), 4, 16, 16, cfg, nullptr, 2);
    auto state = init_assignments(corpus, 4, 8);
    Rng warm(4);
    warmup(state, corpus, 2, warm);
    joint_train(g, corpus, state, model, cfg, nullptr, 2);
    validate_counts(state, corpus);
    model.validate_shapes();
}

TEST_CASE("enhanced embeddings") {
    SUBCASE("K=1: community part equals the single community vector") {
        const Graph g = testutil::make_er_graph(6, 10, 4);
        const auto corpus = small_corpus(g, 2, 2, 6);
        auto model = init_model(g.n_vertices(), 1, 4, 4, 3);
        const auto state = init_assignments(corpus, 1, 9);
        const auto enhanced = enhanced_embeddings(model, state);
        CHECK(enhanced.dim == 8);
        for (VertexId v = 0; v < g.n_vertices(); ++v) {
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(enhanced.row(v)[j] == model.vertex(v)[j]);          // first half is V exactly
                CHECK(enhanced.row(v)[4 + j] == doctest::Approx(model.community(0)[j]));
            }
        }
    }
    SUBCASE("one-hot distribution picks out a single community vector") {
        WalkCorpus corpus;
        corpus.n_vertices = 1;
        corpus.sequences = {{0, 0, 0}};
        auto state = init_assignments(corpus, 2, 1);
        state.alpha = 0.0;  // unsmoothed: Pr(c|v) is exactly counts/total
        state.z[0] = {1, 1, 1};
        rebuild_counts(state, corpus);
        auto model = init_model(1, 2, 3, 3, 5);
        const auto enhanced = enhanced_embeddings(model, state);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(enhanced.row(0)[3 + j] == doctest::Approx(model.community(1)[j]).epsilon(1e-15));
        }
    }
    SUBCASE("community part stays inside the componentwise convex hull") {
        const Graph g = testutil::make_er_graph(10, 25, 11);
        const auto corpus = small_corpus(g, 6, 2, 8);
        auto model = init_model(g.n_vertices(), 5, 6, 6, 21);
        auto state = init_assignments(corpus, 5, 13);
        Rng rng(2);
        for (int i = 0; i < 5; ++i) gibbs_sweep(state, corpus, {}, rng);
        const auto enhanced = enhanced_embeddings(model, state);
        for (VertexId v = 0; v < g.n_vertices(); ++v) {
            for (std::size_t j = 0; j < 6; ++j) {
                double lo = 1e300, hi = -1e300;
                for (std::size_t c = 0; c < 5; ++c) {
                    lo = std::min(lo, model.community(c)[j]);
                    hi = std::max(hi, model.community(c)[j]);
                }
                CHECK(enhanced.row(v)[6 + j] >= lo - 1e-12);
                CHECK(enhanced.row(v)[6 + j] <= hi + 1e-12);
            }
        }
    }
}

TEST_CASE("embedding text export format and model checkpoint") {
    SUBCASE("text export carries `n dim` then names with 6 significant digits") {
        const std::vector<std::string> names{"alpha", "beta"};
        const std::vector<double> data{1.234567891, -0.000123456789, 2.0, 3.5};
        std::ostringstream out;
        write_embeddings(out, names, data, 2);
        std::istringstream in(out.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "2 2");
        std::getline(in, line);
        CHECK(line == "alpha 1.23457 -0.000123457");
        std::istringstream in2(out.str());
        const auto parsed = read_embeddings(in2);
        CHECK(parsed.dim == 2);
        CHECK(parsed.names[1] == "beta");
        CHECK(parsed.row(1)[0] == doctest::Approx(2.0));
    }
    SUBCASE("binary checkpoint round-trips exactly") {
        auto model = init_model(7, 3, 5, 5, 123);
        std::stringstream buffer;
        save_model(buffer, model, 0xDEADBEEFULL);
        std::uint64_t hash = 0;
        const auto loaded = load_model(buffer, &hash);
        CHECK(hash == 0xDEADBEEFULL);
        CHECK(loaded.vertex_vecs == model.vertex_vecs);
        CHECK(loaded.context_vecs == model.context_vecs);
        CHECK(loaded.community_vecs == model.community_vecs);
        CHECK(loaded.d_vertex == 5);
    }
}

TEST_CASE("karate K=2 joint run matches a greedy-modularity oracle split") {
    const Graph g = load_edge_list_file(testutil::dataset_path("karate.edges")).graph;
    RunConfig cfg;
    cfg.communities = 2;
    cfg.seed = 3;
    const auto art = run_training(g, cfg);

    std::vector<int> partition(g.n_vertices());
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        const auto dist = community_distribution(art.state, v);
        partition[v] = dist[0] >= dist[1] ? 0 : 1;
    }
    const auto oracle = testutil::greedy_modularity_partition(g, 2);
    // agreement up to label swap
    std::size_t same = 0, swapped = 0;
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        const int o = oracle[v] == oracle[0] ? 0 : 1;
        if (partition[v] == (partition[0] == 0 ? o : 1 - o)) ++same;
        else ++swapped;
    }
    const double agreement = static_cast<double>(std::max(same, swapped)) / static_cast<double>(g.n_vertices());
    CHECK(agreement >= 0.75);
}
