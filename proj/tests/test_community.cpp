#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cnrl/community.hpp"
#include "cnrl/walker.hpp"
#include "test_util.hpp"

using namespace cnrl;

namespace {

WalkCorpus corpus_from_sequences(std::size_t n, std::vector<std::vector<VertexId>> seqs) {
    WalkCorpus corpus;
    corpus.n_vertices = n;
    corpus.sequences = std::move(seqs);
    return corpus;
}

WalkCorpus karate_corpus() {
    static const Graph g = load_edge_list_file(testutil::dataset_path("karate.edges")).graph;
    WalkConfig cfg;  // defaults: w=10, length=40
    cfg.seed = 99;
    return generate_walks(g, cfg);
}

}  // namespace

TEST_CASE("init_assignments") {
    SUBCASE("K=1 assigns everything to community 0") {
        const auto corpus = corpus_from_sequences(3, {{0, 1, 2}, {2, 1}});
        const auto st = init_assignments(corpus, 1, 4);
        for (const auto& seq : st.z) {
            for (auto c : seq) CHECK(c == 0);
        }
        CHECK(st.community_total[0] == 5);
    }
    SUBCASE("sequence counts conserve length") {
        const auto corpus = corpus_from_sequences(2, {{0, 1}});
        const auto st = init_assignments(corpus, 2, 123);
        CHECK(st.n_cs(0, 0) + st.n_cs(0, 1) == 2);
        CHECK(st.seq_total[0] == 2);
    }
    SUBCASE("karate corpus total token mass") {
        const auto corpus = karate_corpus();
        const auto st = init_assignments(corpus, 4, 7);
        const auto total = std::accumulate(st.community_total.begin(), st.community_total.end(), std::int64_t{0});
        CHECK(total == 34 * 10 * 40);
    }
    SUBCASE("K=0 rejected") {
        const auto corpus = corpus_from_sequences(1, {{0}});
        CHECK_THROWS_AS(init_assignments(corpus, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("prob_v_given_c") {
    SUBCASE("all-zero counts give 1/|V|") {
        CommunityState st;
        st.k = 3;
        st.n = 4;
        st.beta = 0.5;
        st.vertex_community.assign(st.n * st.k, 0);
        st.community_total.assign(st.k, 0);
        for (VertexId v = 0; v < 4; ++v) {
            for (std::uint32_t c = 0; c < 3; ++c) CHECK(prob_v_given_c(st, v, c) == doctest::Approx(0.25));
        }
    }
    SUBCASE("hand arithmetic: counts (3,1), beta=0.5") {
        CommunityState st;
        st.k = 1;
        st.n = 2;
        st.beta = 0.5;
        st.vertex_community = {3, 1};
        st.community_total = {4};
        CHECK(prob_v_given_c(st, 0, 0) == doctest::Approx(0.7));  // 3.5/5
        CHECK(prob_v_given_c(st, 1, 0) == doctest::Approx(0.3));
    }
    SUBCASE("monotone in the count, proper distribution over v") {
        const auto corpus = corpus_from_sequences(5, {{0, 1, 2, 3, 4, 0, 0}, {2, 2, 1}});
        auto st = init_assignments(corpus, 3, 5);
        for (std::uint32_t c = 0; c < st.k; ++c) {
            double total = 0.0;
            for (VertexId v = 0; v < 5; ++v) total += prob_v_given_c(st, v, c);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
        const double before = prob_v_given_c(st, 0, 1);
        st.vertex_community[0 * st.k + 1] += 1;
        st.community_total[1] += 1;
        CHECK(prob_v_given_c(st, 0, 1) > before);
    }
}

TEST_CASE("prob_c_given_s_stat") {
    SUBCASE("all-zero counts give 1/K") {
        CommunityState st;
        st.k = 4;
        st.alpha = 2.0;
        st.seq_community.assign(4, 0);
        st.seq_total = {0};
        for (std::uint32_t c = 0; c < 4; ++c) CHECK(prob_c_given_s_stat(st, 0, c) == doctest::Approx(0.25));
    }
    SUBCASE("hand arithmetic: K=2, alpha=2, counts (6,0)") {
        CommunityState st;
        st.k = 2;
        st.alpha = 2.0;
        st.seq_community = {6, 0};
        st.seq_total = {6};
        CHECK(prob_c_given_s_stat(st, 0, 0) == doctest::Approx(0.8));  // 8/10
        CHECK(prob_c_given_s_stat(st, 0, 1) == doctest::Approx(0.2));
    }
    SUBCASE("normalizes over c for random states") {
        const auto corpus = corpus_from_sequences(6, {{0, 1, 2, 3}, {4, 5, 0}, {1}});
        const auto st = init_assignments(corpus, 5, 77);
        for (std::size_t s = 0; s < corpus.sequences.size(); ++s) {
            double total = 0.0;
            for (std::uint32_t c = 0; c < st.k; ++c) total += prob_c_given_s_stat(st, s, c);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("prob_c_given_s_emb") {
    EmbeddingModel model;
    model.n = 3;
    model.k = 2;
    model.d_vertex = model.d_community = 1;
    model.vertex_vecs = {1.0, 1.0, 1.0};
    model.context_vecs = {0.0, 0.0, 0.0};

    SUBCASE("identical community vectors give uniform") {
        model.community_vecs = {0.4, 0.4};
        const std::vector<VertexId> seq{0, 1, 2};
        const auto probs = prob_c_given_s_emb(model, seq);
        CHECK(probs[0] == doctest::Approx(0.5));
        CHECK(probs[1] == doctest::Approx(0.5));
    }
    SUBCASE("closed-form softmax: logits (log3, log1) -> (0.75, 0.25)") {
        model.community_vecs = {std::log(3.0), 0.0};
        const std::vector<VertexId> seq{0, 1};
        const auto probs = prob_c_given_s_emb(model, seq);
        CHECK(probs[0] == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(probs[1] == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("adding a constant to all logits leaves the output unchanged") {
        model.community_vecs = {std::log(3.0), 0.0};
        const std::vector<VertexId> seq{0, 1, 2};
        const auto before = prob_c_given_s_emb(model, seq);
        const double kappa = 2.5;
        model.community_vecs = {std::log(3.0) + kappa, kappa};  // shifts both logits by kappa
        const auto after = prob_c_given_s_emb(model, seq);
        CHECK(after[0] == doctest::Approx(before[0]).epsilon(1e-12));
        CHECK(after[1] == doctest::Approx(before[1]).epsilon(1e-12));
    }
    SUBCASE("empty sequence rejected") {
        model.community_vecs = {0.0, 0.0};
        CHECK_THROWS_AS(prob_c_given_s_emb(model, {}), std::invalid_argument);
    }
}

TEST_CASE("prob_v_given_c_emb (expert Eq for the ablation)") {
    EmbeddingModel model;
    model.n = 2;
    model.k = 1;
    model.d_vertex = model.d_community = 1;
    model.context_vecs = {0.0, 0.0};
    model.community_vecs = {1.0};

    SUBCASE("identical vertex vectors give 1/|V|") {
        model.vertex_vecs = {0.3, 0.3};
        CHECK(prob_v_given_c_emb(model, 0, 0) == doctest::Approx(0.5));
    }
    SUBCASE("closed-form softmax: logits (0, ln3) -> (0.25, 0.75)") {
        model.vertex_vecs = {0.0, std::log(3.0)};
        CHECK(prob_v_given_c_emb(model, 0, 0) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(prob_v_given_c_emb(model, 1, 0) == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("sums to one over vertices") {
        model.vertex_vecs = {0.7, -1.2};
        CHECK(prob_v_given_c_emb(model, 0, 0) + prob_v_given_c_emb(model, 1, 0) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gibbs sweeps") {
    SUBCASE("K=1 sweep never changes assignments") {
        const auto corpus = corpus_from_sequences(4, {{0, 1, 2, 3}, {3, 2, 1, 0}});
        auto st = init_assignments(corpus, 1, 2);
        const auto before = st.z;
        Rng rng(5);
        gibbs_sweep(st, corpus, {}, rng);
        CHECK(st.z == before);
        validate_counts(st, corpus);
    }
    SUBCASE("count invariants hold after 100 sweeps on a random corpus") {
        const Graph g = testutil::make_er_graph(25, 60, 17);
        WalkConfig wcfg;
        wcfg.walks_per_vertex = 2;
        wcfg.walk_length = 10;
        wcfg.seed = 3;
        const auto corpus = generate_walks(g, wcfg);
        auto st = init_assignments(corpus, 5, 11);
        Rng rng(23);
        for (int sweep = 0; sweep < 100; ++sweep) gibbs_sweep(st, corpus, {}, rng);
        validate_counts(st, corpus);
        // embedding mode preserves the same invariants
        const auto model = init_model(g.n_vertices(), 5, 8, 8, 77);
        SweepOptions emb;
        emb.mode = AssignMode::embedding;
        emb.model = &model;
        for (int sweep = 0; sweep < 10; ++sweep) gibbs_sweep(st, corpus, emb, rng);
        validate_counts(st, corpus);
    }
    SUBCASE("statistic sweeps with a fixed seed are deterministic") {
        const auto corpus = karate_corpus();
        auto a = init_assignments(corpus, 3, 1);
        auto b = init_assignments(corpus, 3, 1);
        Rng ra(9), rb(9);
        for (int i = 0; i < 3; ++i) {
            gibbs_sweep(a, corpus, {}, ra);
            gibbs_sweep(b, corpus, {}, rb);
        }
        CHECK(a.z == b.z);
    }
}

TEST_CASE("two disjoint cliques separate under statistic sweeps") {
    const Graph g = testutil::make_clique_pair(8);  // vertices 0..7 and 8..15
    WalkConfig wcfg;
    wcfg.walks_per_vertex = 5;
    wcfg.walk_length = 20;

    int successes = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        wcfg.seed = seed;
        const auto corpus = generate_walks(g, wcfg);
        auto st = init_assignments(corpus, 2, seed * 31);
        Rng rng(seed * 7);
        for (int sweep = 0; sweep < 200; ++sweep) gibbs_sweep(st, corpus, {}, rng);

        // majority community per clique from the vertex-community counts
        std::array<std::array<std::int64_t, 2>, 2> clique_counts{{{0, 0}, {0, 0}}};
        for (VertexId v = 0; v < 16; ++v) {
            for (std::uint32_t c = 0; c < 2; ++c) clique_counts[v / 8][c] += st.n_vc(v, c);
        }
        const int majority0 = clique_counts[0][0] >= clique_counts[0][1] ? 0 : 1;
        const int majority1 = clique_counts[1][0] >= clique_counts[1][1] ? 0 : 1;
        const double agree =
            static_cast<double>(clique_counts[0][majority0] + clique_counts[1][majority1]) /
            static_cast<double>(clique_counts[0][0] + clique_counts[0][1] + clique_counts[1][0] +
                                clique_counts[1][1]);
        if (majority0 != majority1 && agree > 0.9) ++successes;

        // representative vertices of each community stay inside one clique
        if (majority0 != majority1) {
            const auto reps = representative_vertices(st, static_cast<std::uint32_t>(majority0), 0.03);
            REQUIRE(!reps.empty());
            for (std::size_t r = 0; r < std::min<std::size_t>(reps.size(), 5); ++r) {
                CHECK(reps[r] / 8 == 0);
            }
        }

        // cross-check: a reference collapsed-Gibbs LDA splits the same corpus
        // the same qualitative way
        testutil::MiniLda lda(corpus, g.n_vertices(), 2, 2.0, 0.5, 150, seed * 13);
        std::array<std::array<long, 2>, 2> lda_counts{{{0, 0}, {0, 0}}};
        for (std::size_t d = 0; d < corpus.sequences.size(); ++d) {
            for (std::size_t i = 0; i < corpus.sequences[d].size(); ++i) {
                ++lda_counts[corpus.sequences[d][i] / 8][lda.assignments[d][i]];
            }
        }
        const int lda_major0 = lda_counts[0][0] >= lda_counts[0][1] ? 0 : 1;
        const int lda_major1 = lda_counts[1][0] >= lda_counts[1][1] ? 0 : 1;
        CHECK(lda_major0 != lda_major1);
    }
    CHECK(successes >= 4);  // allow one mixing failure across seeds
}

TEST_CASE("token resampling frequencies match the normalized product (3 sigma)") {
    const Graph g = testutil::make_er_graph(12, 30, 21);
    WalkConfig wcfg;
    wcfg.walks_per_vertex = 2;
    wcfg.walk_length = 8;
    wcfg.seed = 5;
    const auto corpus = generate_walks(g, wcfg);
    auto st = init_assignments(corpus, 4, 3);
    Rng warm(17);
    for (int i = 0; i < 5; ++i) gibbs_sweep(st, corpus, {}, warm);

    // freeze token (s=0, i=3): expected law is the normalized product of
    // Pr(v|c) and Pr(c|s) with the token's own counts removed
    const std::size_t s = 0, i = 3;
    const VertexId v = corpus.sequences[s][i];
    const std::uint32_t original = st.z[s][i];

    auto minus_token = st;
    minus_token.vertex_community[static_cast<std::size_t>(v) * st.k + original] -= 1;
    minus_token.seq_community[s * st.k + original] -= 1;
    minus_token.community_total[original] -= 1;
    minus_token.seq_total[s] -= 1;
    std::vector<double> expected(st.k);
    double total = 0.0;
    for (std::uint32_t c = 0; c < st.k; ++c) {
        expected[c] = prob_v_given_c(minus_token, v, c) * prob_c_given_s_stat(minus_token, s, c);
        total += expected[c];
    }
    for (double& e : expected) e /= total;

    const std::size_t resamples = 100'000;
    std::vector<std::size_t> counts(st.k, 0);
    Rng rng(99);
    std::vector<double> scratch;
    for (std::size_t r = 0; r < resamples; ++r) {
        const auto c = reassign_token(st, s, i, v, nullptr, nullptr, rng, scratch);
        ++counts[c];
        // put the token back so every resample sees the same conditional
        st.vertex_community[static_cast<std::size_t>(v) * st.k + c] -= 1;
        st.seq_community[s * st.k + c] -= 1;
        st.community_total[c] -= 1;
        st.seq_total[s] -= 1;
        st.vertex_community[static_cast<std::size_t>(v) * st.k + original] += 1;
        st.seq_community[s * st.k + original] += 1;
        st.community_total[original] += 1;
        st.seq_total[s] += 1;
        st.z[s][i] = original;
    }
    validate_counts(st, corpus);
    for (std::uint32_t c = 0; c < st.k; ++c) {
        const double sigma = std::sqrt(expected[c] * (1 - expected[c]) * static_cast<double>(resamples));
        CHECK(std::abs(static_cast<double>(counts[c]) - expected[c] * resamples) <= 3 * sigma);
    }
}

TEST_CASE("community_distribution") {
    SUBCASE("vertex with zero tokens is uniform") {
        const auto corpus = corpus_from_sequences(4, {{0, 1, 0, 1}});  // 2,3 unseen
        const auto st = init_assignments(corpus, 2, 6);
        const auto dist = community_distribution(st, 3);
        CHECK(dist[0] == doctest::Approx(0.5));
        CHECK(dist[1] == doctest::Approx(0.5));
    }
    SUBCASE("hand arithmetic: alpha=2, counts (6,0) -> (0.8, 0.2)") {
        CommunityState st;
        st.k = 2;
        st.n = 1;
        st.alpha = 2.0;
        st.vertex_community = {6, 0};
        st.vertex_tokens = {6};
        const auto dist = community_distribution(st, 0);
        CHECK(dist[0] == doctest::Approx(0.8));
        CHECK(dist[1] == doctest::Approx(0.2));
    }
    SUBCASE("sums to one") {
        const auto corpus = corpus_from_sequences(3, {{0, 1, 2, 0, 1}, {2, 2}});
        const auto st = init_assignments(corpus, 7, 2);
        for (VertexId v = 0; v < 3; ++v) {
            const auto dist = community_distribution(st, v);
            double total = 0.0;
            for (double d : dist) total += d;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("select_communities") {
    CHECK(select_communities(std::vector<double>{0.8, 0.2}, 0.1) == std::vector<std::uint32_t>{0, 1});
    CHECK(select_communities(std::vector<double>{0.95, 0.05}, 0.1) == std::vector<std::uint32_t>{0});
    const std::vector<double> uniform(20, 0.05);
    CHECK(select_communities(uniform, 0.1).empty());
    CHECK_THROWS_AS(select_communities(uniform, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(select_communities(uniform, 1.0), std::invalid_argument);
}

TEST_CASE("representative_vertices thresholds") {
    CommunityState st;
    st.k = 1;
    st.n = 5;
    st.beta = 0.5;
    st.vertex_community.assign(5, 0);
    st.community_total = {0};
    // all-zero counts: every Pr(v|c) = 1/5
    CHECK(representative_vertices(st, 0, 0.25).empty());
    CHECK(representative_vertices(st, 0, 0.1).size() == 5);
    // ordering is by descending probability
    st.vertex_community = {1, 4, 0, 2, 0};
    st.community_total = {7};
    const auto reps = representative_vertices(st, 0, 0.01);
    CHECK(reps[0] == VertexId{1});
    CHECK(reps[1] == VertexId{3});
}

TEST_CASE("state checkpoint round trip rebuilds counts") {
    const auto corpus = karate_corpus();
    auto st = init_assignments(corpus, 4, 8);
    Rng rng(31);
    for (int i = 0; i < 3; ++i) gibbs_sweep(st, corpus, {}, rng);

    std::stringstream buffer;
    save_state(buffer, st);
    const auto loaded = load_state(buffer, corpus);
    CHECK(loaded.z == st.z);
    CHECK(loaded.vertex_community == st.vertex_community);
    CHECK(loaded.seq_community == st.seq_community);
    CHECK(loaded.alpha == st.alpha);

    // wrong corpus is rejected by fingerprint
    WalkConfig other;
    other.seed = 1000;
    static const Graph g = load_edge_list_file(testutil::dataset_path("karate.edges")).graph;
    const auto other_corpus = generate_walks(g, other);
    std::stringstream buffer2;
    save_state(buffer2, st);
    CHECK_THROWS_AS(load_state(buffer2, other_corpus), std::runtime_error);
}
