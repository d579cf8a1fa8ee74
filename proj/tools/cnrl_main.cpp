// cnrl — community-enhanced network representation learning toolkit.
//
// Subcommands wire ingestion -> walks -> community warm-up -> joint training
// -> export/evaluation. Every run is reproducible from (input, config); the
// effective config and its hash are echoed to run_config.txt, and metric
// records carry the hash.
//
// Exit codes: 0 success, 2 usage, 3 io, 4 data, 5 internal. Errors print as
//   cnrl: error [category]: message

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "cnrl/classifier.hpp"
#include "cnrl/community.hpp"
#include "cnrl/embedding.hpp"
#include "cnrl/eval.hpp"
#include "cnrl/graph.hpp"
#include "cnrl/io.hpp"
#include "cnrl/pipeline.hpp"
#include "cnrl/trainer.hpp"
#include "cnrl/walker.hpp"

namespace {

using namespace cnrl;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string input;
    std::string labels_path;
    bool directed = false;
    bool weighted = false;
    std::string comment_prefix = "#";
    std::string out_dir = "cnrl-out";
    std::uint32_t n_seeds = 1;
    RunConfig run;
    std::string strategy_name = "uniform";
    std::string mode_name = "s";
};

void add_graph_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--input", opt.input, "edge list file (`src dst [weight]`)")->required();
    cmd->add_flag("--directed", opt.directed, "treat edges as directed");
    cmd->add_flag("--weighted", opt.weighted, "parse an optional third weight column");
    cmd->add_option("--comment", opt.comment_prefix, "comment line prefix (default '#')");
}

void add_walk_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--strategy", opt.strategy_name, "uniform|biased")
        ->check(CLI::IsMember({"uniform", "biased"}));
    cmd->add_option("--p", opt.run.p, "biased walk return parameter");
    cmd->add_option("--q", opt.run.q, "biased walk in-out parameter");
    cmd->add_option("--walks", opt.run.walks_per_vertex, "walks per vertex");
    cmd->add_option("--walk-length", opt.run.walk_length, "tokens per walk");
}

void add_train_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--communities", opt.run.communities, "community count K");
    cmd->add_option("--mode", opt.mode_name, "community assignment: s (statistic) or e (embedding)")
        ->check(CLI::IsMember({"s", "e"}));
    cmd->add_option("--alpha", opt.run.alpha, "sequence-community smoothing");
    cmd->add_option("--beta", opt.run.beta, "vertex-community smoothing");
    cmd->add_option("--warmup", opt.run.warmup_loops, "warm-up Gibbs sweeps L");
    cmd->add_option("--window", opt.run.window, "context window t");
    cmd->add_option("--dim-vertex", opt.run.d_vertex, "vertex embedding dimension");
    cmd->add_option("--dim-community", opt.run.d_community, "community embedding dimension");
    cmd->add_option("--negatives", opt.run.negatives, "negative samples per context pair");
    cmd->add_option("--lr", opt.run.learning_rate, "initial learning rate");
    cmd->add_option("--epochs", opt.run.epochs, "joint training epochs");
    cmd->add_option("--pretrain-epochs", opt.run.pretrain_epochs, "skip-gram initialization epochs");
    cmd->add_flag("--init-context-zero", opt.run.init_context_zero, "start context vectors at zero");
    cmd->add_flag_callback(
           "--freeze-community-context", [&opt]() { opt.run.community_writes_context = false; },
           "expert: community-side SGD stops writing the shared context table")
        ->group("");
}

void add_common_tail(CLI::App* cmd, CommonOptions& opt, bool with_seeds = true) {
    cmd->add_option("--tau", opt.run.tau, "community membership threshold");
    cmd->add_option("--eta", opt.run.eta, "representative vertex threshold");
    cmd->add_option("--seed", opt.run.seed, "master seed");
    if (with_seeds) cmd->add_option("--seeds", opt.n_seeds, "number of consecutive seeds to aggregate");
    cmd->add_option("--workers", opt.run.workers, "worker threads");
    cmd->add_option("--out-dir", opt.out_dir, "artifact directory");
    cmd->set_config("--config", "", "flat `key = value` config file (flags override)");
}

void finalize(CommonOptions& opt) {
    opt.run.strategy = opt.strategy_name == "biased" ? WalkStrategy::biased : WalkStrategy::uniform;
    opt.run.mode = opt.mode_name == "e" ? AssignMode::embedding : AssignMode::statistic;
}

Graph load_graph(const CommonOptions& opt) {
    if (!std::filesystem::exists(opt.input)) throw IoError("input file not found: " + opt.input);
    EdgeListOptions elo;
    elo.directed = opt.directed;
    elo.weighted = opt.weighted;
    elo.comment_prefix = opt.comment_prefix;
    auto result = load_edge_list_file(opt.input, elo);
    std::cerr << "loaded " << opt.input << ": " << result.graph.n_vertices() << " vertices, "
              << result.graph.n_edges() << (opt.directed ? " arcs" : " edges");
    if (result.report.duplicates_merged) std::cerr << ", " << result.report.duplicates_merged << " duplicates merged";
    if (result.report.self_loops_dropped) std::cerr << ", " << result.report.self_loops_dropped << " self-loops dropped";
    std::cerr << '\n';
    return std::move(result.graph);
}

LabelMap load_label_map(const CommonOptions& opt, const Graph& g) {
    if (opt.labels_path.empty()) throw IoError("this command requires --labels");
    if (!std::filesystem::exists(opt.labels_path)) throw IoError("label file not found: " + opt.labels_path);
    return load_labels_file(opt.labels_path, g);
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

void write_run_config(const CommonOptions& opt) {
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(opt.run.hash()));
    const std::string body = opt.run.serialize() + "hash = " + hex + "\n";
    write_file_atomic(opt.out_dir + "/run_config.txt", [&](std::ostream& out) { out << body; });
}

void emit_metrics(const CommonOptions& opt, const std::vector<MetricReport>& reports) {
    write_metrics(std::cout, reports);
    // Aggregate across seeds per (task, metric).
    if (opt.n_seeds > 1) {
        std::map<std::pair<std::string, std::string>, std::vector<double>> grouped;
        for (const auto& r : reports) grouped[{r.task, r.metric}].push_back(r.value);
        char buf[96];
        for (const auto& [key, values] : grouped) {
            const auto agg = aggregate(values);
            std::snprintf(buf, sizeof(buf), "%.6g %.6g", agg.mean, agg.stddev);
            std::cout << "# aggregate " << key.first << ' ' << key.second << ' ' << buf << " n=" << agg.count
                      << '\n';
        }
    }
    ensure_out_dir(opt.out_dir);
    write_file_atomic(opt.out_dir + "/metrics.txt", [&](std::ostream& out) {
        write_metrics(out, reports);
    });
}

// ---------------------------------------------------------------- walk ----

int cmd_walk(CommonOptions& opt, const std::string& out_path) {
    finalize(opt);
    const Graph g = load_graph(opt);
    const WalkCorpus corpus = generate_walks(g, opt.run.walk_config(), opt.run.workers);
    ensure_out_dir(opt.out_dir);
    const std::string path = out_path.empty() ? opt.out_dir + "/walks.txt" : out_path;
    write_file_atomic(path, [&](std::ostream& out) { corpus.save(out); });
    write_run_config(opt);
    std::cerr << "wrote " << corpus.sequences.size() << " sequences (" << corpus.total_tokens()
              << " tokens) to " << path << '\n';
    return 0;
}

// --------------------------------------------------------------- train ----

int cmd_train(CommonOptions& opt, const std::string& corpus_path) {
    finalize(opt);
    const Graph g = load_graph(opt);
    if (opt.run.mode == AssignMode::embedding && opt.run.d_vertex != opt.run.d_community) {
        throw std::invalid_argument("embedding mode requires --dim-vertex == --dim-community");
    }

    TrainArtifacts art;
    if (!corpus_path.empty()) {
        if (!std::filesystem::exists(corpus_path)) throw IoError("corpus file not found: " + corpus_path);
        std::ifstream in(corpus_path);
        WalkCorpus corpus = WalkCorpus::load(in);
        if (corpus.graph_fingerprint != g.fingerprint()) {
            throw std::invalid_argument("corpus was generated for a different graph (fingerprint mismatch)");
        }
        art = run_training(g, opt.run, std::move(corpus));
    } else {
        art = run_training(g, opt.run);
    }

    ensure_out_dir(opt.out_dir);
    const std::uint64_t hash = opt.run.hash();
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));

    write_file_atomic(opt.out_dir + "/embeddings.txt", [&](std::ostream& out) {
        write_embeddings(out, g.names(), art.model.vertex_vecs, art.model.d_vertex);
    });
    write_file_atomic(opt.out_dir + "/enhanced.txt", [&](std::ostream& out) {
        write_embeddings(out, g.names(), art.enhanced.data, art.enhanced.dim);
    });
    write_file_atomic(opt.out_dir + "/communities.txt", [&](std::ostream& out) {
        out << "# config=" << hex << " tau=" << opt.run.tau << '\n';
        char buf[32];
        for (VertexId v = 0; v < g.n_vertices(); ++v) {
            const auto dist = community_distribution(art.state, v);
            out << g.name_of(v);
            for (std::uint32_t c : select_communities(dist, opt.run.tau)) {
                std::snprintf(buf, sizeof(buf), "%.6g", dist[c]);
                out << ' ' << c << ':' << buf;
            }
            out << '\n';
        }
    });
    write_file_atomic(opt.out_dir + "/model.bin",
                      [&](std::ostream& out) { save_model(out, art.model, hash); });
    write_file_atomic(opt.out_dir + "/state.bin", [&](std::ostream& out) { save_state(out, art.state); });
    write_run_config(opt);

    char loss[32];
    std::snprintf(loss, sizeof(loss), "%.4f", art.stats.average_loss);
    std::cerr << "trained " << (opt.run.mode == AssignMode::embedding ? "E" : "S") << "-mode, K="
              << opt.run.communities << ": final avg loss " << loss << ", artifacts in " << opt.out_dir << '\n';
    return 0;
}

// ------------------------------------------------------- eval-classify ----

std::vector<double> embedding_features(const Graph& g, const LoadedEmbeddings& emb) {
    std::unordered_map<std::string, std::size_t> row_of;
    row_of.reserve(emb.names.size());
    for (std::size_t i = 0; i < emb.names.size(); ++i) row_of.emplace(emb.names[i], i);
    std::vector<double> features(g.n_vertices() * emb.dim, 0.0);
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        auto it = row_of.find(g.name_of(v));
        if (it == row_of.end()) throw std::invalid_argument("embeddings missing vertex '" + g.name_of(v) + "'");
        const auto row = emb.row(it->second);
        std::copy(row.begin(), row.end(), features.begin() + static_cast<std::size_t>(v) * emb.dim);
    }
    return features;
}

int cmd_eval_classify(CommonOptions& opt, const std::string& embeddings_path,
                      std::vector<double>& ratios) {
    finalize(opt);
    const Graph g = load_graph(opt);
    const LabelMap labels = load_label_map(opt, g);
    if (!std::filesystem::exists(embeddings_path)) throw IoError("embeddings file not found: " + embeddings_path);
    const LoadedEmbeddings emb = read_embeddings_file(embeddings_path);
    const auto features = embedding_features(g, emb);

    if (ratios.empty()) ratios = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<std::vector<int>> label_rows(g.n_vertices());
    for (VertexId v = 0; v < g.n_vertices(); ++v) label_rows[v] = labels.labels(v);
    const bool multi = labels.multi_label();
    const std::uint64_t hash = opt.run.hash();

    std::vector<MetricReport> reports;
    for (std::uint32_t s = 0; s < opt.n_seeds; ++s) {
        const std::uint64_t seed = opt.run.seed + s;
        for (double ratio : ratios) {
            const auto split = split_labeled_vertices(g, labels, ratio, seed);
            std::vector<std::size_t> train_rows(split.train.begin(), split.train.end());
            std::vector<std::size_t> test_rows(split.test.begin(), split.test.end());
            LogRegConfig lrc;
            lrc.lambda = opt.run.lambda;
            const auto clf = OneVsRestClassifier::train(features, g.n_vertices(), emb.dim, label_rows,
                                                        static_cast<int>(labels.n_labels()), lrc);
            const double score = multi ? micro_f1(clf, features, emb.dim, test_rows, label_rows)
                                       : accuracy(clf, features, emb.dim, test_rows, label_rows);
            char metric[48];
            std::snprintf(metric, sizeof(metric), "%s@%.2f", multi ? "micro-f1" : "accuracy", ratio);
            reports.push_back({"classify", metric, score, seed, hash});
        }
    }
    emit_metrics(opt, reports);
    return 0;
}

// ------------------------------------------------------- eval-linkpred ----

int cmd_eval_linkpred(CommonOptions& opt, std::vector<double>& ratios, std::vector<std::string>& methods) {
    finalize(opt);
    const Graph g = load_graph(opt);
    if (ratios.empty()) ratios = {opt.run.removal_ratio};
    if (methods.empty()) methods = {"cnrl", "deepwalk", "cn", "salton", "jaccard", "ra"};
    const std::uint64_t hash = opt.run.hash();

    std::vector<MetricReport> reports;
    for (std::uint32_t s = 0; s < opt.n_seeds; ++s) {
        const std::uint64_t seed = opt.run.seed + s;
        for (double rho : ratios) {
            const EdgeSplit split = split_edges(g, rho, seed);
            auto heuristic_scores = [&](auto&& fn) {
                std::pair<std::vector<double>, std::vector<double>> out;
                for (const auto& [u, v] : split.removed) out.first.push_back(fn(split.retained, u, v));
                for (const auto& [u, v] : split.negatives) out.second.push_back(fn(split.retained, u, v));
                return out;
            };
            RunConfig run = opt.run;
            run.seed = seed;

            WalkCorpus shared_corpus;
            bool have_corpus = false;
            auto corpus_for_retained = [&]() -> const WalkCorpus& {
                if (!have_corpus) {
                    shared_corpus = generate_walks(split.retained, run.walk_config(), run.workers);
                    have_corpus = true;
                }
                return shared_corpus;
            };

            for (const auto& method : methods) {
                std::vector<double> pos, neg;
                if (method == "cn") std::tie(pos, neg) = heuristic_scores(cn_score);
                else if (method == "salton") std::tie(pos, neg) = heuristic_scores(salton_score);
                else if (method == "jaccard") std::tie(pos, neg) = heuristic_scores(jaccard_score);
                else if (method == "ra") std::tie(pos, neg) = heuristic_scores(ra_score);
                else if (method == "cnrl") {
                    const auto art = run_training(split.retained, run, corpus_for_retained());
                    const auto& e = art.enhanced;
                    for (const auto& [u, v] : split.removed) {
                        pos.push_back(cosine_similarity({e.row(u), e.dim}, {e.row(v), e.dim}));
                    }
                    for (const auto& [u, v] : split.negatives) {
                        neg.push_back(cosine_similarity({e.row(u), e.dim}, {e.row(v), e.dim}));
                    }
                } else if (method == "deepwalk") {
                    // Capacity-matched plain run: d_vertex + d_community dims.
                    RunConfig plain = run;
                    plain.d_vertex = run.d_vertex + run.d_community;
                    const auto model = run_plain(split.retained, plain, &corpus_for_retained());
                    const std::size_t d = model.d_vertex;
                    auto row = [&](VertexId v) {
                        return std::span<const double>(model.vertex(v), d);
                    };
                    for (const auto& [u, v] : split.removed) pos.push_back(cosine_similarity(row(u), row(v)));
                    for (const auto& [u, v] : split.negatives) neg.push_back(cosine_similarity(row(u), row(v)));
                } else {
                    throw std::invalid_argument("unknown method '" + method + "'");
                }
                char metric[64];
                std::snprintf(metric, sizeof(metric), "auc:%s@%.2f", method.c_str(), rho);
                reports.push_back({"linkpred", metric, auc(pos, neg, seed), seed, hash});
            }
        }
    }
    emit_metrics(opt, reports);
    return 0;
}

// ------------------------------------------------------ eval-community ----

std::vector<std::vector<VertexId>> read_communities_file(const std::string& path, const Graph& g) {
    if (!std::filesystem::exists(path)) throw IoError("communities file not found: " + path);
    std::ifstream in(path);
    std::vector<std::vector<VertexId>> communities;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string name, entry;
        ls >> name;
        const auto id = g.id_of(name);
        if (!id) throw std::invalid_argument("communities file line " + std::to_string(line_no) +
                                             ": unknown vertex '" + name + "'");
        while (ls >> entry) {
            const auto colon = entry.find(':');
            const auto c = static_cast<std::size_t>(std::stoul(entry.substr(0, colon)));
            if (communities.size() <= c) communities.resize(c + 1);
            communities[c].push_back(*id);
        }
    }
    return communities;
}

int cmd_eval_community(CommonOptions& opt, const std::string& communities_path, bool random_baseline) {
    finalize(opt);
    const Graph g = load_graph(opt);
    const std::uint64_t hash = opt.run.hash();
    std::vector<MetricReport> reports;

    if (!communities_path.empty()) {
        auto communities = read_communities_file(communities_path, g);
        communities.erase(std::remove_if(communities.begin(), communities.end(),
                                         [](const auto& c) { return c.empty(); }),
                          communities.end());
        reports.push_back({"community", "modified-modularity", modified_modularity(g, communities),
                           opt.run.seed, hash});
    }
    if (random_baseline) {
        for (std::uint32_t s = 0; s < opt.n_seeds; ++s) {
            const std::uint64_t seed = opt.run.seed + s;
            Rng rng(derive_seed(seed, 0xBA5E));
            std::vector<std::vector<VertexId>> communities(opt.run.communities);
            std::vector<double> dist(opt.run.communities);
            for (VertexId v = 0; v < g.n_vertices(); ++v) {
                // Dirichlet(1) membership via normalized exponentials.
                double total = 0.0;
                for (double& x : dist) {
                    x = -std::log(std::max(rng.next_double(), 1e-300));
                    total += x;
                }
                for (std::size_t c = 0; c < dist.size(); ++c) {
                    if (dist[c] / total > opt.run.tau) communities[c].push_back(v);
                }
            }
            communities.erase(std::remove_if(communities.begin(), communities.end(),
                                             [](const auto& c) { return c.empty(); }),
                              communities.end());
            reports.push_back({"community", "modified-modularity:random", modified_modularity(g, communities),
                               seed, hash});
        }
    }
    if (reports.empty()) throw std::invalid_argument("eval-community: pass --communities-file and/or --random-baseline");
    emit_metrics(opt, reports);
    return 0;
}

// ----------------------------------------------------------- neighbors ----

int cmd_neighbors(const std::string& embeddings_path, const std::string& vertex, std::size_t k) {
    if (!std::filesystem::exists(embeddings_path)) throw IoError("embeddings file not found: " + embeddings_path);
    const LoadedEmbeddings emb = read_embeddings_file(embeddings_path);
    std::size_t query = emb.names.size();
    for (std::size_t i = 0; i < emb.names.size(); ++i) {
        if (emb.names[i] == vertex) {
            query = i;
            break;
        }
    }
    if (query == emb.names.size()) throw std::invalid_argument("vertex '" + vertex + "' not in embeddings");
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < emb.names.size(); ++i) {
        if (i == query) continue;
        scored.emplace_back(-cosine_similarity(emb.row(query), emb.row(i)), i);
    }
    std::sort(scored.begin(), scored.end());
    char buf[32];
    for (std::size_t r = 0; r < std::min(k, scored.size()); ++r) {
        std::snprintf(buf, sizeof(buf), "%.6g", -scored[r].first);
        std::cout << r + 1 << ' ' << emb.names[scored[r].second] << ' ' << buf << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cnrl: community-enhanced network representation learning"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string out_path, corpus_path, embeddings_path, communities_path, vertex_name;
    std::vector<double> ratios;
    std::vector<std::string> methods;
    std::size_t k_neighbors = 5;
    bool random_baseline = false;

    auto* walk = app.add_subcommand("walk", "generate a random-walk corpus");
    add_graph_flags(walk, opt);
    add_walk_flags(walk, opt);
    add_common_tail(walk, opt, false);
    walk->add_option("--out", out_path, "corpus output path (default <out-dir>/walks.txt)");

    auto* train = app.add_subcommand("train", "run the full training pipeline and export artifacts");
    add_graph_flags(train, opt);
    add_walk_flags(train, opt);
    add_train_flags(train, opt);
    add_common_tail(train, opt, false);
    train->add_option("--corpus", corpus_path, "reuse a corpus file instead of walking");

    auto* classify = app.add_subcommand("eval-classify", "vertex classification over training ratios");
    add_graph_flags(classify, opt);
    classify->add_option("--labels", opt.labels_path, "label file (`vertex label...`)")->required();
    classify->add_option("--embeddings", embeddings_path, "embedding file to evaluate")->required();
    classify->add_option("--train-ratio", ratios, "training ratio(s); default 0.1..0.9");
    classify->add_option("--lambda", opt.run.lambda, "L2 penalty");
    add_common_tail(classify, opt);

    auto* linkpred = app.add_subcommand("eval-linkpred", "link prediction AUC for heuristics and embeddings");
    add_graph_flags(linkpred, opt);
    add_walk_flags(linkpred, opt);
    add_train_flags(linkpred, opt);
    linkpred->add_option("--removal-ratio", ratios, "edge removal ratio(s)");
    linkpred->add_option("--methods", methods, "subset of cnrl,deepwalk,cn,salton,jaccard,ra")->delimiter(',');
    add_common_tail(linkpred, opt);

    auto* community = app.add_subcommand("eval-community", "overlapping community quality");
    add_graph_flags(community, opt);
    community->add_option("--communities-file", communities_path, "communities export from `train`");
    community->add_flag("--random-baseline", random_baseline, "score random Dirichlet memberships with same K, tau");
    community->add_option("--communities", opt.run.communities, "K for the random baseline");
    community->add_option("--tau", opt.run.tau, "membership threshold for the random baseline");
    community->add_option("--seed", opt.run.seed, "master seed");
    community->add_option("--seeds", opt.n_seeds, "number of consecutive seeds");
    community->add_option("--out-dir", opt.out_dir, "artifact directory");

    auto* neighbors = app.add_subcommand("neighbors", "top-k nearest vertices by cosine similarity");
    neighbors->add_option("--embeddings", embeddings_path, "embedding file")->required();
    neighbors->add_option("--vertex", vertex_name, "query vertex name")->required();
    neighbors->add_option("--k", k_neighbors, "neighbor count");

    try {
        app.parse(argc, argv);
        if (walk->parsed()) return cmd_walk(opt, out_path);
        if (train->parsed()) return cmd_train(opt, corpus_path);
        if (classify->parsed()) return cmd_eval_classify(opt, embeddings_path, ratios);
        if (linkpred->parsed()) return cmd_eval_linkpred(opt, ratios, methods);
        if (community->parsed()) return cmd_eval_community(opt, communities_path, random_baseline);
        if (neighbors->parsed()) return cmd_neighbors(embeddings_path, vertex_name, k_neighbors);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        if (rc == 0) return 0;
        std::cerr << "cnrl: error [usage]: see --help\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "cnrl: error [io]: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "cnrl: error [data]: " << e.what() << '\n';
        return 4;
    } catch (const std::out_of_range& e) {
        std::cerr << "cnrl: error [data]: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "cnrl: error [internal]: " << e.what() << '\n';
        return 5;
    }
}
