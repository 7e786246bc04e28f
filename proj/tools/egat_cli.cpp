// Command-line front end: dataset generation, preprocessing, training,
// evaluation, gradient checking, and the edge-attention scaling benchmark.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "egat/bench.hpp"
#include "egat/checkpoint.hpp"
#include "egat/dataset.hpp"
#include "egat/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace egat;

namespace {

constexpr double kGradcheckThreshold = 1e-5;

struct TrainFileConfig {
    ModelConfig model;
    TrainConfig train;
};

/// Config files mix model and optimization keys in one JSON object.
TrainFileConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(std::string("config: parse error: ") + e.what());
    }
    if (!j.is_object()) throw IoError("config: expected a JSON object");
    TrainFileConfig out;
    json model_part = json::object();
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "max_epochs") out.train.max_epochs = value.get<int>();
            else if (key == "patience") out.train.patience = value.get<int>();
            else if (key == "beta1") out.train.beta1 = value.get<double>();
            else if (key == "beta2") out.train.beta2 = value.get<double>();
            else if (key == "adam_eps") out.train.eps = value.get<double>();
            else model_part[key] = value;
        } catch (const json::exception& e) {
            throw IoError("config: ill-typed value for '" + key + "': " + e.what());
        }
    }
    out.model = model_config_from_json(model_part);
    // Unpinned class count defers to the dataset (0 means "resolve later"),
    // so one config file works across binary and ternary data.
    if (!model_part.contains("num_classes")) out.model.num_classes = 0;
    return out;
}

json train_config_to_json(const TrainConfig& tc) {
    return json{{"max_epochs", tc.max_epochs},
                {"patience", tc.patience},
                {"beta1", tc.beta1},
                {"beta2", tc.beta2},
                {"adam_eps", tc.eps}};
}

/// Fills dataset-determined fields and cross-checks any the config pinned.
void resolve_against_data(ModelConfig& cfg, const PreparedData& data) {
    const int in_h = data.node_features.cols();
    const int in_e = data.edge_features.cols();
    if (cfg.in_h == 0) cfg.in_h = in_h;
    if (cfg.in_e == 0) cfg.in_e = in_e;
    if (cfg.in_h != in_h) {
        throw StructuralError("config expects " + std::to_string(cfg.in_h) +
                              " node features but the dataset has " + std::to_string(in_h));
    }
    if (cfg.use_edge_features && cfg.in_e != in_e) {
        throw StructuralError("config expects " + std::to_string(cfg.in_e) +
                              " edge features but the dataset has " + std::to_string(in_e));
    }
    if (cfg.num_classes == 0) cfg.num_classes = data.num_classes;
    if (cfg.num_classes != data.num_classes) {
        throw StructuralError("config expects " + std::to_string(cfg.num_classes) +
                              " classes but the dataset has " + std::to_string(data.num_classes));
    }
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

json run_one_training(const Dataset& dataset, const std::string& data_dir, ModelConfig model_cfg,
                      const TrainConfig& train_cfg, const fs::path& out_dir) {
    const PreparedData data = prepare(dataset);
    resolve_against_data(model_cfg, data);
    Model model = init_model(model_cfg, model_cfg.seed);
    FitResult result = fit(model, data, train_cfg);

    const EvalResult test = evaluate(model, data, data.test_mask);
    json epochs = json::array();
    for (const auto& e : result.history) {
        epochs.push_back(json{{"epoch", e.epoch},
                              {"train_loss", e.train_loss},
                              {"val_loss", e.val_loss},
                              {"val_acc", e.val_acc}});
    }
    json resolved = model_config_to_json(model_cfg);
    resolved.update(train_config_to_json(train_cfg));
    resolved["data"] = data_dir;
    const json metrics{{"epochs", epochs},
                       {"test_acc", test.accuracy},
                       {"config", resolved},
                       {"seed", model_cfg.seed},
                       {"best_epoch", result.best_epoch},
                       {"best_val_loss", result.best_val_loss},
                       {"diverged", result.diverged}};

    fs::create_directories(out_dir);
    write_json_file(out_dir / "metrics.json", metrics);
    write_json_file(out_dir / "config.json", resolved);
    save_checkpoint(model, (out_dir / "model.ckpt").string());
    return metrics;
}

std::vector<std::pair<int, int>> parse_ratios(const std::string& spec) {
    std::vector<std::pair<int, int>> out;
    std::string cur;
    auto flush = [&] {
        const auto colon = cur.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == cur.size()) {
            throw IoError("ratios: expected H:E pairs, got '" + cur + "'");
        }
        out.emplace_back(std::stoi(cur.substr(0, colon)), std::stoi(cur.substr(colon + 1)));
        cur.clear();
    };
    for (char ch : spec) {
        if (ch == ',') flush();
        else cur.push_back(ch);
    }
    if (!cur.empty()) flush();
    if (out.empty()) throw IoError("ratios: empty list");
    return out;
}

json sparse_to_json(const SparseMapping& m) {
    json entries = json::array();
    for (const auto& e : m.entries) {
        if (m.rank() == 2) entries.push_back(json::array({e[0], e[1]}));
        else entries.push_back(json::array({e[0], e[1], e[2]}));
    }
    return json{{"shape", m.shape}, {"entries", entries}};
}

int run_preprocess(const std::string& dir) {
    const Dataset dataset = load_dataset(dir);
    FeatureMatrix edge_feats = dataset.edge_features.cols > 0
                                   ? dataset.edge_features
                                   : synthesize_edge_degree_features(dataset.graph);
    auto [augmented, aug_feats] = add_virtual_self_loops(dataset.graph, edge_feats);
    const GraphStructures gs = build_structures(augmented);
    const json out{{"num_nodes", gs.num_nodes()},
                   {"num_edges_input", dataset.graph.num_edges()},
                   {"num_edges_augmented", gs.num_edges()},
                   {"a_h", sparse_to_json(gs.a_h)},
                   {"m_e", sparse_to_json(gs.m_e)},
                   {"a_e", sparse_to_json(gs.a_e)},
                   {"m_h", sparse_to_json(gs.m_h)}};
    write_json_file(fs::path(dir) / "structures.json", out);
    std::cout << json{{"num_nodes", gs.num_nodes()},
                      {"num_edges_augmented", gs.num_edges()},
                      {"a_h_nnz", gs.a_h.nnz()},
                      {"m_e_nnz", gs.m_e.nnz()},
                      {"a_e_nnz", gs.a_e.nnz()},
                      {"m_h_nnz", gs.m_h.nnz()},
                      {"cached", (fs::path(dir) / "structures.json").string()}}
                     .dump(2)
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-featured graph attention networks"};
    app.require_subcommand(1);

    // preprocess
    std::string pre_dir;
    auto* pre = app.add_subcommand("preprocess", "Build and cache the sparse graph structures");
    pre->add_option("dir", pre_dir, "Dataset directory")->required();

    // generate
    std::string gen_preset, gen_out, gen_mode = "sum";
    unsigned long long gen_seed = 1;
    int gen_nodes = 0, gen_edges = 0, gen_labeled = 0, gen_classes = 0, gen_feat_dim = 0;
    double gen_noise = -1.0;
    bool gen_constant = false;
    auto* gen = app.add_subcommand("generate", "Generate a synthetic trade-network dataset");
    gen->add_option("--preset", gen_preset, "trade-b or trade-m");
    gen->add_option("--seed", gen_seed, "Generation seed");
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--nodes", gen_nodes, "Node count");
    gen->add_option("--edges", gen_edges, "Edge count");
    gen->add_option("--labeled", gen_labeled, "Labeled node count");
    gen->add_option("--classes", gen_classes, "2 or 3");
    gen->add_option("--mode", gen_mode, "Edge signal aggregation: sum, mean, or max");
    gen->add_option("--label-noise", gen_noise, "Fraction of labeled nodes flipped");
    gen->add_option("--node-feat-dim", gen_feat_dim, "Node feature dimension");
    gen->add_flag("--constant-node-features", gen_constant,
                  "All-equal node features (edge-sensitivity fixture)");

    // train
    std::string train_data, train_config, train_out, train_ratios;
    long long train_seed = -1;
    auto* train = app.add_subcommand("train", "Train a model and write a run directory");
    train->add_option("--data", train_data, "Dataset directory")->required();
    train->add_option("--config", train_config, "JSON config file")->required();
    train->add_option("--out", train_out, "Run directory")->required();
    train->add_option("--ratios", train_ratios,
                      "Comma-separated F_H':F_E' pairs (e.g. 8:4,6:6,4:8); one run each");
    train->add_option("--seed", train_seed, "Overrides the config seed");

    // eval
    std::string eval_ckpt, eval_data, eval_mask = "test";
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
    eval_cmd->add_option("--data", eval_data, "Dataset directory")->required();
    eval_cmd->add_option("--mask", eval_mask, "train, val, or test");

    // gradcheck
    std::string gc_data, gc_config;
    double gc_eps = 1e-5;
    int gc_max_coords = -1;
    auto* gc = app.add_subcommand("gradcheck", "Finite-difference check of the full model");
    gc->add_option("--data", gc_data, "Dataset directory")->required();
    gc->add_option("--config", gc_config, "JSON config file")->required();
    gc->add_option("--eps", gc_eps, "Central-difference step");
    gc->add_option("--max-coords", gc_max_coords, "Probed coordinates per parameter (-1: all)");

    // benchmark
    std::vector<int> bench_degrees{20, 40, 80};
    int bench_feat = 256, bench_reps = 40;
    auto* bench = app.add_subcommand("benchmark",
                                     "Time edge attention on star graphs and fit the exponent");
    bench->add_option("--degrees", bench_degrees, "Hub degrees to time")->delimiter(',');
    bench->add_option("--feat-dim", bench_feat, "Transformed feature width");
    bench->add_option("--min-repeats", bench_reps, "Repeats at the largest degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // prints usage; non-zero on error
    }

    try {
        if (*pre) return run_preprocess(pre_dir);

        if (*gen) {
            TradeGenConfig cfg = gen_preset.empty() ? TradeGenConfig{} : preset_by_name(gen_preset);
            if (gen_nodes > 0) cfg.n_nodes = gen_nodes;
            if (gen_edges > 0) cfg.n_edges = gen_edges;
            if (gen_labeled > 0) cfg.n_labeled = gen_labeled;
            if (gen_classes > 0) cfg.classes = gen_classes;
            if (gen->count("--mode") > 0) cfg.edge_signal_mode = edge_signal_mode_from_name(gen_mode);
            if (gen_noise >= 0.0) cfg.label_noise = gen_noise;
            if (gen_feat_dim > 0) cfg.node_feat_dim = gen_feat_dim;
            cfg.constant_node_features = gen_constant;
            cfg.seed = gen_seed;
            Dataset d = generate_synthetic_trade(cfg);
            if (!gen_preset.empty()) d.name = gen_preset;
            save_dataset(d, gen_out);
            std::cout << json{{"out", gen_out},
                              {"nodes", d.graph.num_nodes},
                              {"edges", d.graph.num_edges()},
                              {"labeled", d.labeled_nodes().size()},
                              {"classes", d.num_classes}}
                             .dump(2)
                      << '\n';
            return 0;
        }

        if (*train) {
            const Dataset dataset = load_dataset(train_data);
            TrainFileConfig cfg = read_config_file(train_config);
            if (train_seed >= 0) cfg.model.seed = static_cast<unsigned long long>(train_seed);
            if (train_ratios.empty()) {
                const json metrics =
                    run_one_training(dataset, train_data, cfg.model, cfg.train, train_out);
                std::cout << json{{"out", train_out}, {"test_acc", metrics["test_acc"]}}.dump(2)
                          << '\n';
                return 0;
            }
            json summary = json::array();
            for (const auto& [h, e] : parse_ratios(train_ratios)) {
                ModelConfig mc = cfg.model;
                mc.hidden_h = h;
                mc.hidden_e = e;
                const fs::path sub = fs::path(train_out) /
                                     ("ratio_" + std::to_string(h) + "_" + std::to_string(e));
                const json metrics = run_one_training(dataset, train_data, mc, cfg.train, sub);
                summary.push_back(json{{"ratio", std::to_string(h) + ":" + std::to_string(e)},
                                       {"out", sub.string()},
                                       {"test_acc", metrics["test_acc"]}});
            }
            fs::create_directories(train_out);
            write_json_file(fs::path(train_out) / "summary.json", summary);
            std::cout << summary.dump(2) << '\n';
            return 0;
        }

        if (*eval_cmd) {
            const Model model = load_checkpoint(eval_ckpt);
            const Dataset dataset = load_dataset(eval_data);
            const PreparedData data = prepare(dataset);
            ModelConfig check = model.config;
            resolve_against_data(check, data);
            const std::vector<int>& mask = eval_mask == "train" ? data.train_mask
                                           : eval_mask == "val" ? data.val_mask
                                                                : data.test_mask;
            if (eval_mask != "train" && eval_mask != "val" && eval_mask != "test") {
                throw IoError("eval: unknown mask '" + eval_mask + "'");
            }
            const EvalResult r = evaluate(model, data, mask);
            std::cout << json{{"accuracy", r.accuracy},
                              {"loss", r.loss},
                              {"mask", eval_mask},
                              {"nodes", mask.size()}}
                             .dump(2)
                      << '\n';
            return 0;
        }

        if (*gc) {
            const Dataset dataset = load_dataset(gc_data);
            const PreparedData data = prepare(dataset);
            TrainFileConfig cfg = read_config_file(gc_config);
            resolve_against_data(cfg.model, data);
            cfg.model.dropout = 0.0;  // the check needs a deterministic loss
            cfg.model.attn_dropout = 0.0;
            Model model = init_model(cfg.model, cfg.model.seed);
            const auto params = model.parameters();
            ad::Tape tape;
            Rng coord_rng(cfg.model.seed);
            const double max_rel = ad::finite_diff_check(
                tape,
                [&](ad::Tape& t) {
                    ForwardOutput fwd = model_forward(t, model, data.structures,
                                                      data.node_features, data.edge_features);
                    return masked_loss(t, fwd.logits, data.labels, data.train_mask,
                                       model.config.l2, params);
                },
                params, gc_eps, gc_max_coords, &coord_rng);
            std::cout << json{{"max_rel_error", max_rel},
                              {"threshold", kGradcheckThreshold},
                              {"eps", gc_eps}}
                             .dump(2)
                      << '\n';
            return max_rel < kGradcheckThreshold ? 0 : 1;
        }

        if (*bench) {
            const BenchResult r = benchmark_edge_attention(bench_degrees, bench_feat, bench_reps);
            json points = json::array();
            for (const auto& p : r.points) {
                points.push_back(json{{"degree", p.degree},
                                      {"sum_deg_sq", p.sum_deg_sq},
                                      {"slots", p.slots},
                                      {"seconds", p.seconds}});
            }
            std::cout << json{{"points", points}, {"gamma", r.gamma}}.dump(2) << '\n';
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;  // unreachable: a subcommand is required
}
