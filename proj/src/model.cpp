#include "egat/model.hpp"

#include <cmath>

namespace egat {

namespace {

using ad::Tape;
using ad::Tensor;

Tensor glorot(int rows, int cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::vector<double> vals(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (auto& v : vals) v = (2.0 * rng.uniform() - 1.0) * limit;
    return Tensor::from_values(rows, cols, std::move(vals), /*requires_grad=*/true);
}

} // namespace

void ModelConfig::validate() const {
    if (num_layers < 1) throw StructuralError("ModelConfig: L must be >= 1");
    if (num_heads < 1) throw StructuralError("ModelConfig: K must be >= 1");
    if (num_classes < 2) throw StructuralError("ModelConfig: C must be >= 2");
    if (hidden_h < 1) throw StructuralError("ModelConfig: F_H_out must be >= 1");
    if (use_edge_features && hidden_e < 1) throw StructuralError("ModelConfig: F_E_out must be >= 1");
    if (in_h < 1) throw StructuralError("ModelConfig: input node feature dim not set");
    if (use_edge_features && in_e < 1) {
        throw StructuralError("ModelConfig: input edge feature dim not set");
    }
    if (dropout < 0.0 || dropout >= 1.0 || attn_dropout < 0.0 || attn_dropout >= 1.0) {
        throw StructuralError("ModelConfig: dropout rates must lie in [0, 1)");
    }
    if (lr <= 0.0) throw StructuralError("ModelConfig: lr must be positive");
    if (l2 < 0.0) throw StructuralError("ModelConfig: l2 must be non-negative");
    ad::activation_from_name(sigma);  // throws on unknown names
}

int ModelConfig::merged_dim() const {
    const int per_layer = hidden_h + (use_edge_features ? hidden_e : 0);
    return num_heads * num_layers * per_layer;
}

std::vector<ad::Tensor> Model::parameters() const {
    std::vector<ad::Tensor> out;
    for (const auto& p : layers) {
        out.push_back(p.w_h);
        if (p.w_e.defined()) out.push_back(p.w_e);
        out.push_back(p.a);
        if (p.b.defined()) out.push_back(p.b);
    }
    out.push_back(classifier);
    return out;
}

Model init_model(const ModelConfig& config, unsigned long long seed) {
    config.validate();
    Model m;
    m.config = config;
    Rng rng(seed);
    const int fh = config.hidden_h, fe = config.hidden_e;
    for (int k = 0; k < config.num_heads; ++k) {
        for (int l = 0; l < config.num_layers; ++l) {
            EgatLayerParams p;
            const int in_h = (l == 0) ? config.in_h : fh;
            p.w_h = glorot(in_h, fh, rng);
            if (config.use_edge_features) {
                const int in_e = (l == 0) ? config.in_e : fe;
                p.w_e = glorot(in_e, fe, rng);
                p.a = glorot(2 * fh + fe, 1, rng);
                p.b = glorot(2 * fe + fh, 1, rng);
            } else {
                p.a = glorot(2 * fh, 1, rng);
            }
            m.layers.push_back(std::move(p));
        }
    }
    m.classifier = glorot(config.merged_dim(), config.num_classes, rng);
    return m;
}

ForwardOutput model_forward(Tape& tape, const Model& model, const GraphStructures& gs,
                            const Tensor& h0, const Tensor& e0, bool training, Rng* rng) {
    const ModelConfig& cfg = model.config;
    if (h0.cols() != cfg.in_h) {
        throw StructuralError("model_forward: node feature dim does not match the config");
    }
    if (cfg.use_edge_features && e0.cols() != cfg.in_e) {
        throw StructuralError("model_forward: edge feature dim does not match the config");
    }
    const bool drop = training && cfg.dropout > 0.0;
    if (training && (cfg.dropout > 0.0 || cfg.attn_dropout > 0.0) && rng == nullptr) {
        throw StructuralError("model_forward: training with dropout needs an rng");
    }

    LayerOptions options;
    options.sigma = ad::activation_from_name(cfg.sigma);
    options.leaky_slope = cfg.leaky_slope;
    options.attn_dropout = cfg.attn_dropout;
    options.training = training;
    options.include_edges = cfg.use_edge_features;

    ForwardOutput out;
    std::vector<Tensor> merged_parts;
    merged_parts.reserve(static_cast<std::size_t>(cfg.num_heads) * cfg.num_layers);
    for (int k = 0; k < cfg.num_heads; ++k) {
        Tensor h = h0;
        Tensor e = e0;
        for (int l = 0; l < cfg.num_layers; ++l) {
            Tensor h_in = drop ? ad::dropout(tape, h, cfg.dropout, *rng) : h;
            Tensor e_in = (cfg.use_edge_features && drop) ? ad::dropout(tape, e, cfg.dropout, *rng)
                                                          : e;
            LayerOutput lo =
                egat_layer_forward(tape, gs, h_in, e_in, model.layer(k, l), options, rng);
            merged_parts.push_back(lo.h_merged);
            out.alphas.push_back(lo.alpha);
            if (lo.beta.defined()) out.betas.push_back(lo.beta);
            h = lo.h_prime;
            if (cfg.use_edge_features) e = lo.e_prime;
        }
    }
    out.merged = ad::concat_cols(tape, merged_parts);
    if (out.merged.cols() != cfg.merged_dim()) {
        throw StructuralError("model_forward: merged width disagrees with the config");
    }
    Tensor pre = drop ? ad::dropout(tape, out.merged, cfg.dropout, *rng) : out.merged;
    out.logits = ad::matmul(tape, pre, model.classifier);
    if (cfg.classifier_elu) out.logits = ad::activation(tape, out.logits, ad::Activation::elu);
    out.probabilities = ad::softmax_rows(out.logits);
    return out;
}

std::vector<int> predict_labels(const std::vector<double>& probabilities, int num_rows,
                                int num_classes) {
    if (probabilities.size() !=
        static_cast<std::size_t>(num_rows) * static_cast<std::size_t>(num_classes)) {
        throw StructuralError("predict_labels: probability buffer does not match the shape");
    }
    std::vector<int> labels(static_cast<std::size_t>(num_rows));
    for (int r = 0; r < num_rows; ++r) {
        const double* p = probabilities.data() + static_cast<std::size_t>(r) * num_classes;
        int best = 0;
        for (int c = 1; c < num_classes; ++c) {
            if (p[c] > p[best]) best = c;
        }
        labels[static_cast<std::size_t>(r)] = best;
    }
    return labels;
}

} // namespace egat
