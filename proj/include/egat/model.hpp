#ifndef EGAT_MODEL_HPP
#define EGAT_MODEL_HPP

#include <string>
#include <vector>

#include "egat/layer.hpp"

namespace egat {

struct ModelConfig {
    int num_layers = 2;   // L
    int num_heads = 8;    // K
    int hidden_h = 8;     // F_H_out
    int hidden_e = 4;     // F_E_out
    int num_classes = 2;  // C
    int in_h = 0;         // input node feature dim (taken from the data)
    int in_e = 0;         // input edge feature dim
    std::string sigma = "elu";
    double leaky_slope = 0.2;
    double dropout = 0.6;       // on layer input features
    double attn_dropout = 0.6;  // on attention coefficients
    bool use_edge_features = true;  // false: node-only attention baseline
    bool classifier_elu = false;    // extra nonlinearity before softmax
    double lr = 0.005;
    double l2 = 5e-4;
    unsigned long long seed = 1;

    void validate() const;
    /// Width of the merged representation, K * L * (F_H_out + F_E_out)
    /// (edge part absent in node-only mode).
    int merged_dim() const;
};

/// K independent groups of L stacked layers plus the width-1 convolution
/// classifier over the merged feature axis.
struct Model {
    ModelConfig config;
    std::vector<EgatLayerParams> layers;  // head-major: layers[k * L + l]
    ad::Tensor classifier;                // merged_dim x C

    const EgatLayerParams& layer(int head, int l) const {
        return layers[static_cast<std::size_t>(head) * config.num_layers +
                      static_cast<std::size_t>(l)];
    }
    /// All learnable tensors in a stable order (layer params head-major,
    /// classifier last). The order is the checkpoint manifest order.
    std::vector<ad::Tensor> parameters() const;
};

/// Deterministic variance-scaled initialization: every weight is uniform in
/// +-sqrt(6 / (fan_in + fan_out)).
Model init_model(const ModelConfig& config, unsigned long long seed);

struct ForwardOutput {
    ad::Tensor logits;         // N x C
    std::vector<double> probabilities;  // row-major N x C, softmax of logits
    ad::Tensor merged;         // N x merged_dim, the multi-scale merge
    std::vector<ad::Tensor> alphas;  // per head-major layer, diagnostics
    std::vector<ad::Tensor> betas;
};

/// Full forward pass: per head, L layers chained through (h', e') with the
/// merged per-layer features collected; representations concatenated
/// head-major; classifier applied per node. Dropout only acts when
/// training is set (and then rng must be non-null).
ForwardOutput model_forward(ad::Tape& tape, const Model& model, const GraphStructures& gs,
                            const ad::Tensor& h0, const ad::Tensor& e0, bool training = false,
                            Rng* rng = nullptr);

/// Argmax per row; ties go to the smallest class index.
std::vector<int> predict_labels(const std::vector<double>& probabilities, int num_rows,
                                int num_classes);

} // namespace egat

#endif // EGAT_MODEL_HPP
