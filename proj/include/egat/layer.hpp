#ifndef EGAT_LAYER_HPP
#define EGAT_LAYER_HPP

#include "egat/structures.hpp"
#include "egat/tensor.hpp"

namespace egat {

/// Learnable values for one layer: feature transforms W_H / W_E and the
/// attention vectors a (node block) and b (edge block). In node-only mode
/// w_e and b stay undefined and a shrinks to 2*F_H_out rows.
struct EgatLayerParams {
    ad::Tensor w_h;  // F_H_in x F_H_out
    ad::Tensor w_e;  // F_E_in x F_E_out
    ad::Tensor a;    // (2*F_H_out + F_E_out) x 1
    ad::Tensor b;    // (2*F_E_out + F_H_out) x 1
};

struct LayerOptions {
    ad::Activation sigma = ad::Activation::elu;
    double leaky_slope = 0.2;
    double attn_dropout = 0.0;  // on the normalized coefficients, training only
    bool training = false;
    bool include_edges = true;  // false: plain node attention, no edge terms
};

/// One layer's outputs. h_prime / e_prime feed the next layer; h_merged is
/// the per-layer representation collected for the multi-scale merge. alpha
/// and beta are the normalized attention coefficients (pre-dropout), one
/// slot per neighborhood entry of the matching plan.
struct LayerOutput {
    ad::Tensor h_prime;   // N x F_H_out
    ad::Tensor e_prime;   // M x F_E_out (undefined in node-only mode)
    ad::Tensor h_merged;  // N x (F_H_out + F_E_out)
    ad::Tensor alpha;     // node_plan slots x 1
    ad::Tensor beta;      // edge_plan slots x 1 (undefined in node-only mode)
};

/// Applies one EGAT layer. h is N x F_H_in, e is M x F_E_in over the
/// self-loop augmented graph in gs. rng is only consulted when options
/// enable dropout during training.
LayerOutput egat_layer_forward(ad::Tape& tape, const GraphStructures& gs, const ad::Tensor& h,
                               const ad::Tensor& e, const EgatLayerParams& params,
                               const LayerOptions& options, Rng* rng = nullptr);

} // namespace egat

#endif // EGAT_LAYER_HPP
