#include "egat/layer.hpp"

namespace egat {

namespace {

using ad::Tape;
using ad::Tensor;

// Attention scores for one block. The score of slot s with center c(s),
// neighbor n(s) and in-between entity v(s) is
//   LeakyReLU( a1 . cf[c(s)] + a2 . cf[n(s)] + a3 . vf[v(s)] ),
// which is the dot product of the full attention vector with the
// concatenation [ cf_c || cf_n || vf_v ], computed without materializing
// per-pair concatenations: the three partial dot products are formed once
// per row and gathered per slot.
Tensor attention_coefficients(Tape& tape, const AttentionPlan& plan, const Tensor& center_feats,
                              const Tensor& via_feats, const Tensor& attn_vec, bool with_via,
                              double slope) {
    const int fc = center_feats.cols();
    Tensor a1 = ad::slice_rows(tape, attn_vec, 0, fc);
    Tensor a2 = ad::slice_rows(tape, attn_vec, fc, fc);
    Tensor u = ad::matmul(tape, center_feats, a1);
    Tensor v = ad::matmul(tape, center_feats, a2);
    Tensor scores = ad::add(tape, ad::gather_rows(tape, u, plan.center),
                            ad::gather_rows(tape, v, plan.neighbor));
    if (with_via) {
        const int fv = via_feats.cols();
        Tensor a3 = ad::slice_rows(tape, attn_vec, 2 * fc, fv);
        Tensor w = ad::matmul(tape, via_feats, a3);
        scores = ad::add(tape, scores, ad::gather_rows(tape, w, plan.via));
    }
    Tensor act = ad::activation(tape, scores, ad::Activation::leaky_relu, slope);
    return ad::segment_softmax(tape, act, plan.seg);
}

} // namespace

LayerOutput egat_layer_forward(Tape& tape, const GraphStructures& gs, const Tensor& h,
                               const Tensor& e, const EgatLayerParams& params,
                               const LayerOptions& options, Rng* rng) {
    if (h.rows() != gs.num_nodes()) {
        throw StructuralError("egat_layer_forward: node feature rows do not match the graph");
    }
    Tensor h_t = ad::matmul(tape, h, params.w_h);

    const bool drop = options.training && options.attn_dropout > 0.0;
    if (drop && rng == nullptr) {
        throw StructuralError("egat_layer_forward: dropout requested without an rng");
    }

    LayerOutput out;

    if (!options.include_edges) {
        out.alpha = attention_coefficients(tape, gs.node_plan, h_t, Tensor(), params.a,
                                           /*with_via=*/false, options.leaky_slope);
        Tensor alpha_used =
            drop ? ad::dropout(tape, out.alpha, options.attn_dropout, *rng) : out.alpha;
        Tensor agg_h = ad::weighted_row_sum(tape, alpha_used, h_t, gs.node_plan.neighbor,
                                            gs.node_plan.seg, gs.node_plan.slot_seg);
        out.h_prime = ad::activation(tape, agg_h, options.sigma, options.leaky_slope);
        out.h_merged = out.h_prime;
        return out;
    }

    if (e.rows() != gs.num_edges()) {
        throw StructuralError("egat_layer_forward: edge feature rows do not match the graph");
    }
    Tensor e_t = ad::matmul(tape, e, params.w_e);

    // Node attention block. The edge aggregate reuses alpha, so
    // h_merged = sigma([sum alpha h || sum alpha e]) splits into the
    // concatenation of the two activated aggregates.
    out.alpha = attention_coefficients(tape, gs.node_plan, h_t, e_t, params.a,
                                       /*with_via=*/true, options.leaky_slope);
    Tensor alpha_used =
        drop ? ad::dropout(tape, out.alpha, options.attn_dropout, *rng) : out.alpha;
    Tensor agg_h = ad::weighted_row_sum(tape, alpha_used, h_t, gs.node_plan.neighbor,
                                        gs.node_plan.seg, gs.node_plan.slot_seg);
    Tensor agg_e = ad::weighted_row_sum(tape, alpha_used, e_t, gs.node_plan.via,
                                        gs.node_plan.seg, gs.node_plan.slot_seg);
    out.h_prime = ad::activation(tape, agg_h, options.sigma, options.leaky_slope);
    out.h_merged = ad::concat_cols(
        tape, {out.h_prime, ad::activation(tape, agg_e, options.sigma, options.leaky_slope)});

    // Edge attention block: roles switch, edges attend over edges
    // through the node they share; the diagonal's via index is the zero
    // virtual node.
    out.beta = attention_coefficients(tape, gs.edge_plan, e_t, h_t, params.b,
                                      /*with_via=*/true, options.leaky_slope);
    Tensor beta_used = drop ? ad::dropout(tape, out.beta, options.attn_dropout, *rng) : out.beta;
    Tensor agg_ee = ad::weighted_row_sum(tape, beta_used, e_t, gs.edge_plan.neighbor,
                                         gs.edge_plan.seg, gs.edge_plan.slot_seg);
    out.e_prime = ad::activation(tape, agg_ee, options.sigma, options.leaky_slope);
    return out;
}

} // namespace egat
