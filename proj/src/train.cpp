#include "egat/train.hpp"

#include <cmath>
#include <limits>

#include "egat/kernels.hpp"

namespace egat {

namespace {

using ad::Tape;
using ad::Tensor;

Tensor to_tensor(const FeatureMatrix& m) {
    return Tensor::from_values(m.rows, m.cols, m.values);
}

double masked_accuracy(const std::vector<double>& probabilities, int rows, int classes,
                       const std::vector<int>& labels, const std::vector<int>& mask) {
    const auto preds = predict_labels(probabilities, rows, classes);
    int hits = 0;
    for (int id : mask) {
        if (preds[static_cast<std::size_t>(id)] == labels[static_cast<std::size_t>(id)]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(mask.size());
}

} // namespace

PreparedData prepare(const Dataset& d) {
    d.validate();
    PreparedData p;
    FeatureMatrix edge_feats = d.edge_features.cols > 0 ? d.edge_features
                                                        : synthesize_edge_degree_features(d.graph);
    auto [augmented, aug_feats] = add_virtual_self_loops(d.graph, edge_feats);
    p.structures = build_structures(augmented);
    p.node_features = to_tensor(d.node_features);
    p.edge_features = to_tensor(aug_feats);
    p.labels = d.labels;
    p.train_mask = d.train_mask;
    p.val_mask = d.val_mask;
    p.test_mask = d.test_mask;
    p.num_classes = d.num_classes;
    return p;
}

AdamState::AdamState(const std::vector<Tensor>& params) {
    m.reserve(params.size());
    v.reserve(params.size());
    for (const auto& p : params) {
        m.emplace_back(p.size(), 0.0);
        v.emplace_back(p.size(), 0.0);
    }
}

void AdamState::step(const std::vector<Tensor>& params, double lr, double beta1, double beta2,
                     double eps) {
    if (params.size() != m.size()) throw StructuralError("AdamState: parameter list changed");
    ++t;
    const double bias1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bias2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& p = params[i];
        if (p.impl()->grad.size() != p.size()) {
            throw StructuralError("AdamState: gradient missing or mis-shaped");
        }
        kernels::adam_update(p.impl()->values.data(), p.impl()->grad.data(), m[i].data(),
                             v[i].data(), static_cast<int>(p.size()), lr, beta1, beta2, eps,
                             bias1, bias2);
    }
}

Tensor masked_loss(Tape& tape, const Tensor& logits, const std::vector<int>& labels,
                   const std::vector<int>& mask, double l2_coeff,
                   const std::vector<Tensor>& params) {
    Tensor loss = ad::masked_cross_entropy(tape, logits, labels, mask);
    if (l2_coeff != 0.0 && !params.empty()) {
        Tensor reg = ad::sum_squares(tape, params.front());
        for (std::size_t i = 1; i < params.size(); ++i) {
            reg = ad::add(tape, reg, ad::sum_squares(tape, params[i]));
        }
        loss = ad::add(tape, loss, ad::scale(tape, reg, l2_coeff));
    }
    return loss;
}

FitResult fit(Model& model, const PreparedData& data, const TrainConfig& tc) {
    if (data.train_mask.empty() || data.val_mask.empty()) {
        throw StructuralError("fit: train and validation masks must be non-empty");
    }
    if (tc.max_epochs < 1) throw StructuralError("fit: max_epochs must be >= 1");
    if (tc.patience < 0) throw StructuralError("fit: patience must be >= 0");

    const auto params = model.parameters();
    AdamState adam(params);
    Rng dropout_rng(model.config.seed);
    Tape tape;

    FitResult result;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best_values;
    int bad_epochs = 0;

    auto snapshot = [&] {
        best_values.clear();
        for (const auto& p : params) best_values.push_back(p.values());
    };
    auto restore = [&] {
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i].impl()->values = best_values[i];
        }
    };

    for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
        double train_loss;
        try {
            tape.clear();
            tape.set_recording(true);
            ForwardOutput fwd = model_forward(tape, model, data.structures, data.node_features,
                                              data.edge_features, /*training=*/true, &dropout_rng);
            Tensor loss = masked_loss(tape, fwd.logits, data.labels, data.train_mask,
                                      model.config.l2, params);
            train_loss = loss.item();
            for (const auto& p : params) p.zero_grad();
            tape.backward(loss);
            adam.step(params, model.config.lr, tc.beta1, tc.beta2, tc.eps);
            tape.clear();
        } catch (const NumericalError&) {
            result.diverged = true;
            if (result.best_epoch >= 0) restore();
            return result;
        }

        const EvalResult val = evaluate(model, data, data.val_mask);
        result.history.push_back({epoch, train_loss, val.loss, val.accuracy});
        if (tc.verbose && tc.log != nullptr) {
            (*tc.log) << "epoch " << epoch << " train_loss " << train_loss << " val_loss "
                      << val.loss << " val_acc " << val.accuracy << '\n';
        }

        if (val.loss < best) {
            best = val.loss;
            result.best_epoch = epoch;
            bad_epochs = 0;
            snapshot();
        } else {
            ++bad_epochs;
            if (bad_epochs > tc.patience) break;
        }
    }

    if (result.best_epoch >= 0) {
        restore();
        result.best_val_loss = best;
    }
    return result;
}

EvalResult evaluate(const Model& model, const PreparedData& data, const std::vector<int>& mask) {
    if (mask.empty()) throw StructuralError("evaluate: empty mask");
    Tape tape;
    tape.set_recording(false);
    ForwardOutput fwd = model_forward(tape, model, data.structures, data.node_features,
                                      data.edge_features, /*training=*/false, nullptr);
    EvalResult r;
    r.loss = ad::masked_cross_entropy(tape, fwd.logits, data.labels, mask).item();
    r.accuracy = masked_accuracy(fwd.probabilities, fwd.logits.rows(), model.config.num_classes,
                                 data.labels, mask);
    return r;
}

} // namespace egat
