#ifndef EGAT_TRAIN_HPP
#define EGAT_TRAIN_HPP

#include <ostream>

#include "egat/dataset.hpp"
#include "egat/model.hpp"

namespace egat {

/// A Dataset turned into model inputs: self-loop augmented structures,
/// features as tensors (edge features synthesized from degrees when the
/// dataset has none), labels and masks carried through.
struct PreparedData {
    GraphStructures structures;
    ad::Tensor node_features;  // N x F_H
    ad::Tensor edge_features;  // M' x F_E, rows cover virtual self-loops
    std::vector<int> labels;
    std::vector<int> train_mask, val_mask, test_mask;
    int num_classes = 0;
};

PreparedData prepare(const Dataset& d);

struct TrainConfig {
    int max_epochs = 1000;
    int patience = 100;  // epochs without validation improvement before stopping
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    bool verbose = false;
    std::ostream* log = nullptr;  // per-epoch lines when verbose
};

/// Adaptive-moment optimizer state, shaped like the parameter list it was
/// built from.
struct AdamState {
    std::vector<std::vector<double>> m, v;
    long long t = 0;

    explicit AdamState(const std::vector<ad::Tensor>& params);
    void step(const std::vector<ad::Tensor>& params, double lr, double beta1, double beta2,
              double eps);
};

/// Mean cross-entropy over the masked rows plus l2_coeff times the sum of
/// squared parameters.
ad::Tensor masked_loss(ad::Tape& tape, const ad::Tensor& logits, const std::vector<int>& labels,
                       const std::vector<int>& mask, double l2_coeff,
                       const std::vector<ad::Tensor>& params);

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
};

struct FitResult {
    std::vector<EpochMetrics> history;
    int best_epoch = -1;        // 1-based epoch whose parameters were restored
    double best_val_loss = 0.0;
    bool diverged = false;
};

/// Full-graph training: forward(training) -> masked loss -> backward ->
/// optimizer step, validation each epoch, early stopping on validation
/// loss, best-epoch parameter restore. Learning rate, L2 coefficient and
/// the dropout/seed settings come from model.config. A non-finite loss
/// aborts cleanly with diverged set.
FitResult fit(Model& model, const PreparedData& data, const TrainConfig& tc);

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

/// Eval-mode loss and accuracy over one mask.
EvalResult evaluate(const Model& model, const PreparedData& data, const std::vector<int>& mask);

} // namespace egat

#endif // EGAT_TRAIN_HPP
