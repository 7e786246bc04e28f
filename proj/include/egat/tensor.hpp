#ifndef EGAT_TENSOR_HPP
#define EGAT_TENSOR_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "egat/errors.hpp"
#include "egat/rng.hpp"
#include "egat/sparse.hpp"

namespace egat::ad {

/// Backing store for a Tensor handle. Gradients are allocated on first use
/// so constant tensors never pay for them.
struct TensorImpl {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;
    std::vector<double> grad;  // empty until touched; same layout as values
    bool requires_grad = false;

    std::size_t size() const { return values.size(); }
    void ensure_grad() {
        if (grad.empty()) grad.assign(values.size(), 0.0);
    }
};

/// Row-major dense matrix handle with shared storage. Copying a Tensor
/// copies the handle, not the data, so tape closures can hold inputs and
/// outputs alive cheaply.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(int rows, int cols, bool requires_grad = false);
    static Tensor from_values(int rows, int cols, std::vector<double> values,
                              bool requires_grad = false);
    static Tensor scalar(double value);

    bool defined() const { return impl_ != nullptr; }
    int rows() const { return impl_->rows; }
    int cols() const { return impl_->cols; }
    std::size_t size() const { return impl_->values.size(); }
    bool requires_grad() const { return impl_->requires_grad; }

    const std::vector<double>& values() const { return impl_->values; }
    std::vector<double>& mutable_values() { return impl_->values; }
    const std::vector<double>& grad() const;

    double at(int r, int c) const;
    /// Value of a 1x1 tensor.
    double item() const;

    /// Allocates (if needed) and zeroes the gradient buffer.
    void zero_grad() const;

    std::shared_ptr<TensorImpl> impl() const { return impl_; }

private:
    explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<TensorImpl> impl_;
};

/// Reverse-mode tape. Operations append records in execution order, which
/// is already a topological order of the dataflow graph; backward replays
/// the local gradient rules in reverse, accumulating into input gradients.
class Tape {
public:
    struct Record {
        std::vector<std::shared_ptr<TensorImpl>> inputs;
        std::shared_ptr<TensorImpl> output;
        std::function<void()> backprop;
    };

    bool recording() const { return recording_; }
    /// Recording off turns every op into a plain value computation (used for
    /// evaluation passes and finite-difference probes).
    void set_recording(bool on) { recording_ = on; }

    void record(std::vector<std::shared_ptr<TensorImpl>> inputs,
                std::shared_ptr<TensorImpl> output, std::function<void()> backprop);

    /// Seeds d(loss)/d(loss) = 1 and replays the tape in reverse. The loss
    /// must be a recorded 1x1 tensor. Repeated calls accumulate.
    void backward(const Tensor& loss);

    void clear() { records_.clear(); }
    std::size_t size() const { return records_.size(); }

private:
    std::vector<Record> records_;
    bool recording_ = true;
};

enum class Activation { elu, leaky_relu, identity };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

// Every op validates shapes (StructuralError on mismatch), computes the
// forward value, checks it is finite (NumericalError otherwise), and -- when
// the tape is recording and any input requires gradients -- appends the
// matching backward rule.

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);
Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
Tensor sub(Tape& tape, const Tensor& a, const Tensor& b);
Tensor hadamard(Tape& tape, const Tensor& a, const Tensor& b);
Tensor scale(Tape& tape, const Tensor& a, double s);

/// Rows [start, start + len) as a len x cols tensor.
Tensor slice_rows(Tape& tape, const Tensor& t, int start, int len);
Tensor concat_cols(Tape& tape, const std::vector<Tensor>& parts);

/// out[s] = src[map.src[s]], with -1 reading as a zero row.
Tensor gather_rows(Tape& tape, const Tensor& src, const IndexMap& map);

/// Softmax over each segment of a column vector of scores. Throws on empty
/// segments; every segment of the result sums to 1.
Tensor segment_softmax(Tape& tape, const Tensor& scores, const Segments& seg);

/// out[g] = sum over slots s in segment g of w[s] * feats[map.src[s]],
/// skipping slots mapped to -1.
Tensor weighted_row_sum(Tape& tape, const Tensor& w, const Tensor& feats,
                        const IndexMap& map, const Segments& seg,
                        const std::vector<int>& slot_seg);

Tensor activation(Tape& tape, const Tensor& x, Activation kind, double slope = 0.2);

/// Sparse-dense product m * x. Gradient flows to x only.
Tensor spmm(Tape& tape, const CsrMatrix& m, const Tensor& x);

Tensor sum_all(Tape& tape, const Tensor& t);
Tensor sum_squares(Tape& tape, const Tensor& t);

/// Inverted dropout: keeps entries with probability (1 - rate) and rescales
/// by 1 / (1 - rate). rate 0 is the identity.
Tensor dropout(Tape& tape, const Tensor& t, double rate, Rng& rng);

/// Mean cross-entropy of softmax(logits) against labels over masked rows.
/// Log-sum-exp is max-shifted for stability. Mask must be non-empty.
Tensor masked_cross_entropy(Tape& tape, const Tensor& logits,
                            const std::vector<int>& labels,
                            const std::vector<int>& mask_rows);

/// Plain (untaped) row-wise softmax, for turning eval logits into scores.
std::vector<double> softmax_rows(const Tensor& logits);

/// Central-difference gradient check. loss_fn must be a pure function of
/// the parameter values (it is re-run several times, including once with
/// recording off per probed coordinate pair). Checks determinism first,
/// then compares analytic gradients against (f(x+eps) - f(x-eps)) / 2 eps
/// on up to max_coords_per_param coordinates per parameter (all of them if
/// the cap is negative). Returns the max of
/// |analytic - numeric| / max(1, |analytic|).
double finite_diff_check(Tape& tape, const std::function<Tensor(Tape&)>& loss_fn,
                         const std::vector<Tensor>& params, double eps = 1e-5,
                         int max_coords_per_param = -1, Rng* rng = nullptr);

} // namespace egat::ad

#endif // EGAT_TENSOR_HPP
