#include "egat/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "egat/kernels.hpp"

namespace egat::ad {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw StructuralError(msg);
}

void check_finite(const TensorImpl& t, const char* op) {
    if (!kernels::all_finite(t.values.data(), static_cast<int>(t.values.size()))) {
        throw NumericalError(std::string(op) + ": non-finite value produced");
    }
}

// Shared epilogue: finite check, gradient-need propagation, optional record.
void finalize(Tape& tape, const char* op, Tensor& out,
              std::vector<std::shared_ptr<TensorImpl>> inputs,
              std::function<void()> backprop) {
    check_finite(*out.impl(), op);
    bool needs = false;
    for (const auto& in : inputs) needs = needs || in->requires_grad;
    out.impl()->requires_grad = needs;
    if (needs && tape.recording()) {
        tape.record(std::move(inputs), out.impl(), std::move(backprop));
    }
}

} // namespace

Tensor Tensor::zeros(int rows, int cols, bool requires_grad) {
    require(rows >= 0 && cols >= 0, "Tensor: negative shape");
    auto impl = std::make_shared<TensorImpl>();
    impl->rows = rows;
    impl->cols = cols;
    impl->values.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
    impl->requires_grad = requires_grad;
    return Tensor(std::move(impl));
}

Tensor Tensor::from_values(int rows, int cols, std::vector<double> values, bool requires_grad) {
    require(values.size() == static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
            "Tensor: value count does not match shape");
    auto impl = std::make_shared<TensorImpl>();
    impl->rows = rows;
    impl->cols = cols;
    impl->values = std::move(values);
    impl->requires_grad = requires_grad;
    return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double value) { return from_values(1, 1, {value}); }

const std::vector<double>& Tensor::grad() const {
    impl_->ensure_grad();
    return impl_->grad;
}

double Tensor::at(int r, int c) const {
    require(r >= 0 && r < rows() && c >= 0 && c < cols(), "Tensor::at: index out of range");
    return impl_->values[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols()) +
                         static_cast<std::size_t>(c)];
}

double Tensor::item() const {
    require(rows() == 1 && cols() == 1, "Tensor::item: tensor is not 1x1");
    return impl_->values[0];
}

void Tensor::zero_grad() const {
    impl_->grad.assign(impl_->values.size(), 0.0);
}

void Tape::record(std::vector<std::shared_ptr<TensorImpl>> inputs,
                  std::shared_ptr<TensorImpl> output, std::function<void()> backprop) {
    records_.push_back(Record{std::move(inputs), std::move(output), std::move(backprop)});
}

void Tape::backward(const Tensor& loss) {
    require(loss.defined() && loss.rows() == 1 && loss.cols() == 1,
            "Tape::backward: loss must be 1x1");
    bool recorded = false;
    for (const auto& r : records_) {
        if (r.output == loss.impl()) {
            recorded = true;
            break;
        }
    }
    require(recorded && loss.requires_grad(),
            "Tape::backward: loss does not depend on any recorded parameter");
    // Intermediate gradients belong to a single walk; leaves keep theirs so
    // repeated backward calls accumulate.
    for (auto& r : records_) r.output->grad.clear();
    loss.impl()->ensure_grad();
    loss.impl()->grad[0] = 1.0;
    for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
        if (it->output->grad.empty()) continue;  // not on a path to the loss
        it->backprop();
    }
}

Activation activation_from_name(const std::string& name) {
    if (name == "elu") return Activation::elu;
    if (name == "leaky_relu") return Activation::leaky_relu;
    if (name == "identity") return Activation::identity;
    throw StructuralError("unknown activation: " + name);
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::elu: return "elu";
        case Activation::leaky_relu: return "leaky_relu";
        case Activation::identity: return "identity";
    }
    throw StructuralError("unknown activation");
}

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions disagree");
    const int n = a.rows(), k = a.cols(), m = b.cols();
    Tensor out = Tensor::zeros(n, m);
    kernels::matmul_nn(a.values().data(), b.values().data(), out.mutable_values().data(),
                       n, k, m, false);
    auto ai = a.impl(), bi = b.impl(), oi = out.impl();
    finalize(tape, "matmul", out, {ai, bi}, [ai, bi, oi, n, k, m] {
        if (ai->requires_grad) {
            ai->ensure_grad();
            kernels::matmul_nt(oi->grad.data(), bi->values.data(), ai->grad.data(), n, m, k, true);
        }
        if (bi->requires_grad) {
            bi->ensure_grad();
            kernels::matmul_tn(ai->values.data(), oi->grad.data(), bi->grad.data(), n, k, m, true);
        }
    });
    return out;
}

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape mismatch");
    const int n = static_cast<int>(a.size());
    Tensor out = Tensor::zeros(a.rows(), a.cols());
    kernels::add(a.values().data(), b.values().data(), out.mutable_values().data(), n);
    auto ai = a.impl(), bi = b.impl(), oi = out.impl();
    finalize(tape, "add", out, {ai, bi}, [ai, bi, oi, n] {
        if (ai->requires_grad) {
            ai->ensure_grad();
            kernels::axpy(1.0, oi->grad.data(), ai->grad.data(), n);
        }
        if (bi->requires_grad) {
            bi->ensure_grad();
            kernels::axpy(1.0, oi->grad.data(), bi->grad.data(), n);
        }
    });
    return out;
}

Tensor sub(Tape& tape, const Tensor& a, const Tensor& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shape mismatch");
    const int n = static_cast<int>(a.size());
    Tensor out = Tensor::zeros(a.rows(), a.cols());
    for (int i = 0; i < n; ++i) out.mutable_values()[i] = a.values()[i] - b.values()[i];
    auto ai = a.impl(), bi = b.impl(), oi = out.impl();
    finalize(tape, "sub", out, {ai, bi}, [ai, bi, oi, n] {
        if (ai->requires_grad) {
            ai->ensure_grad();
            kernels::axpy(1.0, oi->grad.data(), ai->grad.data(), n);
        }
        if (bi->requires_grad) {
            bi->ensure_grad();
            kernels::axpy(-1.0, oi->grad.data(), bi->grad.data(), n);
        }
    });
    return out;
}

Tensor hadamard(Tape& tape, const Tensor& a, const Tensor& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard: shape mismatch");
    const int n = static_cast<int>(a.size());
    Tensor out = Tensor::zeros(a.rows(), a.cols());
    kernels::hadamard(a.values().data(), b.values().data(), out.mutable_values().data(), n);
    auto ai = a.impl(), bi = b.impl(), oi = out.impl();
    finalize(tape, "hadamard", out, {ai, bi}, [ai, bi, oi, n] {
        if (ai->requires_grad) {
            ai->ensure_grad();
            kernels::hadamard_acc(bi->values.data(), oi->grad.data(), ai->grad.data(), n);
        }
        if (bi->requires_grad) {
            bi->ensure_grad();
            kernels::hadamard_acc(ai->values.data(), oi->grad.data(), bi->grad.data(), n);
        }
    });
    return out;
}

Tensor scale(Tape& tape, const Tensor& a, double s) {
    const int n = static_cast<int>(a.size());
    Tensor out = Tensor::zeros(a.rows(), a.cols());
    kernels::scale(a.values().data(), s, out.mutable_values().data(), n);
    auto ai = a.impl(), oi = out.impl();
    finalize(tape, "scale", out, {ai}, [ai, oi, s, n] {
        if (!ai->requires_grad) return;
        ai->ensure_grad();
        kernels::axpy(s, oi->grad.data(), ai->grad.data(), n);
    });
    return out;
}

Tensor slice_rows(Tape& tape, const Tensor& t, int start, int len) {
    require(start >= 0 && len >= 0 && start + len <= t.rows(), "slice_rows: range out of bounds");
    const int cols = t.cols();
    Tensor out = Tensor::zeros(len, cols);
    const std::size_t off = static_cast<std::size_t>(start) * static_cast<std::size_t>(cols);
    std::copy_n(t.values().data() + off, static_cast<std::size_t>(len) * cols,
                out.mutable_values().data());
    auto ti = t.impl(), oi = out.impl();
    finalize(tape, "slice_rows", out, {ti}, [ti, oi, off, len, cols] {
        if (!ti->requires_grad) return;
        ti->ensure_grad();
        kernels::axpy(1.0, oi->grad.data(), ti->grad.data() + off, len * cols);
    });
    return out;
}

Tensor concat_cols(Tape& tape, const std::vector<Tensor>& parts) {
    require(!parts.empty(), "concat_cols: no parts");
    const int rows = parts.front().rows();
    int total_cols = 0;
    for (const auto& p : parts) {
        require(p.rows() == rows, "concat_cols: row counts disagree");
        total_cols += p.cols();
    }
    Tensor out = Tensor::zeros(rows, total_cols);
    {
        int off = 0;
        for (const auto& p : parts) {
            const int pc = p.cols();
            for (int r = 0; r < rows; ++r) {
                std::copy_n(p.values().data() + static_cast<std::size_t>(r) * pc, pc,
                            out.mutable_values().data() +
                                static_cast<std::size_t>(r) * total_cols + off);
            }
            off += pc;
        }
    }
    std::vector<std::shared_ptr<TensorImpl>> inputs;
    inputs.reserve(parts.size());
    for (const auto& p : parts) inputs.push_back(p.impl());
    auto oi = out.impl();
    finalize(tape, "concat_cols", out, inputs, [inputs, oi, rows, total_cols] {
        int off = 0;
        for (const auto& pi : inputs) {
            const int pc = pi->cols;
            if (pi->requires_grad) {
                pi->ensure_grad();
                for (int r = 0; r < rows; ++r) {
                    const double* g = oi->grad.data() +
                                      static_cast<std::size_t>(r) * total_cols + off;
                    double* dst = pi->grad.data() + static_cast<std::size_t>(r) * pc;
                    for (int c = 0; c < pc; ++c) dst[c] += g[c];
                }
            }
            off += pc;
        }
    });
    return out;
}

Tensor gather_rows(Tape& tape, const Tensor& src, const IndexMap& map) {
    require(src.rows() == map.num_src_rows, "gather_rows: source row count disagrees with map");
    const int nslots = static_cast<int>(map.src.size());
    const int cols = src.cols();
    Tensor out = Tensor::zeros(nslots, cols);
    kernels::gather_rows(src.values().data(), map.src.data(), out.mutable_values().data(),
                         nslots, cols);
    auto si = src.impl(), oi = out.impl();
    const IndexMap* mp = &map;  // maps outlive the tape (owned by GraphStructures)
    finalize(tape, "gather_rows", out, {si}, [si, oi, mp, cols] {
        if (!si->requires_grad) return;
        si->ensure_grad();
        kernels::scatter_rows_acc(oi->grad.data(), mp->t_offsets.data(), mp->t_slots.data(),
                                  si->grad.data(), mp->num_src_rows, cols);
    });
    return out;
}

Tensor segment_softmax(Tape& tape, const Tensor& scores, const Segments& seg) {
    require(scores.cols() == 1, "segment_softmax: scores must be a column");
    require(scores.rows() == seg.total(), "segment_softmax: scores do not cover the segments");
    for (int g = 0; g < seg.count(); ++g) {
        if (seg.offsets[static_cast<std::size_t>(g) + 1] == seg.offsets[static_cast<std::size_t>(g)])
            throw StructuralError("segment_softmax: empty segment");
    }
    Tensor out = Tensor::zeros(scores.rows(), 1);
    kernels::segment_softmax_fwd(scores.values().data(), seg.offsets.data(),
                                 out.mutable_values().data(), seg.count());
    auto si = scores.impl(), oi = out.impl();
    const Segments* sp = &seg;
    finalize(tape, "segment_softmax", out, {si}, [si, oi, sp] {
        if (!si->requires_grad) return;
        si->ensure_grad();
        kernels::segment_softmax_bwd(oi->values.data(), oi->grad.data(), sp->offsets.data(),
                                     si->grad.data(), sp->count());
    });
    return out;
}

Tensor weighted_row_sum(Tape& tape, const Tensor& w, const Tensor& feats, const IndexMap& map,
                        const Segments& seg, const std::vector<int>& slot_seg) {
    require(w.cols() == 1, "weighted_row_sum: weights must be a column");
    require(w.rows() == seg.total(), "weighted_row_sum: weights do not cover the segments");
    require(map.src.size() == static_cast<std::size_t>(seg.total()),
            "weighted_row_sum: map does not cover the segments");
    require(slot_seg.size() == map.src.size(), "weighted_row_sum: slot_seg size mismatch");
    require(feats.rows() == map.num_src_rows,
            "weighted_row_sum: feature row count disagrees with map");
    const int cols = feats.cols();
    Tensor out = Tensor::zeros(seg.count(), cols);
    kernels::weighted_row_sum_fwd(w.values().data(), feats.values().data(), map.src.data(),
                                  seg.offsets.data(), out.mutable_values().data(),
                                  seg.count(), cols);
    auto wi = w.impl(), fi = feats.impl(), oi = out.impl();
    const IndexMap* mp = &map;
    const std::vector<int>* ss = &slot_seg;
    finalize(tape, "weighted_row_sum", out, {wi, fi}, [wi, fi, oi, mp, ss, cols] {
        const int nslots = static_cast<int>(mp->src.size());
        if (wi->requires_grad) {
            wi->ensure_grad();
            kernels::weighted_row_sum_bwd_w(fi->values.data(), mp->src.data(), oi->grad.data(),
                                            ss->data(), wi->grad.data(), nslots, cols);
        }
        if (fi->requires_grad) {
            fi->ensure_grad();
            kernels::weighted_row_sum_bwd_feats(wi->values.data(), oi->grad.data(), ss->data(),
                                                mp->t_offsets.data(), mp->t_slots.data(),
                                                fi->grad.data(), mp->num_src_rows, cols);
        }
    });
    return out;
}

Tensor activation(Tape& tape, const Tensor& x, Activation kind, double slope) {
    if (kind == Activation::identity) return x;
    const int n = static_cast<int>(x.size());
    Tensor out = Tensor::zeros(x.rows(), x.cols());
    auto xi = x.impl(), oi = out.impl();
    if (kind == Activation::leaky_relu) {
        kernels::leaky_relu_fwd(xi->values.data(), oi->values.data(), slope, n);
        finalize(tape, "leaky_relu", out, {xi}, [xi, oi, slope, n] {
            if (!xi->requires_grad) return;
            xi->ensure_grad();
            kernels::leaky_relu_bwd(xi->values.data(), oi->grad.data(), xi->grad.data(), slope, n);
        });
    } else {
        kernels::elu_fwd(xi->values.data(), oi->values.data(), n);
        finalize(tape, "elu", out, {xi}, [xi, oi, n] {
            if (!xi->requires_grad) return;
            xi->ensure_grad();
            kernels::elu_bwd(oi->values.data(), oi->grad.data(), xi->grad.data(), n);
        });
    }
    return out;
}

Tensor spmm(Tape& tape, const CsrMatrix& m, const Tensor& x) {
    require(m.cols == x.rows(), "spmm: inner dimensions disagree");
    const int cols = x.cols();
    Tensor out = Tensor::zeros(m.rows, cols);
    kernels::spmm_csr(m.offsets.data(), m.col_idx.data(), m.values.data(), x.values().data(),
                      out.mutable_values().data(), m.rows, cols, false);
    auto xi = x.impl(), oi = out.impl();
    std::shared_ptr<CsrMatrix> mt;
    if (tape.recording() && x.requires_grad()) mt = std::make_shared<CsrMatrix>(m.transposed());
    finalize(tape, "spmm", out, {xi}, [xi, oi, mt, cols] {
        if (!xi->requires_grad) return;
        xi->ensure_grad();
        kernels::spmm_csr(mt->offsets.data(), mt->col_idx.data(), mt->values.data(),
                          oi->grad.data(), xi->grad.data(), mt->rows, cols, true);
    });
    return out;
}

Tensor sum_all(Tape& tape, const Tensor& t) {
    const int n = static_cast<int>(t.size());
    Tensor out = Tensor::scalar(kernels::reduce_sum(t.values().data(), n));
    auto ti = t.impl(), oi = out.impl();
    finalize(tape, "sum_all", out, {ti}, [ti, oi, n] {
        if (!ti->requires_grad) return;
        ti->ensure_grad();
        const double g = oi->grad[0];
        for (int i = 0; i < n; ++i) ti->grad[static_cast<std::size_t>(i)] += g;
    });
    return out;
}

Tensor sum_squares(Tape& tape, const Tensor& t) {
    const int n = static_cast<int>(t.size());
    Tensor out = Tensor::scalar(kernels::reduce_sum_sq(t.values().data(), n));
    auto ti = t.impl(), oi = out.impl();
    finalize(tape, "sum_squares", out, {ti}, [ti, oi, n] {
        if (!ti->requires_grad) return;
        ti->ensure_grad();
        kernels::axpy(2.0 * oi->grad[0], ti->values.data(), ti->grad.data(), n);
    });
    return out;
}

Tensor dropout(Tape& tape, const Tensor& t, double rate, Rng& rng) {
    require(rate >= 0.0 && rate < 1.0, "dropout: rate must lie in [0, 1)");
    if (rate == 0.0) return t;
    const int n = static_cast<int>(t.size());
    auto mask = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n));
    const double keep_scale = 1.0 / (1.0 - rate);
    for (int i = 0; i < n; ++i) {
        (*mask)[static_cast<std::size_t>(i)] = rng.bernoulli(1.0 - rate) ? keep_scale : 0.0;
    }
    Tensor out = Tensor::zeros(t.rows(), t.cols());
    kernels::hadamard(t.values().data(), mask->data(), out.mutable_values().data(), n);
    auto ti = t.impl(), oi = out.impl();
    finalize(tape, "dropout", out, {ti}, [ti, oi, mask, n] {
        if (!ti->requires_grad) return;
        ti->ensure_grad();
        kernels::hadamard_acc(mask->data(), oi->grad.data(), ti->grad.data(), n);
    });
    return out;
}

Tensor masked_cross_entropy(Tape& tape, const Tensor& logits, const std::vector<int>& labels,
                            const std::vector<int>& mask_rows) {
    require(!mask_rows.empty(), "masked_cross_entropy: empty mask");
    require(labels.size() == static_cast<std::size_t>(logits.rows()),
            "masked_cross_entropy: labels do not cover the rows");
    const int c = logits.cols();
    require(c >= 2, "masked_cross_entropy: need at least two classes");
    auto probs = std::make_shared<std::vector<double>>(mask_rows.size() *
                                                       static_cast<std::size_t>(c));
    double total = 0.0;
    for (std::size_t i = 0; i < mask_rows.size(); ++i) {
        const int r = mask_rows[i];
        require(r >= 0 && r < logits.rows(), "masked_cross_entropy: mask row out of range");
        const int y = labels[static_cast<std::size_t>(r)];
        require(y >= 0 && y < c, "masked_cross_entropy: label out of range");
        const double* z = logits.values().data() + static_cast<std::size_t>(r) * c;
        double zmax = z[0];
        for (int j = 1; j < c; ++j) zmax = std::max(zmax, z[j]);
        double denom = 0.0;
        for (int j = 0; j < c; ++j) denom += std::exp(z[j] - zmax);
        for (int j = 0; j < c; ++j) {
            (*probs)[i * static_cast<std::size_t>(c) + static_cast<std::size_t>(j)] =
                std::exp(z[j] - zmax) / denom;
        }
        total += (zmax + std::log(denom)) - z[y];
    }
    const double inv_count = 1.0 / static_cast<double>(mask_rows.size());
    Tensor out = Tensor::scalar(total * inv_count);
    auto li = logits.impl(), oi = out.impl();
    auto rows = std::make_shared<std::vector<int>>(mask_rows);
    auto labs = std::make_shared<std::vector<int>>(labels);
    finalize(tape, "masked_cross_entropy", out, {li}, [li, oi, probs, rows, labs, c, inv_count] {
        if (!li->requires_grad) return;
        li->ensure_grad();
        const double g = oi->grad[0] * inv_count;
        for (std::size_t i = 0; i < rows->size(); ++i) {
            const int r = (*rows)[i];
            const int y = (*labs)[static_cast<std::size_t>(r)];
            double* dst = li->grad.data() + static_cast<std::size_t>(r) * c;
            const double* p = probs->data() + i * static_cast<std::size_t>(c);
            for (int j = 0; j < c; ++j) dst[j] += g * (p[j] - (j == y ? 1.0 : 0.0));
        }
    });
    return out;
}

std::vector<double> softmax_rows(const Tensor& logits) {
    const int rows = logits.rows(), cols = logits.cols();
    std::vector<double> out(logits.size());
    for (int r = 0; r < rows; ++r) {
        const double* z = logits.values().data() + static_cast<std::size_t>(r) * cols;
        double* o = out.data() + static_cast<std::size_t>(r) * cols;
        double zmax = z[0];
        for (int j = 1; j < cols; ++j) zmax = std::max(zmax, z[j]);
        double denom = 0.0;
        for (int j = 0; j < cols; ++j) denom += std::exp(z[j] - zmax);
        for (int j = 0; j < cols; ++j) o[j] = std::exp(z[j] - zmax) / denom;
    }
    return out;
}

double finite_diff_check(Tape& tape, const std::function<Tensor(Tape&)>& loss_fn,
                         const std::vector<Tensor>& params, double eps,
                         int max_coords_per_param, Rng* rng) {
    require(eps > 0.0, "finite_diff_check: eps must be positive");
    const bool was_recording = tape.recording();

    auto value_only = [&]() {
        tape.set_recording(false);
        const double v = loss_fn(tape).item();
        tape.set_recording(was_recording);
        return v;
    };

    // A loss that changes between identical evaluations would make the
    // central differences meaningless, so insist on bitwise repeatability.
    const double probe_a = value_only();
    const double probe_b = value_only();
    if (probe_a != probe_b) {
        throw NumericalError("finite_diff_check: loss function is not deterministic");
    }

    tape.clear();
    tape.set_recording(true);
    for (const auto& p : params) p.impl()->grad.assign(p.size(), 0.0);
    Tensor loss = loss_fn(tape);
    tape.backward(loss);
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (const auto& p : params) analytic.push_back(p.impl()->grad);
    tape.clear();
    tape.set_recording(was_recording);

    double max_rel = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        auto& vals = params[pi].impl()->values;
        const int n = static_cast<int>(vals.size());
        std::vector<int> coords;
        if (max_coords_per_param < 0 || max_coords_per_param >= n) {
            coords.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) coords[static_cast<std::size_t>(i)] = i;
        } else if (rng != nullptr) {
            std::vector<int> all(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
            rng->shuffle(all);
            coords.assign(all.begin(), all.begin() + max_coords_per_param);
        } else {
            const int stride = std::max(1, n / std::max(1, max_coords_per_param));
            for (int i = 0; i < n && static_cast<int>(coords.size()) < max_coords_per_param;
                 i += stride) {
                coords.push_back(i);
            }
        }
        for (int i : coords) {
            const double saved = vals[static_cast<std::size_t>(i)];
            vals[static_cast<std::size_t>(i)] = saved + eps;
            const double fp = value_only();
            vals[static_cast<std::size_t>(i)] = saved - eps;
            const double fm = value_only();
            vals[static_cast<std::size_t>(i)] = saved;
            const double numeric = (fp - fm) / (2.0 * eps);
            const double a = analytic[pi][static_cast<std::size_t>(i)];
            const double rel = std::abs(a - numeric) / std::max(1.0, std::abs(a));
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

} // namespace egat::ad
