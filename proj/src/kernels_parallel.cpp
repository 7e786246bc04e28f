#include "egat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// OpenMP variants. Work is split over independent output elements; the
// per-element reduction order is the same as in kernels_serial.cpp, so the
// two backends agree bit for bit at any thread count.

namespace egat::kernels::parallel {

namespace {
constexpr int kChunk = 8192; // must match the serial reduction chunking
} // namespace

void matmul_nn(const double* a, const double* b, double* c, int n, int k, int m, bool acc) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double* crow = c + static_cast<std::size_t>(i) * m;
        if (!acc) std::fill(crow, crow + m, 0.0);
        const double* arow = a + static_cast<std::size_t>(i) * k;
        for (int l = 0; l < k; ++l) {
            const double av = arow[l];
            const double* brow = b + static_cast<std::size_t>(l) * m;
            for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
}

void matmul_nt(const double* a, const double* b, double* c, int n, int k, int m, bool acc) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double* arow = a + static_cast<std::size_t>(i) * k;
        double* crow = c + static_cast<std::size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
            const double* brow = b + static_cast<std::size_t>(j) * k;
            double sum = 0.0;
            for (int l = 0; l < k; ++l) sum += arow[l] * brow[l];
            crow[j] = acc ? crow[j] + sum : sum;
        }
    }
}

void matmul_tn(const double* a, const double* b, double* c, int n, int k, int m, bool acc) {
    // Rows of c are independent; the i-reduction stays ascending per row.
#pragma omp parallel for schedule(static)
    for (int l = 0; l < k; ++l) {
        double* crow = c + static_cast<std::size_t>(l) * m;
        if (!acc) std::fill(crow, crow + m, 0.0);
        for (int i = 0; i < n; ++i) {
            const double av = a[static_cast<std::size_t>(i) * k + l];
            const double* brow = b + static_cast<std::size_t>(i) * m;
            for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
}

void add(const double* a, const double* b, double* out, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void axpy(double alpha, const double* x, double* y, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(const double* a, double s, double* out, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = a[i] * s;
}

void hadamard(const double* a, const double* b, double* out, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void hadamard_acc(const double* a, const double* b, double* out, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void leaky_relu_fwd(const double* x, double* y, double slope, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) y[i] = x[i] >= 0.0 ? x[i] : slope * x[i];
}

void leaky_relu_bwd(const double* x, const double* gy, double* gx, double slope, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) gx[i] += gy[i] * (x[i] >= 0.0 ? 1.0 : slope);
}

void elu_fwd(const double* x, double* y, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) y[i] = x[i] >= 0.0 ? x[i] : std::expm1(x[i]);
}

void elu_bwd(const double* y, const double* gy, double* gx, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) gx[i] += gy[i] * (y[i] >= 0.0 ? 1.0 : y[i] + 1.0);
}

void gather_rows(const double* src, const int* idx, double* out, int nslots, int cols) {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < nslots; ++s) {
        double* orow = out + static_cast<std::size_t>(s) * cols;
        const int r = idx[s];
        if (r < 0) {
            std::fill(orow, orow + cols, 0.0);
        } else {
            const double* srow = src + static_cast<std::size_t>(r) * cols;
            std::copy(srow, srow + cols, orow);
        }
    }
}

void scatter_rows_acc(const double* gout, const int* t_offsets, const int* t_slots,
                      double* gsrc, int nsrc, int cols) {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < nsrc; ++r) {
        double* grow = gsrc + static_cast<std::size_t>(r) * cols;
        for (int t = t_offsets[r]; t < t_offsets[r + 1]; ++t) {
            const double* orow = gout + static_cast<std::size_t>(t_slots[t]) * cols;
            for (int j = 0; j < cols; ++j) grow[j] += orow[j];
        }
    }
}

void spmm_csr(const int* offsets, const int* col_idx, const double* vals,
              const double* dense, double* out, int rows, int dense_cols, bool acc) {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows; ++r) {
        double* orow = out + static_cast<std::size_t>(r) * dense_cols;
        if (!acc) std::fill(orow, orow + dense_cols, 0.0);
        for (int t = offsets[r]; t < offsets[r + 1]; ++t) {
            const double v = vals[t];
            const double* drow = dense + static_cast<std::size_t>(col_idx[t]) * dense_cols;
            for (int j = 0; j < dense_cols; ++j) orow[j] += v * drow[j];
        }
    }
}

void segment_softmax_fwd(const double* scores, const int* seg_offsets, double* out, int nseg) {
#pragma omp parallel for schedule(static)
    for (int g = 0; g < nseg; ++g) {
        const int lo = seg_offsets[g], hi = seg_offsets[g + 1];
        double mx = scores[lo];
        for (int s = lo + 1; s < hi; ++s) mx = std::max(mx, scores[s]);
        double denom = 0.0;
        for (int s = lo; s < hi; ++s) {
            out[s] = std::exp(scores[s] - mx);
            denom += out[s];
        }
        const double inv = 1.0 / denom;
        for (int s = lo; s < hi; ++s) out[s] *= inv;
    }
}

void segment_softmax_bwd(const double* alpha, const double* galpha, const int* seg_offsets,
                         double* gscores, int nseg) {
#pragma omp parallel for schedule(static)
    for (int g = 0; g < nseg; ++g) {
        const int lo = seg_offsets[g], hi = seg_offsets[g + 1];
        double dot = 0.0;
        for (int s = lo; s < hi; ++s) dot += alpha[s] * galpha[s];
        for (int s = lo; s < hi; ++s) gscores[s] += alpha[s] * (galpha[s] - dot);
    }
}

void weighted_row_sum_fwd(const double* w, const double* feats, const int* src,
                          const int* seg_offsets, double* out, int nseg, int cols) {
#pragma omp parallel for schedule(static)
    for (int g = 0; g < nseg; ++g) {
        double* orow = out + static_cast<std::size_t>(g) * cols;
        std::fill(orow, orow + cols, 0.0);
        for (int s = seg_offsets[g]; s < seg_offsets[g + 1]; ++s) {
            const int r = src[s];
            if (r < 0) continue;
            const double ws = w[s];
            const double* frow = feats + static_cast<std::size_t>(r) * cols;
            for (int j = 0; j < cols; ++j) orow[j] += ws * frow[j];
        }
    }
}

void weighted_row_sum_bwd_w(const double* feats, const int* src, const double* gout,
                            const int* slot_seg, double* gw, int nslots, int cols) {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < nslots; ++s) {
        const int r = src[s];
        if (r < 0) continue;
        const double* frow = feats + static_cast<std::size_t>(r) * cols;
        const double* grow = gout + static_cast<std::size_t>(slot_seg[s]) * cols;
        double sum = 0.0;
        for (int j = 0; j < cols; ++j) sum += frow[j] * grow[j];
        gw[s] += sum;
    }
}

void weighted_row_sum_bwd_feats(const double* w, const double* gout, const int* slot_seg,
                                const int* t_offsets, const int* t_slots,
                                double* gfeats, int nfeat_rows, int cols) {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < nfeat_rows; ++r) {
        double* grow = gfeats + static_cast<std::size_t>(r) * cols;
        for (int t = t_offsets[r]; t < t_offsets[r + 1]; ++t) {
            const int s = t_slots[t];
            const double ws = w[s];
            const double* orow = gout + static_cast<std::size_t>(slot_seg[s]) * cols;
            for (int j = 0; j < cols; ++j) grow[j] += ws * orow[j];
        }
    }
}

double reduce_sum(const double* x, int n) {
    const int nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> parts(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < nchunks; ++c) {
        const int lo = c * kChunk, hi = std::min(n, lo + kChunk);
        double part = 0.0;
        for (int i = lo; i < hi; ++i) part += x[i];
        parts[static_cast<std::size_t>(c)] = part;
    }
    double total = 0.0;
    for (double p : parts) total += p;
    return total;
}

double reduce_sum_sq(const double* x, int n) {
    const int nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> parts(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < nchunks; ++c) {
        const int lo = c * kChunk, hi = std::min(n, lo + kChunk);
        double part = 0.0;
        for (int i = lo; i < hi; ++i) part += x[i] * x[i];
        parts[static_cast<std::size_t>(c)] = part;
    }
    double total = 0.0;
    for (double p : parts) total += p;
    return total;
}

bool all_finite(const double* x, int n) {
    int bad = 0;
#pragma omp parallel for schedule(static) reduction(|| : bad)
    for (int i = 0; i < n; ++i) {
        bad = bad || !std::isfinite(x[i]);
    }
    return !bad;
}

void adam_update(double* p, const double* g, double* m, double* v, int n,
                 double lr, double beta1, double beta2, double eps,
                 double bias1, double bias2) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bias1;
        const double vhat = v[i] / bias2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

} // namespace egat::kernels::parallel
