#include "egat/kernels.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace egat::kernels {

namespace {

Backend default_backend() {
#ifdef _OPENMP
    return Backend::parallel;
#else
    return Backend::serial;
#endif
}

std::atomic<Backend> g_backend{default_backend()};

} // namespace

void set_backend(Backend b) { g_backend.store(b); }
Backend active_backend() { return g_backend.load(); }

bool parallel_available() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

#define EGAT_DISPATCH(fn, ...) \
    return active_backend() == Backend::parallel ? parallel::fn(__VA_ARGS__) : serial::fn(__VA_ARGS__)

void matmul_nn(const double* a, const double* b, double* c, int n, int k, int m, bool acc) {
    EGAT_DISPATCH(matmul_nn, a, b, c, n, k, m, acc);
}
void matmul_nt(const double* a, const double* b, double* c, int n, int k, int m, bool acc) {
    EGAT_DISPATCH(matmul_nt, a, b, c, n, k, m, acc);
}
void matmul_tn(const double* a, const double* b, double* c, int n, int k, int m, bool acc) {
    EGAT_DISPATCH(matmul_tn, a, b, c, n, k, m, acc);
}
void add(const double* a, const double* b, double* out, int n) {
    EGAT_DISPATCH(add, a, b, out, n);
}
void axpy(double alpha, const double* x, double* y, int n) {
    EGAT_DISPATCH(axpy, alpha, x, y, n);
}
void scale(const double* a, double s, double* out, int n) {
    EGAT_DISPATCH(scale, a, s, out, n);
}
void hadamard(const double* a, const double* b, double* out, int n) {
    EGAT_DISPATCH(hadamard, a, b, out, n);
}
void hadamard_acc(const double* a, const double* b, double* out, int n) {
    EGAT_DISPATCH(hadamard_acc, a, b, out, n);
}
void leaky_relu_fwd(const double* x, double* y, double slope, int n) {
    EGAT_DISPATCH(leaky_relu_fwd, x, y, slope, n);
}
void leaky_relu_bwd(const double* x, const double* gy, double* gx, double slope, int n) {
    EGAT_DISPATCH(leaky_relu_bwd, x, gy, gx, slope, n);
}
void elu_fwd(const double* x, double* y, int n) {
    EGAT_DISPATCH(elu_fwd, x, y, n);
}
void elu_bwd(const double* y, const double* gy, double* gx, int n) {
    EGAT_DISPATCH(elu_bwd, y, gy, gx, n);
}
void gather_rows(const double* src, const int* idx, double* out, int nslots, int cols) {
    EGAT_DISPATCH(gather_rows, src, idx, out, nslots, cols);
}
void scatter_rows_acc(const double* gout, const int* t_offsets, const int* t_slots,
                      double* gsrc, int nsrc, int cols) {
    EGAT_DISPATCH(scatter_rows_acc, gout, t_offsets, t_slots, gsrc, nsrc, cols);
}
void spmm_csr(const int* offsets, const int* col_idx, const double* vals,
              const double* dense, double* out, int rows, int dense_cols, bool acc) {
    EGAT_DISPATCH(spmm_csr, offsets, col_idx, vals, dense, out, rows, dense_cols, acc);
}
void segment_softmax_fwd(const double* scores, const int* seg_offsets, double* out, int nseg) {
    EGAT_DISPATCH(segment_softmax_fwd, scores, seg_offsets, out, nseg);
}
void segment_softmax_bwd(const double* alpha, const double* galpha, const int* seg_offsets,
                         double* gscores, int nseg) {
    EGAT_DISPATCH(segment_softmax_bwd, alpha, galpha, seg_offsets, gscores, nseg);
}
void weighted_row_sum_fwd(const double* w, const double* feats, const int* src,
                          const int* seg_offsets, double* out, int nseg, int cols) {
    EGAT_DISPATCH(weighted_row_sum_fwd, w, feats, src, seg_offsets, out, nseg, cols);
}
void weighted_row_sum_bwd_w(const double* feats, const int* src, const double* gout,
                            const int* slot_seg, double* gw, int nslots, int cols) {
    EGAT_DISPATCH(weighted_row_sum_bwd_w, feats, src, gout, slot_seg, gw, nslots, cols);
}
void weighted_row_sum_bwd_feats(const double* w, const double* gout, const int* slot_seg,
                                const int* t_offsets, const int* t_slots,
                                double* gfeats, int nfeat_rows, int cols) {
    EGAT_DISPATCH(weighted_row_sum_bwd_feats, w, gout, slot_seg, t_offsets, t_slots, gfeats,
                  nfeat_rows, cols);
}
double reduce_sum(const double* x, int n) {
    EGAT_DISPATCH(reduce_sum, x, n);
}
double reduce_sum_sq(const double* x, int n) {
    EGAT_DISPATCH(reduce_sum_sq, x, n);
}
bool all_finite(const double* x, int n) {
    EGAT_DISPATCH(all_finite, x, n);
}
void adam_update(double* p, const double* g, double* m, double* v, int n,
                 double lr, double beta1, double beta2, double eps,
                 double bias1, double bias2) {
    EGAT_DISPATCH(adam_update, p, g, m, v, n, lr, beta1, beta2, eps, bias1, bias2);
}

#undef EGAT_DISPATCH

} // namespace egat::kernels
