#ifndef EGAT_KERNELS_HPP
#define EGAT_KERNELS_HPP

#include <cstddef>

// Numeric inner loops. Every kernel exists twice: a serial reference
// implementation and an OpenMP one. The two are element-wise identical
// because each output element is reduced in a fixed order by exactly one
// thread, so results do not depend on the thread count.
//
// Scatter-style backward passes take precomputed transpose index lists and
// run as gathers, which keeps them deterministic as well.

namespace egat::kernels {

enum class Backend { serial, parallel };

void set_backend(Backend b);
Backend active_backend();
bool parallel_available();
int thread_count();

namespace serial {

void matmul_nn(const double* a, const double* b, double* c, int n, int k, int m, bool acc);
void matmul_nt(const double* a, const double* b, double* c, int n, int k, int m, bool acc);
void matmul_tn(const double* a, const double* b, double* c, int n, int k, int m, bool acc);

void add(const double* a, const double* b, double* out, int n);
void axpy(double alpha, const double* x, double* y, int n);
void scale(const double* a, double s, double* out, int n);
void hadamard(const double* a, const double* b, double* out, int n);
void hadamard_acc(const double* a, const double* b, double* out, int n);

void leaky_relu_fwd(const double* x, double* y, double slope, int n);
void leaky_relu_bwd(const double* x, const double* gy, double* gx, double slope, int n);
void elu_fwd(const double* x, double* y, int n);
void elu_bwd(const double* y, const double* gy, double* gx, int n);

// idx entries of -1 read as a zero row.
void gather_rows(const double* src, const int* idx, double* out, int nslots, int cols);
// gsrc[r] += sum over slots listed for r. Transpose lists exclude -1 slots.
void scatter_rows_acc(const double* gout, const int* t_offsets, const int* t_slots,
                      double* gsrc, int nsrc, int cols);

void spmm_csr(const int* offsets, const int* col_idx, const double* vals,
              const double* dense, double* out, int rows, int dense_cols, bool acc);

void segment_softmax_fwd(const double* scores, const int* seg_offsets, double* out, int nseg);
void segment_softmax_bwd(const double* alpha, const double* galpha, const int* seg_offsets,
                         double* gscores, int nseg);

void weighted_row_sum_fwd(const double* w, const double* feats, const int* src,
                          const int* seg_offsets, double* out, int nseg, int cols);
void weighted_row_sum_bwd_w(const double* feats, const int* src, const double* gout,
                            const int* slot_seg, double* gw, int nslots, int cols);
void weighted_row_sum_bwd_feats(const double* w, const double* gout, const int* slot_seg,
                                const int* t_offsets, const int* t_slots,
                                double* gfeats, int nfeat_rows, int cols);

double reduce_sum(const double* x, int n);
double reduce_sum_sq(const double* x, int n);
bool all_finite(const double* x, int n);

void adam_update(double* p, const double* g, double* m, double* v, int n,
                 double lr, double beta1, double beta2, double eps,
                 double bias1, double bias2);

} // namespace serial

namespace parallel {

void matmul_nn(const double* a, const double* b, double* c, int n, int k, int m, bool acc);
void matmul_nt(const double* a, const double* b, double* c, int n, int k, int m, bool acc);
void matmul_tn(const double* a, const double* b, double* c, int n, int k, int m, bool acc);

void add(const double* a, const double* b, double* out, int n);
void axpy(double alpha, const double* x, double* y, int n);
void scale(const double* a, double s, double* out, int n);
void hadamard(const double* a, const double* b, double* out, int n);
void hadamard_acc(const double* a, const double* b, double* out, int n);

void leaky_relu_fwd(const double* x, double* y, double slope, int n);
void leaky_relu_bwd(const double* x, const double* gy, double* gx, double slope, int n);
void elu_fwd(const double* x, double* y, int n);
void elu_bwd(const double* y, const double* gy, double* gx, int n);

void gather_rows(const double* src, const int* idx, double* out, int nslots, int cols);
void scatter_rows_acc(const double* gout, const int* t_offsets, const int* t_slots,
                      double* gsrc, int nsrc, int cols);

void spmm_csr(const int* offsets, const int* col_idx, const double* vals,
              const double* dense, double* out, int rows, int dense_cols, bool acc);

void segment_softmax_fwd(const double* scores, const int* seg_offsets, double* out, int nseg);
void segment_softmax_bwd(const double* alpha, const double* galpha, const int* seg_offsets,
                         double* gscores, int nseg);

void weighted_row_sum_fwd(const double* w, const double* feats, const int* src,
                          const int* seg_offsets, double* out, int nseg, int cols);
void weighted_row_sum_bwd_w(const double* feats, const int* src, const double* gout,
                            const int* slot_seg, double* gw, int nslots, int cols);
void weighted_row_sum_bwd_feats(const double* w, const double* gout, const int* slot_seg,
                                const int* t_offsets, const int* t_slots,
                                double* gfeats, int nfeat_rows, int cols);

double reduce_sum(const double* x, int n);
double reduce_sum_sq(const double* x, int n);
bool all_finite(const double* x, int n);

void adam_update(double* p, const double* g, double* m, double* v, int n,
                 double lr, double beta1, double beta2, double eps,
                 double bias1, double bias2);

} // namespace parallel

// Dispatched entry points used by the tensor layer.

void matmul_nn(const double* a, const double* b, double* c, int n, int k, int m, bool acc);
void matmul_nt(const double* a, const double* b, double* c, int n, int k, int m, bool acc);
void matmul_tn(const double* a, const double* b, double* c, int n, int k, int m, bool acc);

void add(const double* a, const double* b, double* out, int n);
void axpy(double alpha, const double* x, double* y, int n);
void scale(const double* a, double s, double* out, int n);
void hadamard(const double* a, const double* b, double* out, int n);
void hadamard_acc(const double* a, const double* b, double* out, int n);

void leaky_relu_fwd(const double* x, double* y, double slope, int n);
void leaky_relu_bwd(const double* x, const double* gy, double* gx, double slope, int n);
void elu_fwd(const double* x, double* y, int n);
void elu_bwd(const double* y, const double* gy, double* gx, int n);

void gather_rows(const double* src, const int* idx, double* out, int nslots, int cols);
void scatter_rows_acc(const double* gout, const int* t_offsets, const int* t_slots,
                      double* gsrc, int nsrc, int cols);

void spmm_csr(const int* offsets, const int* col_idx, const double* vals,
              const double* dense, double* out, int rows, int dense_cols, bool acc);

void segment_softmax_fwd(const double* scores, const int* seg_offsets, double* out, int nseg);
void segment_softmax_bwd(const double* alpha, const double* galpha, const int* seg_offsets,
                         double* gscores, int nseg);

void weighted_row_sum_fwd(const double* w, const double* feats, const int* src,
                          const int* seg_offsets, double* out, int nseg, int cols);
void weighted_row_sum_bwd_w(const double* feats, const int* src, const double* gout,
                            const int* slot_seg, double* gw, int nslots, int cols);
void weighted_row_sum_bwd_feats(const double* w, const double* gout, const int* slot_seg,
                                const int* t_offsets, const int* t_slots,
                                double* gfeats, int nfeat_rows, int cols);

double reduce_sum(const double* x, int n);
double reduce_sum_sq(const double* x, int n);
bool all_finite(const double* x, int n);

void adam_update(double* p, const double* g, double* m, double* v, int n,
                 double lr, double beta1, double beta2, double eps,
                 double bias1, double bias2);

} // namespace egat::kernels

#endif // EGAT_KERNELS_HPP
