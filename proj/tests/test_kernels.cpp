#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "egat/kernels.hpp"
#include "egat/rng.hpp"

using namespace egat;

namespace {

std::vector<double> random_vec(Rng& rng, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.normal();
    return v;
}

// Segment offsets covering [0, total) with random cut points.
std::vector<int> random_segments(Rng& rng, int total, int nseg) {
    std::vector<int> cuts{0, total};
    for (int i = 0; i < nseg - 1; ++i) {
        cuts.push_back(1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(total - 1))));
    }
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

} // namespace

TEST_CASE("matmul variants match a naive triple loop") {
    Rng rng(11);
    const int n = 7, k = 5, m = 6;
    const auto a = random_vec(rng, n * k);
    const auto b = random_vec(rng, k * m);
    std::vector<double> c(static_cast<std::size_t>(n) * m, 0.0);
    kernels::serial::matmul_nn(a.data(), b.data(), c.data(), n, k, m, false);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            double want = 0.0;
            for (int l = 0; l < k; ++l) want += a[static_cast<std::size_t>(i) * k + l] *
                                                b[static_cast<std::size_t>(l) * m + j];
            CHECK(c[static_cast<std::size_t>(i) * m + j] == doctest::Approx(want).epsilon(1e-13));
        }
    }

    // nt: c = a(n x k) * b(m x k)^T
    const auto bt = random_vec(rng, m * k);
    std::vector<double> cnt(static_cast<std::size_t>(n) * m, 0.0);
    kernels::serial::matmul_nt(a.data(), bt.data(), cnt.data(), n, k, m, false);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            double want = 0.0;
            for (int l = 0; l < k; ++l) want += a[static_cast<std::size_t>(i) * k + l] *
                                                bt[static_cast<std::size_t>(j) * k + l];
            CHECK(cnt[static_cast<std::size_t>(i) * m + j] == doctest::Approx(want).epsilon(1e-13));
        }
    }

    // tn: c = a(n x k)^T * b(n x m)
    const auto bn = random_vec(rng, n * m);
    std::vector<double> ctn(static_cast<std::size_t>(k) * m, 0.0);
    kernels::serial::matmul_tn(a.data(), bn.data(), ctn.data(), n, k, m, false);
    for (int l = 0; l < k; ++l) {
        for (int j = 0; j < m; ++j) {
            double want = 0.0;
            for (int i = 0; i < n; ++i) want += a[static_cast<std::size_t>(i) * k + l] *
                                                bn[static_cast<std::size_t>(i) * m + j];
            CHECK(ctn[static_cast<std::size_t>(l) * m + j] == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("accumulate flag adds on top of the existing output") {
    Rng rng(12);
    const int n = 4, k = 3, m = 5;
    const auto a = random_vec(rng, n * k);
    const auto b = random_vec(rng, k * m);
    std::vector<double> once(static_cast<std::size_t>(n) * m, 0.0);
    kernels::serial::matmul_nn(a.data(), b.data(), once.data(), n, k, m, false);
    std::vector<double> twice = once;
    kernels::serial::matmul_nn(a.data(), b.data(), twice.data(), n, k, m, true);
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(twice[i] == doctest::Approx(2.0 * once[i]).epsilon(1e-14));
    }
}

TEST_CASE("serial and parallel backends agree bit for bit") {
    Rng rng(13);
    // Sizes straddle the reduction chunk size so the chunked code paths run.
    for (int n : {1, 17, 1000, 8192, 8193, 30000}) {
        CAPTURE(n);
        const auto x = random_vec(rng, n);
        const auto y = random_vec(rng, n);

        CHECK(kernels::serial::reduce_sum(x.data(), n) == kernels::parallel::reduce_sum(x.data(), n));
        CHECK(kernels::serial::reduce_sum_sq(x.data(), n) ==
              kernels::parallel::reduce_sum_sq(x.data(), n));

        std::vector<double> out_s(static_cast<std::size_t>(n)), out_p(static_cast<std::size_t>(n));
        kernels::serial::hadamard(x.data(), y.data(), out_s.data(), n);
        kernels::parallel::hadamard(x.data(), y.data(), out_p.data(), n);
        CHECK(out_s == out_p);

        kernels::serial::elu_fwd(x.data(), out_s.data(), n);
        kernels::parallel::elu_fwd(x.data(), out_p.data(), n);
        CHECK(out_s == out_p);

        kernels::serial::leaky_relu_fwd(x.data(), out_s.data(), 0.2, n);
        kernels::parallel::leaky_relu_fwd(x.data(), out_p.data(), 0.2, n);
        CHECK(out_s == out_p);
    }

    for (auto [n, k, m] : {std::tuple{3, 4, 5}, {20, 30, 10}, {64, 64, 64}}) {
        CAPTURE(n);
        const auto a = random_vec(rng, n * k);
        const auto b = random_vec(rng, k * m);
        const auto bt = random_vec(rng, m * k);
        const auto bn = random_vec(rng, n * m);
        std::vector<double> cs(static_cast<std::size_t>(n) * m), cp(cs);
        kernels::serial::matmul_nn(a.data(), b.data(), cs.data(), n, k, m, false);
        kernels::parallel::matmul_nn(a.data(), b.data(), cp.data(), n, k, m, false);
        CHECK(cs == cp);
        kernels::serial::matmul_nt(a.data(), bt.data(), cs.data(), n, k, m, false);
        kernels::parallel::matmul_nt(a.data(), bt.data(), cp.data(), n, k, m, false);
        CHECK(cs == cp);
        std::vector<double> ts(static_cast<std::size_t>(k) * m), tp(ts);
        kernels::serial::matmul_tn(a.data(), bn.data(), ts.data(), n, k, m, false);
        kernels::parallel::matmul_tn(a.data(), bn.data(), tp.data(), n, k, m, false);
        CHECK(ts == tp);
    }
}

TEST_CASE("segment softmax rows sum to one and match a direct computation") {
    Rng rng(14);
    const int total = 200, nseg = 23;
    const auto offsets = random_segments(rng, total, nseg);
    const auto scores = random_vec(rng, total);
    std::vector<double> alpha_s(static_cast<std::size_t>(total)), alpha_p(alpha_s);
    kernels::serial::segment_softmax_fwd(scores.data(), offsets.data(), alpha_s.data(),
                                         static_cast<int>(offsets.size()) - 1);
    kernels::parallel::segment_softmax_fwd(scores.data(), offsets.data(), alpha_p.data(),
                                           static_cast<int>(offsets.size()) - 1);
    CHECK(alpha_s == alpha_p);
    for (std::size_t g = 0; g + 1 < offsets.size(); ++g) {
        if (offsets[g] == offsets[g + 1]) continue;  // random cuts may coincide
        double sum = 0.0;
        double direct_denom = 0.0;
        double mx = scores[static_cast<std::size_t>(offsets[g])];
        for (int i = offsets[g]; i < offsets[g + 1]; ++i) mx = std::max(mx, scores[static_cast<std::size_t>(i)]);
        for (int i = offsets[g]; i < offsets[g + 1]; ++i) {
            direct_denom += std::exp(scores[static_cast<std::size_t>(i)] - mx);
        }
        for (int i = offsets[g]; i < offsets[g + 1]; ++i) {
            sum += alpha_s[static_cast<std::size_t>(i)];
            const double direct = std::exp(scores[static_cast<std::size_t>(i)] - mx) / direct_denom;
            CHECK(alpha_s[static_cast<std::size_t>(i)] == doctest::Approx(direct).epsilon(1e-14));
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gather and scatter round trip through the transpose lists") {
    Rng rng(15);
    const int nsrc = 9, cols = 4;
    const auto src = random_vec(rng, nsrc * cols);
    std::vector<int> idx{3, -1, 0, 3, 8, 2, -1, 5};
    const int nslots = static_cast<int>(idx.size());

    std::vector<double> out_s(static_cast<std::size_t>(nslots) * cols), out_p(out_s);
    kernels::serial::gather_rows(src.data(), idx.data(), out_s.data(), nslots, cols);
    kernels::parallel::gather_rows(src.data(), idx.data(), out_p.data(), nslots, cols);
    CHECK(out_s == out_p);
    for (int s = 0; s < nslots; ++s) {
        for (int c = 0; c < cols; ++c) {
            const double want = idx[static_cast<std::size_t>(s)] < 0
                                    ? 0.0
                                    : src[static_cast<std::size_t>(idx[static_cast<std::size_t>(s)]) * cols + c];
            CHECK(out_s[static_cast<std::size_t>(s) * cols + c] == want);
        }
    }

    // Transpose lists for the scatter: row r collects slots with idx==r.
    std::vector<int> t_offsets(nsrc + 1, 0), t_slots;
    for (int r = 0; r < nsrc; ++r) {
        for (int s = 0; s < nslots; ++s) {
            if (idx[static_cast<std::size_t>(s)] == r) t_slots.push_back(s);
        }
        t_offsets[static_cast<std::size_t>(r) + 1] = static_cast<int>(t_slots.size());
    }
    const auto gout = random_vec(rng, nslots * cols);
    std::vector<double> gsrc_s(static_cast<std::size_t>(nsrc) * cols, 0.0), gsrc_p(gsrc_s);
    kernels::serial::scatter_rows_acc(gout.data(), t_offsets.data(), t_slots.data(), gsrc_s.data(),
                                      nsrc, cols);
    kernels::parallel::scatter_rows_acc(gout.data(), t_offsets.data(), t_slots.data(),
                                        gsrc_p.data(), nsrc, cols);
    CHECK(gsrc_s == gsrc_p);
    for (int r = 0; r < nsrc; ++r) {
        for (int c = 0; c < cols; ++c) {
            double want = 0.0;
            for (int s = 0; s < nslots; ++s) {
                if (idx[static_cast<std::size_t>(s)] == r) want += gout[static_cast<std::size_t>(s) * cols + c];
            }
            CHECK(gsrc_s[static_cast<std::size_t>(r) * cols + c] == doctest::Approx(want).epsilon(1e-14));
        }
    }
}

TEST_CASE("weighted row sum forward and backward agree across backends") {
    Rng rng(16);
    const int nseg = 6, cols = 3, nfeat = 7;
    std::vector<int> offsets{0, 2, 5, 6, 9, 11, 13};
    const int total = offsets.back();
    std::vector<int> src(static_cast<std::size_t>(total));
    std::vector<int> slot_seg(static_cast<std::size_t>(total));
    for (int g = 0; g < nseg; ++g) {
        for (int s = offsets[static_cast<std::size_t>(g)]; s < offsets[static_cast<std::size_t>(g) + 1]; ++s) {
            slot_seg[static_cast<std::size_t>(s)] = g;
            src[static_cast<std::size_t>(s)] =
                (s % 5 == 0) ? -1 : static_cast<int>(rng.uniform_index(nfeat));
        }
    }
    const auto w = random_vec(rng, total);
    const auto feats = random_vec(rng, nfeat * cols);

    std::vector<double> out_s(static_cast<std::size_t>(nseg) * cols), out_p(out_s);
    kernels::serial::weighted_row_sum_fwd(w.data(), feats.data(), src.data(), offsets.data(),
                                          out_s.data(), nseg, cols);
    kernels::parallel::weighted_row_sum_fwd(w.data(), feats.data(), src.data(), offsets.data(),
                                            out_p.data(), nseg, cols);
    CHECK(out_s == out_p);
    for (int g = 0; g < nseg; ++g) {
        for (int c = 0; c < cols; ++c) {
            double want = 0.0;
            for (int s = offsets[static_cast<std::size_t>(g)]; s < offsets[static_cast<std::size_t>(g) + 1]; ++s) {
                if (src[static_cast<std::size_t>(s)] >= 0) {
                    want += w[static_cast<std::size_t>(s)] *
                            feats[static_cast<std::size_t>(src[static_cast<std::size_t>(s)]) * cols + c];
                }
            }
            CHECK(out_s[static_cast<std::size_t>(g) * cols + c] == doctest::Approx(want).epsilon(1e-13));
        }
    }

    const auto gout = random_vec(rng, nseg * cols);
    std::vector<double> gw_s(static_cast<std::size_t>(total), 0.0), gw_p(gw_s);
    kernels::serial::weighted_row_sum_bwd_w(feats.data(), src.data(), gout.data(), slot_seg.data(),
                                            gw_s.data(), total, cols);
    kernels::parallel::weighted_row_sum_bwd_w(feats.data(), src.data(), gout.data(),
                                              slot_seg.data(), gw_p.data(), total, cols);
    CHECK(gw_s == gw_p);

    std::vector<int> t_offsets(nfeat + 1, 0), t_slots;
    for (int r = 0; r < nfeat; ++r) {
        for (int s = 0; s < total; ++s) {
            if (src[static_cast<std::size_t>(s)] == r) t_slots.push_back(s);
        }
        t_offsets[static_cast<std::size_t>(r) + 1] = static_cast<int>(t_slots.size());
    }
    std::vector<double> gf_s(static_cast<std::size_t>(nfeat) * cols, 0.0), gf_p(gf_s);
    kernels::serial::weighted_row_sum_bwd_feats(w.data(), gout.data(), slot_seg.data(),
                                                t_offsets.data(), t_slots.data(), gf_s.data(),
                                                nfeat, cols);
    kernels::parallel::weighted_row_sum_bwd_feats(w.data(), gout.data(), slot_seg.data(),
                                                  t_offsets.data(), t_slots.data(), gf_p.data(),
                                                  nfeat, cols);
    CHECK(gf_s == gf_p);
}

TEST_CASE("spmm matches a dense product") {
    Rng rng(17);
    // 3x4 sparse matrix in CSR.
    std::vector<int> offsets{0, 2, 3, 5};
    std::vector<int> cols_idx{0, 2, 1, 0, 3};
    std::vector<double> vals{1.5, -2.0, 0.5, 3.0, 1.0};
    const int cols = 2;
    const auto dense = random_vec(rng, 4 * cols);
    std::vector<double> out_s(3 * static_cast<std::size_t>(cols), 0.0), out_p(out_s);
    kernels::serial::spmm_csr(offsets.data(), cols_idx.data(), vals.data(), dense.data(),
                              out_s.data(), 3, cols, false);
    kernels::parallel::spmm_csr(offsets.data(), cols_idx.data(), vals.data(), dense.data(),
                                out_p.data(), 3, cols, false);
    CHECK(out_s == out_p);
    CHECK(out_s[0] == doctest::Approx(1.5 * dense[0] - 2.0 * dense[4]).epsilon(1e-14));
    CHECK(out_s[2 * cols + 1] == doctest::Approx(3.0 * dense[1] + 1.0 * dense[7]).epsilon(1e-14));
}

TEST_CASE("all_finite flags infinities and nans") {
    std::vector<double> ok{1.0, -2.0, 0.0};
    std::vector<double> bad_inf{1.0, INFINITY};
    std::vector<double> bad_nan{NAN};
    for (auto* f : {&kernels::serial::all_finite, &kernels::parallel::all_finite}) {
        CHECK((*f)(ok.data(), 3));
        CHECK_FALSE((*f)(bad_inf.data(), 2));
        CHECK_FALSE((*f)(bad_nan.data(), 1));
    }
}

TEST_CASE("adam matches the closed-form first step and both backends agree") {
    const int n = 3;
    const std::vector<double> p0{1.0, -2.0, 0.5};
    const std::vector<double> g{0.3, -0.1, 0.0};
    const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;

    std::vector<double> ps = p0, ms(n, 0.0), vs(n, 0.0);
    kernels::serial::adam_update(ps.data(), g.data(), ms.data(), vs.data(), n, lr, b1, b2, eps,
                                 1.0 - b1, 1.0 - b2);
    std::vector<double> pp = p0, mp(n, 0.0), vp(n, 0.0);
    kernels::parallel::adam_update(pp.data(), g.data(), mp.data(), vp.data(), n, lr, b1, b2, eps,
                                   1.0 - b1, 1.0 - b2);
    CHECK(ps == pp);
    CHECK(ms == mp);
    CHECK(vs == vp);

    for (int i = 0; i < n; ++i) {
        // On step one the bias corrections collapse: m_hat = g, v_hat = g^2.
        const double gi = g[static_cast<std::size_t>(i)];
        const double want = p0[static_cast<std::size_t>(i)] -
                            lr * gi / (std::sqrt(gi * gi) + eps);
        CHECK(ps[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-12));
    }
    // Zero gradient leaves the parameter untouched on the first step.
    CHECK(ps[2] == p0[2]);
}
