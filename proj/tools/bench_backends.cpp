// Times the serial reference kernels against the OpenMP backend on the
// hot primitives and prints a comparison table plus max divergence.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "egat/kernels.hpp"
#include "egat/rng.hpp"

using namespace egat;

namespace {

double time_best_of(int repeats, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

struct Row {
    std::string name;
    double serial_s;
    double parallel_s;
    double max_abs_diff;
};

} // namespace

int main() {
    Rng rng(7);
    const int n = 512, k = 96, m = 512;
    std::vector<double> a(static_cast<size_t>(n) * k), b(static_cast<size_t>(k) * m);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    std::vector<double> big(2'000'000);
    for (auto& x : big) x = rng.normal();

    std::vector<Row> rows;
    const int reps = 7;

    {
        std::vector<double> out_s(static_cast<size_t>(n) * m), out_p(out_s.size());
        const double ts = time_best_of(reps, [&] {
            kernels::serial::matmul_nn(a.data(), b.data(), out_s.data(), n, k, m, false);
        });
        const double tp = time_best_of(reps, [&] {
            kernels::parallel::matmul_nn(a.data(), b.data(), out_p.data(), n, k, m, false);
        });
        double diff = 0.0;
        for (size_t i = 0; i < out_s.size(); ++i) diff = std::max(diff, std::abs(out_s[i] - out_p[i]));
        rows.push_back({"matmul_nn 512x96x512", ts, tp, diff});
    }
    {
        double out_s = 0.0, out_p = 0.0;
        const double ts = time_best_of(reps, [&] {
            out_s = kernels::serial::reduce_sum_sq(big.data(), static_cast<int>(big.size()));
        });
        const double tp = time_best_of(reps, [&] {
            out_p = kernels::parallel::reduce_sum_sq(big.data(), static_cast<int>(big.size()));
        });
        rows.push_back({"reduce_sum_sq 2e6", ts, tp, std::abs(out_s - out_p)});
    }
    const int nbig = static_cast<int>(big.size());
    {
        std::vector<double> out_s(big.size()), out_p(big.size());
        const double ts = time_best_of(reps, [&] {
            kernels::serial::elu_fwd(big.data(), out_s.data(), nbig);
        });
        const double tp = time_best_of(reps, [&] {
            kernels::parallel::elu_fwd(big.data(), out_p.data(), nbig);
        });
        double diff = 0.0;
        for (size_t i = 0; i < out_s.size(); ++i) diff = std::max(diff, std::abs(out_s[i] - out_p[i]));
        rows.push_back({"elu_fwd 2e6", ts, tp, diff});
    }
    {
        std::vector<double> out_s(big.size()), out_p(big.size());
        const double ts = time_best_of(reps, [&] {
            kernels::serial::hadamard(big.data(), big.data(), out_s.data(), nbig);
        });
        const double tp = time_best_of(reps, [&] {
            kernels::parallel::hadamard(big.data(), big.data(), out_p.data(), nbig);
        });
        double diff = 0.0;
        for (size_t i = 0; i < out_s.size(); ++i) diff = std::max(diff, std::abs(out_s[i] - out_p[i]));
        rows.push_back({"hadamard 2e6", ts, tp, diff});
    }

    std::printf("%-24s %12s %12s %10s %14s\n", "kernel", "serial (s)", "openmp (s)", "speedup",
                "max |diff|");
    for (const auto& r : rows) {
        std::printf("%-24s %12.6f %12.6f %9.2fx %14.3e\n", r.name.c_str(), r.serial_s,
                    r.parallel_s, r.serial_s / r.parallel_s, r.max_abs_diff);
    }
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.max_abs_diff);
    std::printf("\nbackends agree bit-for-bit: %s\n", worst == 0.0 ? "yes" : "NO");
    return worst == 0.0 ? 0 : 1;
}
