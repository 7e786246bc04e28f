#ifndef EGAT_BENCH_HPP
#define EGAT_BENCH_HPP

#include <vector>

namespace egat {

struct BenchPoint {
    int degree = 0;
    long long sum_deg_sq = 0;  // sum of squared node degrees, augmented graph
    long long slots = 0;       // neighborhood entries in the edge attention plan
    double seconds = 0.0;      // per forward pass
};

struct BenchResult {
    std::vector<BenchPoint> points;
    /// Least-squares slope of log(seconds) against log(degree).
    double gamma = 0.0;
};

/// Times the edge attention block (coefficient assembly + aggregation) on
/// star graphs with the given hub degrees, using the serial backend for a
/// clean scaling signal. Dense transforms are precomputed outside the timed
/// region; feat_dim sets the transformed edge feature width so per-slot
/// work dominates. Runtime per degree adapts so small cases are repeated
/// more, and each point keeps its best of five timing rounds.
BenchResult benchmark_edge_attention(const std::vector<int>& degrees, int feat_dim,
                                     int min_repeats);

} // namespace egat

#endif // EGAT_BENCH_HPP
