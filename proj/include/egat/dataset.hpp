#ifndef EGAT_DATASET_HPP
#define EGAT_DATASET_HPP

#include <string>
#include <vector>

#include "egat/graph.hpp"

namespace egat {

/// A node-classification problem instance: raw (un-augmented) graph,
/// feature matrices, sparse labels, and the three masks. Masks hold node
/// ids, are pairwise disjoint, and cover labeled nodes only.
struct Dataset {
    Graph graph;
    FeatureMatrix node_features;
    FeatureMatrix edge_features;  // rows == edge count; zero cols means "none"
    std::vector<int> labels;      // per node; -1 = unlabeled
    std::vector<int> train_mask, val_mask, test_mask;
    int num_classes = 0;
    std::string name;
    unsigned long long generation_seed = 0;

    std::vector<int> labeled_nodes() const;
    void validate() const;
};

/// Reads nodes.csv, edges.csv and splits.json from a directory. Malformed
/// rows, dangling node ids, duplicate edges and overlapping masks each
/// raise an IoError naming the problem.
Dataset load_dataset(const std::string& dir);
void save_dataset(const Dataset& d, const std::string& dir);

struct SplitMasks {
    std::vector<int> train, val, test;
};

/// Deterministic 3:1:1 split of the labeled ids: shuffle by seed, then take
/// ceil(3n/5), ceil(n/5), and the remainder. Needs at least 5 ids.
SplitMasks split_labels(const std::vector<int>& labeled_ids, unsigned long long seed);

/// How a node's scalar signal aggregates its incident edge features.
enum class EdgeSignalMode { sum, mean, max };

EdgeSignalMode edge_signal_mode_from_name(const std::string& name);
std::string edge_signal_mode_name(EdgeSignalMode m);

struct TradeGenConfig {
    int n_nodes = 3907;
    int n_edges = 4394;
    int n_labeled = 97;
    int classes = 2;  // 2 or 3
    EdgeSignalMode edge_signal_mode = EdgeSignalMode::sum;
    unsigned long long seed = 1;
    double label_noise = 0.05;  // fraction of labeled nodes flipped
    int node_feat_dim = 4;
    bool constant_node_features = false;  // all-equal rows instead of noise
};

/// Synthetic trade network: connected simple graph, two edge features per
/// edge (transaction count, total amount) drawn from a latent intensity per
/// endpoint, labels cut from the aggregated incident-edge signal at the
/// median (binary) or tertiles (ternary). Node features carry no label
/// information, so the task is edge-sensitive by construction.
Dataset generate_synthetic_trade(const TradeGenConfig& cfg);

/// Published shapes of the two trade datasets.
TradeGenConfig trade_b_preset();  // 3907 nodes, 4394 edges, 97 labeled, C=2
TradeGenConfig trade_m_preset();  // 4431 nodes, 4900 edges, 139 labeled, C=3
TradeGenConfig preset_by_name(const std::string& name);

/// The node signal the generator's labels were cut from (one scalar per
/// node, computed from true incident-edge features). An oracle classifier
/// thresholding this signal recovers every unflipped label.
std::vector<double> incident_signal(const Graph& g, const FeatureMatrix& edge_feats,
                                    EdgeSignalMode mode);

} // namespace egat

#endif // EGAT_DATASET_HPP
