#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graph.hpp"
#include "metrics.hpp"

namespace fairgf {

/// Attributed graph for node classification. sensitive is strictly {-1,+1};
/// labels hold 0/1 where label_known is true (0 elsewhere).
struct Dataset {
  Graph graph;
  Matrix features;               // N x F
  Vector sensitive;              // +-1 per node
  std::vector<int> labels;       // 0/1 per node
  std::vector<bool> label_known;

  int num_nodes() const noexcept { return graph.num_nodes(); }
  int num_features() const noexcept {
    return static_cast<int>(features.cols());
  }
};

struct DatasetStats {
  long group_neg = 0;     // |S_{-1}|
  long group_pos = 0;     // |S_{+1}|
  long inter_edges = 0;   // endpoints in different sensitive groups
  long intra_edges = 0;
  int num_features = 0;

  std::string to_json() const;
};

/// Column names locating id/sensitive/label in the node CSV; every other
/// column is read as a numeric feature.
struct ColumnSchema {
  std::string id = "id";
  std::string sensitive = "sensitive";
  std::string label = "label";
};

/// Node CSV (header row; sensitive in {0,1} mapped to {-1,+1}; label in
/// {0,1}, -1 or empty = unknown) plus a whitespace/comma-separated edge list
/// of id pairs. Nodes are reindexed 0-based in file order. Repeated edge
/// pairs in the file are collapsed; self-loops are rejected.
Dataset load_dataset(const std::filesystem::path& node_file,
                     const std::filesystem::path& edge_file,
                     const ColumnSchema& schema, bool standardize = false);

/// Inverse of load_dataset for generated data; full-precision floats so a
/// round trip reproduces the dataset exactly.
void save_dataset(const Dataset& data, const std::filesystem::path& node_file,
                  const std::filesystem::path& edge_file);

DatasetStats dataset_stats(const Dataset& data);

/// Two-block stochastic block model with the sensitive attribute as the
/// block id. Latent labels align with the block and flip with probability
/// label_flip; features are one-hot(label) ++ one-hot(group) padded to
/// feature_dim, with N(0, feature_noise^2) added everywhere.
struct SbmConfig {
  int group_neg = 100;        // nodes with s = -1
  int group_pos = 100;        // nodes with s = +1
  double p_intra = 0.1;
  double p_inter = 0.01;
  double label_flip = 0.1;
  int feature_dim = 8;
  double feature_noise = 0.1;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Deterministic under cfg.seed. Nodes left isolated by the Bernoulli draws
/// get one uniformly random edge so every degree is positive.
Dataset generate_sbm(const SbmConfig& cfg);

struct SplitMasks {
  IndexSet train;
  IndexSet val;
  IndexSet test;
};

/// Seeded uniform shuffle of the label-known nodes, then a contiguous cut.
/// Sizes are floor-based with the remainder going to test. Throws
/// too_few_nodes if any split would be empty.
SplitMasks split_nodes(const std::vector<bool>& label_known,
                       const std::array<double, 3>& fractions,
                       std::uint64_t seed);

}  // namespace fairgf
