#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "error.hpp"

namespace fairgf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Unordered node-index pair.
using Edge = std::pair<int, int>;

/// Undirected simple graph with {0,1} adjacency. Immutable after
/// construction; the constructor validates (no self-loops, no duplicate
/// edges, endpoints in range) and canonicalizes edges as (min,max) sorted.
class Graph {
public:
  Graph(int num_nodes, const std::vector<Edge>& edges);

  int num_nodes() const noexcept { return num_nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  int degree(int node) const { return degrees_.at(node); }

private:
  int num_nodes_;
  std::vector<Edge> edges_;
  std::vector<int> degrees_;
};

/// Validating construction entry point; edge order never affects the result.
Graph build_graph(int num_nodes, const std::vector<Edge>& edges);

/// A_hat = D^{-1/2} A D^{-1/2}. Exactly symmetric by construction.
/// Throws isolated_node if any degree is zero (D^{-1/2} undefined).
Matrix normalized_adjacency(const Graph& g);

/// L = I - A_hat. Symmetric positive semi-definite, eigenvalues in [0,2].
Matrix normalized_laplacian(const Graph& g);

}  // namespace fairgf
