#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace fairgf {

Graph::Graph(int num_nodes, const std::vector<Edge>& edges)
    : num_nodes_(num_nodes) {
  if (num_nodes < 1) {
    throw Error(ErrorKind::invalid_config,
                "graph needs at least one node, got " +
                    std::to_string(num_nodes));
  }
  degrees_.assign(num_nodes, 0);
  edges_.reserve(edges.size());
  std::set<Edge> seen;
  for (const Edge& e : edges) {
    int a = e.first;
    int b = e.second;
    if (a < 0 || a >= num_nodes || b < 0 || b >= num_nodes) {
      throw Error(ErrorKind::index_out_of_range,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) +
                      ") references a node outside [0," +
                      std::to_string(num_nodes) + ")");
    }
    if (a == b) {
      throw Error(ErrorKind::self_loop,
                  "self-loop at node " + std::to_string(a));
    }
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) {
      throw Error(ErrorKind::duplicate_edge,
                  "duplicate edge (" + std::to_string(a) + "," +
                      std::to_string(b) + ")");
    }
    degrees_[a] += 1;
    degrees_[b] += 1;
  }
  edges_.assign(seen.begin(), seen.end());
}

Graph build_graph(int num_nodes, const std::vector<Edge>& edges) {
  return Graph(num_nodes, edges);
}

namespace {

void require_positive_degrees(const Graph& g) {
  for (int i = 0; i < g.num_nodes(); ++i) {
    if (g.degrees()[i] == 0) {
      throw Error(ErrorKind::isolated_node,
                  "node " + std::to_string(i) +
                      " is isolated; normalized adjacency is undefined");
    }
  }
}

}  // namespace

Matrix normalized_adjacency(const Graph& g) {
  require_positive_degrees(g);
  const int n = g.num_nodes();
  Matrix a_hat = Matrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    // One shared value per pair keeps the matrix exactly symmetric.
    const double w =
        1.0 / std::sqrt(static_cast<double>(g.degrees()[e.first]) *
                        static_cast<double>(g.degrees()[e.second]));
    a_hat(e.first, e.second) = w;
    a_hat(e.second, e.first) = w;
  }
  return a_hat;
}

Matrix normalized_laplacian(const Graph& g) {
  require_positive_degrees(g);
  const int n = g.num_nodes();
  Matrix lap = Matrix::Identity(n, n);
  for (const Edge& e : g.edges()) {
    const double w =
        1.0 / std::sqrt(static_cast<double>(g.degrees()[e.first]) *
                        static_cast<double>(g.degrees()[e.second]));
    lap(e.first, e.second) = -w;
    lap(e.second, e.first) = -w;
  }
  return lap;
}

}  // namespace fairgf
