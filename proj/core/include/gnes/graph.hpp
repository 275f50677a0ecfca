#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gnes/types.hpp"

namespace gnes {

/// Undirected, unweighted communication graph. Nodes are 0-based internally;
/// the text fixture format is 1-based. Edges are stored normalized (i < j),
/// self-loops and duplicates are rejected.
class CommGraph {
 public:
  CommGraph(int n_nodes, std::vector<std::pair<int, int>> edges);

  int n_nodes() const { return n_nodes_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int degree(int v) const;

 private:
  int n_nodes_ = 0;
  std::vector<std::pair<int, int>> edges_;
};

Matrix laplacian(const CommGraph& g);

/// Eigenvalues of the Laplacian in ascending order.
Vector laplacian_spectrum(const CommGraph& g);

/// Second-smallest Laplacian eigenvalue; positive iff the graph is connected.
double algebraic_connectivity(const CommGraph& g);

bool is_connected(const CommGraph& g);

/// Strict sufficient condition mu * (lambda2 - theta2) > theta2^2 linking the
/// game constants to the graph: it fails (rather than degenerating) when
/// lambda2 <= theta2.
bool gain_condition(double mu, double theta2, double lambda2);

/// Parses the edge-list fixture format: one edge per line as "i j" with
/// 1-based node indices, '#' starts a comment line, blank lines ignored.
/// The node count is the largest index seen.
CommGraph parse_graph_text(const std::string& text);
CommGraph load_graph_file(const std::string& path);

/// Canonical serialization in the same fixture format.
std::string to_graph_text(const CommGraph& g);

/// Built-in 10-node benchmark graph used by the shipped scenarios
/// (algebraic connectivity 2.6158).
CommGraph benchmark_graph_10();

}  // namespace gnes
