#include "gnes/graph.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace gnes {

CommGraph::CommGraph(int n_nodes, std::vector<std::pair<int, int>> edges)
    : n_nodes_(n_nodes), edges_(std::move(edges)) {
  if (n_nodes_ <= 0)
    throw ContractViolation("CommGraph: node count must be positive");
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges_) {
    if (a == b) {
      std::ostringstream msg;
      msg << "CommGraph: self-loop at node " << a + 1;
      throw ContractViolation(msg.str());
    }
    if (a < 0 || b < 0 || a >= n_nodes_ || b >= n_nodes_) {
      std::ostringstream msg;
      msg << "CommGraph: edge (" << a + 1 << ", " << b + 1
          << ") out of range for " << n_nodes_ << " nodes";
      throw ContractViolation(msg.str());
    }
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) {
      std::ostringstream msg;
      msg << "CommGraph: duplicate edge (" << a + 1 << ", " << b + 1 << ")";
      throw ContractViolation(msg.str());
    }
  }
  std::sort(edges_.begin(), edges_.end());
}

int CommGraph::degree(int v) const {
  if (v < 0 || v >= n_nodes_)
    throw ContractViolation("CommGraph: node index out of range");
  int d = 0;
  for (const auto& [a, b] : edges_)
    if (a == v || b == v) ++d;
  return d;
}

Matrix laplacian(const CommGraph& g) {
  Matrix L = Matrix::Zero(g.n_nodes(), g.n_nodes());
  for (const auto& [a, b] : g.edges()) {
    L(a, a) += 1.0;
    L(b, b) += 1.0;
    L(a, b) -= 1.0;
    L(b, a) -= 1.0;
  }
  return L;
}

Vector laplacian_spectrum(const CommGraph& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian(g),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double algebraic_connectivity(const CommGraph& g) {
  if (g.n_nodes() < 2)
    throw ContractViolation(
        "algebraic_connectivity: need at least two nodes");
  return laplacian_spectrum(g)[1];
}

bool is_connected(const CommGraph& g) {
  const int n = g.n_nodes();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : g.edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int count = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        frontier.push(w);
      }
  }
  return count == n;
}

bool gain_condition(double mu, double theta2, double lambda2) {
  return mu * (lambda2 - theta2) > theta2 * theta2;
}

CommGraph parse_graph_text(const std::string& text) {
  std::vector<std::pair<int, int>> edges;
  int max_node = 0;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long a = 0, b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      std::ostringstream msg;
      msg << "graph fixture line " << line_no
          << ": expected exactly two node indices, got '" << line << "'";
      throw ContractViolation(msg.str());
    }
    if (a < 1 || b < 1) {
      std::ostringstream msg;
      msg << "graph fixture line " << line_no
          << ": node indices are 1-based and must be >= 1";
      throw ContractViolation(msg.str());
    }
    max_node = std::max(max_node, static_cast<int>(std::max(a, b)));
    edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  if (edges.empty())
    throw ContractViolation("graph fixture: no edges found");
  return CommGraph(max_node, std::move(edges));
}

CommGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ContractViolation("cannot open graph fixture '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph_text(buffer.str());
}

std::string to_graph_text(const CommGraph& g) {
  std::ostringstream out;
  for (const auto& [a, b] : g.edges()) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

CommGraph benchmark_graph_10() {
  const std::vector<std::pair<int, int>> edges_1based = {
      {1, 4}, {1, 5}, {1, 8}, {1, 9}, {1, 10}, {2, 4}, {2, 5},
      {2, 6}, {2, 9}, {2, 10}, {3, 5}, {3, 6}, {3, 7}, {3, 9},
      {3, 10}, {4, 5}, {4, 6}, {4, 7}, {4, 8}, {4, 9}, {5, 7},
      {5, 8}, {6, 8}, {6, 9}, {8, 10}};
  std::vector<std::pair<int, int>> edges;
  edges.reserve(edges_1based.size());
  for (const auto& [a, b] : edges_1based) edges.emplace_back(a - 1, b - 1);
  return CommGraph(10, std::move(edges));
}

}  // namespace gnes
