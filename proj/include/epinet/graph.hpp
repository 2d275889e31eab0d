#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace epinet {

using Edge = std::pair<int, int>;

// Immutable undirected simple graph in CSR form with sorted neighbor lists.
// Safe to share read-only across simulation workers.
class Graph {
 public:
  Graph() = default;

  int node_count() const { return node_count_; }
  long long edge_count() const { return static_cast<long long>(adjacency_.size()) / 2; }

  std::span<const int32_t> neighbors(int v) const {
    return {adjacency_.data() + offsets_[v],
            adjacency_.data() + offsets_[static_cast<size_t>(v) + 1]};
  }

  int degree(int v) const { return offsets_[static_cast<size_t>(v) + 1] - offsets_[v]; }

  int max_degree() const { return max_degree_; }
  double avg_degree() const {
    return node_count_ == 0 ? 0.0 : 2.0 * static_cast<double>(edge_count()) / node_count_;
  }

  bool has_edge(int u, int v) const;

  std::vector<Edge> edges() const;

  // Collapses duplicate edges; rejects self-loops and out-of-range indices.
  static Graph from_edges(std::span<const Edge> edges, int node_count);

 private:
  int node_count_ = 0;
  int max_degree_ = 0;
  std::vector<int32_t> offsets_{0};
  std::vector<int32_t> adjacency_;
};

Graph build_graph(std::span<const Edge> edges, int node_count);

// Hub is node 0, leaves 1..leaves.
Graph generate_star(int leaves);
Graph generate_cycle(int n);
Graph generate_complete(int n);
Graph generate_path(int n);
// Each unordered pair present independently with probability p.
Graph generate_gnp(int n, double p, uint64_t seed);
// side x side wrap-around grid; degree 4 for side >= 3 (side 2 collapses to degree 2).
Graph generate_grid_torus(int side);
// Torus plus one long-range edge per node, destination ~ (grid distance)^(-link_exponent);
// draws landing on self or an existing neighbor are rejected and redrawn.
Graph generate_small_world(int side, double link_exponent, uint64_t seed);
// Linear preferential attachment, `attachment_edges` draws per arriving node,
// duplicate draws collapsed. Connected by construction.
Graph generate_power_law(int n, int attachment_edges, uint64_t seed);

// Plain-text exchange format: first line "n <node_count>", then "<u> <v>" per edge.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace epinet
