#include "epinet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "epinet/rng.hpp"

namespace epinet {

Graph Graph::from_edges(std::span<const Edge> edges, int node_count) {
  if (node_count < 0) throw std::invalid_argument("graph: negative node count");
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count) {
      throw std::invalid_argument("graph: edge endpoint out of range [0," +
                                  std::to_string(node_count) + "): (" +
                                  std::to_string(u) + "," + std::to_string(v) + ")");
    }
    if (u == v) {
      throw std::invalid_argument("graph: self-loop at node " + std::to_string(u));
    }
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  Graph g;
  g.node_count_ = node_count;
  std::vector<int32_t> deg(static_cast<size_t>(node_count), 0);
  for (const auto& [u, v] : canon) {
    ++deg[static_cast<size_t>(u)];
    ++deg[static_cast<size_t>(v)];
  }
  g.offsets_.assign(static_cast<size_t>(node_count) + 1, 0);
  for (int v = 0; v < node_count; ++v) {
    g.offsets_[static_cast<size_t>(v) + 1] = g.offsets_[v] + deg[static_cast<size_t>(v)];
  }
  g.adjacency_.resize(static_cast<size_t>(g.offsets_[static_cast<size_t>(node_count)]));
  std::vector<int32_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : canon) {
    g.adjacency_[static_cast<size_t>(cursor[static_cast<size_t>(u)]++)] = v;
    g.adjacency_[static_cast<size_t>(cursor[static_cast<size_t>(v)]++)] = u;
  }
  for (int v = 0; v < node_count; ++v) {
    auto nb = g.adjacency_.begin() + g.offsets_[v];
    std::sort(nb, g.adjacency_.begin() + g.offsets_[static_cast<size_t>(v) + 1]);
  }
  g.max_degree_ = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<size_t>(edge_count()));
  for (int u = 0; u < node_count_; ++u) {
    for (const int v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph build_graph(std::span<const Edge> edges, int node_count) {
  return Graph::from_edges(edges, node_count);
}

Graph generate_star(int leaves) {
  if (leaves < 1) throw std::invalid_argument("star: need at least one leaf");
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(leaves));
  for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph::from_edges(edges, leaves + 1);
}

Graph generate_cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: need at least 3 nodes");
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(edges, n);
}

Graph generate_complete(int n) {
  if (n < 1) throw std::invalid_argument("complete: need at least 1 node");
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph::from_edges(edges, n);
}

Graph generate_path(int n) {
  if (n < 1) throw std::invalid_argument("path: need at least 1 node");
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(edges, n);
}

Graph generate_gnp(int n, double p, uint64_t seed) {
  if (n < 0) throw std::invalid_argument("gnp: negative n");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("gnp: p outside [0,1]");
  RngStream rng(derive_seed(seed, 0x676e70));
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform01() < p) edges.emplace_back(u, v);
    }
  }
  return Graph::from_edges(edges, n);
}

Graph generate_grid_torus(int side) {
  if (side < 2) throw std::invalid_argument("torus: side must be >= 2");
  const int n = side * side;
  auto id = [side](int r, int c) { return r * side + c; };
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(2) * n);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      edges.emplace_back(id(r, c), id(r, (c + 1) % side));
      edges.emplace_back(id(r, c), id((r + 1) % side, c));
    }
  }
  return Graph::from_edges(edges, n);  // side 2 wrap duplicates collapse here
}

Graph generate_small_world(int side, double link_exponent, uint64_t seed) {
  if (side < 2) throw std::invalid_argument("small world: side must be >= 2");
  const Graph base = generate_grid_torus(side);
  const int n = side * side;

  // Long-range destination offsets share one categorical distribution: the
  // torus distance depends only on the (dr, dc) offset.
  std::vector<double> cumulative(static_cast<size_t>(n), 0.0);
  double total = 0.0;
  for (int dr = 0; dr < side; ++dr) {
    for (int dc = 0; dc < side; ++dc) {
      const size_t k = static_cast<size_t>(dr) * side + dc;
      if (dr == 0 && dc == 0) {
        cumulative[k] = total;
        continue;
      }
      const int dist = std::min(dr, side - dr) + std::min(dc, side - dc);
      total += std::pow(static_cast<double>(dist), -link_exponent);
      cumulative[k] = total;
    }
  }

  std::vector<Edge> edges = base.edges();
  std::vector<std::vector<int>> extra(static_cast<size_t>(n));
  RngStream rng(derive_seed(seed, 0x73776c64));
  auto already_linked = [&](int u, int v) {
    if (base.has_edge(u, v)) return true;
    const auto& xs = extra[static_cast<size_t>(u)];
    return std::find(xs.begin(), xs.end(), v) != xs.end();
  };
  for (int u = 0; u < n; ++u) {
    for (;;) {
      const double x = rng.uniform01() * total;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
      const size_t k = static_cast<size_t>(it - cumulative.begin());
      const int dr = static_cast<int>(k) / side;
      const int dc = static_cast<int>(k) % side;
      const int v = ((u / side + dr) % side) * side + (u % side + dc) % side;
      if (v == u || already_linked(u, v)) continue;
      edges.emplace_back(u, v);
      extra[static_cast<size_t>(u)].push_back(v);
      extra[static_cast<size_t>(v)].push_back(u);
      break;
    }
  }
  return Graph::from_edges(edges, n);
}

Graph generate_power_law(int n, int attachment_edges, uint64_t seed) {
  if (attachment_edges < 1) throw std::invalid_argument("power law: attachment_edges must be >= 1");
  if (n <= attachment_edges) throw std::invalid_argument("power law: need n > attachment_edges");
  RngStream rng(derive_seed(seed, 0x706c6177));
  std::vector<Edge> edges;
  std::vector<int> endpoints;  // node repeated once per incident edge
  endpoints.reserve(static_cast<size_t>(2) * n * attachment_edges);
  std::vector<int> targets;
  for (int v = 1; v < n; ++v) {
    targets.clear();
    for (int j = 0; j < attachment_edges && j < v; ++j) {
      int t;
      if (endpoints.empty()) {
        t = 0;
      } else {
        t = endpoints[rng.below(endpoints.size())];
      }
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (const int t : targets) {
      edges.emplace_back(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return Graph::from_edges(edges, n);
}

Graph read_edge_list(std::istream& in) {
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || tag != "n") {
    throw std::runtime_error("edge list: expected header line \"n <node_count>\"");
  }
  std::vector<Edge> edges;
  int u, v;
  while (in >> u >> v) edges.emplace_back(u, v);
  return Graph::from_edges(edges, n);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n " << g.node_count() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
}

}  // namespace epinet
