#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace subdiv {

using Vertex = std::size_t;

/// Simple undirected graph over vertices 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  explicit Graph(std::size_t n = 0) : adj_(n) {}

  Vertex add_vertex();

  /// Adds {u, v}. Returns false if the edge already exists.
  /// Throws std::invalid_argument on self-loops or out-of-range vertices.
  bool add_edge(Vertex u, Vertex v);

  std::size_t size() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }
  std::size_t max_degree() const noexcept;
  bool adjacent(Vertex u, Vertex v) const;

  std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(v); }

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::size_t edges_ = 0;
};

}  // namespace subdiv
