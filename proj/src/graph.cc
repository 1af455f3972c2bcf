#include "subdiv/graph.h"

#include <algorithm>
#include <stdexcept>

namespace subdiv {

Vertex Graph::add_vertex() {
  adj_.emplace_back();
  return adj_.size() - 1;
}

bool Graph::add_edge(Vertex u, Vertex v) {
  if (u >= adj_.size() || v >= adj_.size())
    throw std::invalid_argument("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("self-loop");
  auto& nu = adj_[u];
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) return false;
  nu.insert(it, v);
  auto& nv = adj_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++edges_;
  return true;
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t best = 0;
  for (const auto& n : adj_) best = std::max(best, n.size());
  return best;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& nu = adj_.at(u);
  return std::binary_search(nu.begin(), nu.end(), v);
}

}  // namespace subdiv
