#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subdiv/coloring.h"
#include "subdiv/graph.h"
#include "subdiv/impact.h"
#include "subdiv/random.h"
#include "subdiv/security_graph.h"

namespace subdiv::testing {

std::string data_path(const std::string& name);

/// Erdos-Renyi G(n, p).
Graph random_graph(std::size_t n, double p, Rng& rng);

Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t leaves);

/// Every connected graph on n labelled vertices, one per edge subset.
std::vector<Graph> connected_graphs(std::size_t n);

bool connected(const Graph& g);

/// Largest degree among neighbors not exceeding the vertex's own degree,
/// computed by scanning every edge.
std::size_t delta2_by_scan(const Graph& g);

/// The IEEE-14 bundle in data/, classified at threshold 0.25.
struct Ieee14 {
  double p_total = 0.0;
  std::vector<SubstationProfile> profiles;
  SecurityGraph m;
  DiversityGraph g;
  Palette palette = Palette::case_study();
  std::vector<double> psi;
  std::vector<Vertex> order;
};

Ieee14 load_ieee14(double p_total = 187.4);

/// U^v from strengths, summed over neighbors.
double direct_payoff(const Graph& g, Vertex v, const std::vector<int>& strength,
                     const std::vector<double>& psi);

/// Pure equilibrium of the coloring game: each player ranks its colors by
/// fewest conflicting neighbors, then by payoff; no player may gain by a
/// unilateral switch. On proper profiles this is the conflict-free
/// deviation test.
bool is_equilibrium(const Graph& g, const std::vector<int>& color, const std::vector<int>& strengths,
                    const std::vector<double>& psi);

bool proper(const Graph& g, const std::vector<int>& color);

}  // namespace subdiv::testing
