#pragma once

#include <random>
#include <string>
#include <vector>

#include "edstream/graph.hpp"
#include "edstream/prf.hpp"

namespace eds {

MultiGraph erdos_renyi(int n, double p, std::mt19937_64& rng);
MultiGraph complete_graph(int n);
MultiGraph path_graph(int n);
MultiGraph cycle_graph(int n);
MultiGraph star_graph(int leaves);

// Disjoint union; vertices of `b` are shifted by a.n().
MultiGraph disjoint_union(const MultiGraph& a, const MultiGraph& b);

// Seeded uniform-ish random simple d-regular graph via the configuration
// model with rejection of loops and parallel edges. Throws ParameterError
// when n*d is odd or d >= n, and Error after `max_attempts` rejections.
MultiGraph random_regular(int n, int d, std::mt19937_64& rng, int max_attempts = 2000);

// Every connected graph on exactly k vertices (1 <= k <= 7), one
// representative per isomorphism class.
std::vector<MultiGraph> connected_graphs_up_to_iso(int k);

// A named structured test graph.
struct NamedGraph {
  std::string name;
  MultiGraph graph;
};

// Structured battery: disjoint cliques, barbells and expanders with pendant
// blobs, all with at most 48 vertices.
std::vector<NamedGraph> structured_battery();

}  // namespace eds
