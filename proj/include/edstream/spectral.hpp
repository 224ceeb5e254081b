#pragma once

#include <vector>

#include "edstream/common.hpp"
#include "edstream/cuts.hpp"
#include "edstream/graph.hpp"

namespace eds {

// Result of an approximate sparsest-cut search.
struct SweepCut {
  Cluster side;  // smaller-volume side; empty when no cut with positive min-side volume exists
  Sparsity sparsity;
};

// Spectral sweep: order the vertices by the second eigenvector of the
// normalised Laplacian (self-loops count towards degrees only) and return the
// prefix cut of least sparsity. A disconnected graph returns a zero-sparsity
// component cut directly. Zero-degree vertices are never placed on the
// smaller side on their own.
SweepCut spectral_sweep(const WeightedGraph& g);

// Second-smallest eigenvalue of the normalised Laplacian D^-1/2 (D - A) D^-1/2.
// Cheeger: every cut S of a graph without loops has Phi(S) >= lambda_2 / 2.
// Zero-degree vertices make the matrix singular; they are rejected.
double normalized_lambda2(const WeightedGraph& g);

}  // namespace eds
