#pragma once

// Discrete antisymmetric loops with pinned endpoints, stored on the half
// interval t in [0, 1/2].  The implied full loop satisfies
// q(t + 1/2) = -q(t) by construction, so no operation can break it.

#include <string>

#include "orbit/potential.hpp"
#include "orbit/types.hpp"

namespace orbit {

struct SymmetricLoop {
  int dimension = 2;
  int segments = 0;          // n: half-interval segment count, even
  Scalar endpoint_radius = 0;  // R
  Vec direction;             // e, unit
  Mat half_nodes;            // dimension x (n+1), columns q_0 .. q_n

  Scalar dt() const { return 1.0 / (2.0 * segments); }
  int free_count() const { return segments - 1; }
};

/// Builds a loop from interior nodes q_1..q_{n-1}; endpoints are pinned to
/// +-R e.  Rejects non-unit directions, odd/small n and collision nodes.
SymmetricLoop make_loop(int dimension, int n, Scalar R, const Vec& e, const Mat& interior);

/// The 2n+1 nodes of the full loop on [0, 1]; trace[n+j] = -trace[j].
Mat full_trace(const SymmetricLoop& loop);

/// Forward-difference Dirichlet energy of the full loop, int_0^1 |qdot|^2 dt.
Scalar dirichlet_energy(const SymmetricLoop& loop);

/// Trapezoid quadrature of V along the full trace (uses evenness of V).
Scalar integral_of_potential(const SymmetricLoop& loop, const PotentialSpec& spec);

Scalar min_interior_radius(const SymmetricLoop& loop);

/// Free interior nodes flattened node-major (q_1 .. q_{n-1}).
Vec to_free_vector(const SymmetricLoop& loop);
SymmetricLoop with_free_vector(const SymmetricLoop& loop, const Vec& z);

void save_loop_csv(const SymmetricLoop& loop, const std::string& path);
SymmetricLoop load_loop_csv(const std::string& path);

}  // namespace orbit
