#pragma once

// The variational functionals on antisymmetric loops:
//   f(q) = 1/2 int |qdot|^2 * int (H - V(q)),   F = -f,
//   g(q) = int (V(q) + 1/2 (grad V(q), q)),
// together with exact discrete gradients with respect to the free
// half-interval nodes.

#include "orbit/json_writer.hpp"
#include "orbit/loop.hpp"
#include "orbit/potential.hpp"

namespace orbit {

Scalar eval_g(const SymmetricLoop& loop, const PotentialSpec& spec);
Scalar eval_f(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H);
Scalar eval_F(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H);

/// <f'(q), q> = dirichlet * int (H - V - 1/2 (grad V, q)).
Scalar pairing_f_prime_q(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H);

/// Gradient of the discrete Dirichlet energy over free nodes q_1..q_{n-1}.
Vec grad_dirichlet_free(const SymmetricLoop& loop);

/// Gradient of the discrete int V over free nodes.
Vec grad_intV_free(const SymmetricLoop& loop, const PotentialSpec& spec);

/// Gradient of the discrete g over free nodes.
Vec grad_g_free(const SymmetricLoop& loop, const PotentialSpec& spec);

/// Exact gradient of the discrete F (product rule over both factors).
Vec grad_F_free_nodes(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H);

struct FunctionalReport {
  Scalar f_value = 0;
  Scalar F_value = 0;
  Scalar g_value = 0;
  Scalar constraint_residual = 0;  // g - H
  Scalar grad_norm = 0;            // |grad F| over free nodes
  Scalar energy_H = 0;
  bool off_constraint = false;  // |g - H| > 1e-4: F has no on-manifold meaning
};

FunctionalReport make_functional_report(const SymmetricLoop& loop, const PotentialSpec& spec,
                                        Scalar H);

JsonValue functional_report_json(const FunctionalReport& report);

}  // namespace orbit
