#pragma once

// Constrained minimizer: Dirichlet energy over the free interior half-nodes
// subject to g(q) = H, endpoints pinned and antisymmetry structural.
// Augmented Lagrangian with an L-BFGS line-search inner loop, followed by a
// Newton polish of the KKT system to reach the stationarity target.

#include <string>
#include <vector>

#include "orbit/functional.hpp"
#include "orbit/json_writer.hpp"
#include "orbit/loop.hpp"

namespace orbit {

struct SolverConfig {
  Scalar tol_kkt = 1e-8;         // projected-gradient norm target
  Scalar tol_constraint = 1e-9;  // |g - H| / H target
  int max_outer = 50;
  int max_inner = 2000;
  Scalar penalty_init = 10.0;
  Scalar penalty_growth = 5.0;
  Scalar collision_floor_rel = 1e-6;  // floor = rel * R
  Scalar ls_shrink = 0.5;
  Scalar ls_sufficient_decrease = 1e-4;
  int lbfgs_memory = 10;
  int newton_max = 15;
};

enum class SolveStatus { Converged, MaxIterations, CollisionAbort };

std::string to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  int outer_iterations = 0;
  int inner_iterations = 0;
  int newton_iterations = 0;
  Scalar f_value = 0;
  Scalar F_value = 0;
  Scalar g_value = 0;
  Scalar constraint_residual = 0;  // |g - H| / H
  Scalar kkt_residual = 0;
  Scalar multiplier = 0;
  Scalar min_radius = 0;
  Scalar collision_floor = 0;
  bool collision_floor_active = false;
  std::vector<Scalar> F_trajectory;      // F at each accepted outer iterate
  std::vector<Scalar> merit_trajectory;  // augmented merit at each accepted outer iterate
};

JsonValue solve_report_json(const SolveReport& report);

std::pair<SymmetricLoop, SolveReport> minimize_constrained(const SymmetricLoop& seed,
                                                           const PotentialSpec& spec, Scalar H,
                                                           const SolverConfig& config = {});

struct KktReport {
  Scalar multiplier = 0;             // least-squares lambda
  Scalar stationarity_residual = 0;  // |grad D + lambda grad g| over free nodes
};

KktReport kkt_report(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H);

/// Least-squares stationarity residual of the embedded full trace with only
/// the endpoint node pinned (the symmetric-criticality check).
Scalar full_space_kkt_residual(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H);

}  // namespace orbit
