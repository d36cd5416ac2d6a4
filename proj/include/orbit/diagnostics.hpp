#pragma once

// Quantitative escape diagnostics and the continuation sweep in the endpoint
// radius R: radius bounds, escape margins, the action integral, transversal
// velocity decay, and the fixed-window Cauchy proxy for the local limit.

#include <optional>
#include <string>
#include <vector>

#include "orbit/dynamics.hpp"
#include "orbit/json_writer.hpp"
#include "orbit/minimize.hpp"
#include "orbit/rescale.hpp"
#include "orbit/seed.hpp"

namespace orbit {

struct AngularDefect {
  Vec A;              // sqrt(|u|^2 |udot|^2 - (u, udot)^2)
  Vec omega;          // A / (|u| |udot|), NaN where |udot| = 0
  std::vector<int> gaps;  // node indices with undefined omega
};

AngularDefect angular_defect(const OrbitSegment& segment);

struct SweepEntry {
  Scalar R = 0;
  Scalar T = 0;
  Scalar min_radius = 0;
  Scalar min_radius_time = 0;
  Scalar action_integral = 0;
  int action_clipped_nodes = 0;
  Scalar t_plus = 0;
  Scalar t_minus = 0;
  Scalar escape_margin_plus = 0;   // T/2 - t_plus
  Scalar escape_margin_minus = 0;  // t_minus + T/2
  Scalar omega_max_after_escape = 0;
  Scalar sup_direction_error = 0;
  Scalar max_speed = 0;
  bool collision_floor_active = false;
  bool period_sign_anomaly = false;
  std::string error;  // empty when the stage pipeline succeeded

  bool ok() const { return error.empty(); }
};

struct RadiusVerdict {
  Scalar M_emp = 0;
  Scalar m_emp = 0;
  Scalar drift_per_doubling = 0;  // fitted relative change of min_radius per R-doubling
  bool monotone = false;
  bool pass = false;
};

/// Lemma-style boundedness check of min |u_R| across the sweep.
RadiusVerdict radius_bounds_sweep(const std::vector<SweepEntry>& entries);

/// First/last crossings of |u| = L; requires the threshold to be attained.
std::pair<Scalar, Scalar> escape_margins(const OrbitSegment& segment, Scalar L_threshold);

struct ActionIntegral {
  Scalar value = 0;
  int clipped_nodes = 0;  // nodes with V > H (integrand clipped at zero)
};

/// int sqrt(max(H - V, 0)) |udot| dt over the segment.
ActionIntegral action_bound(const OrbitSegment& segment, const PotentialSpec& spec, Scalar H);

struct DirectionTrigger {
  bool found = false;
  Scalar t0 = 0;
  Scalar radius_t0 = 0;
  Scalar omega_after_max = 0;      // sup of omega on [t0, end]
  Scalar sup_tail_error = 0;       // sup_{t >= t0} |u/|u| - e|
  Scalar min_radial_speed = 0;     // min of d|u|/dt over the tail
};

/// Finds the first t0 with |u| >= L_eta, (u, udot) > 0 and omega < eta, then
/// measures the tail direction drift toward e.
DirectionTrigger direction_trigger(const OrbitSegment& segment, const Vec& e, Scalar eta,
                                   Scalar L_eta);

struct DirectionFit {
  Scalar c1 = 0;  // coefficient of eta
  Scalar c2 = 0;  // coefficient of |u(t0)|^{-beta}
  bool valid = false;
};

struct DirectionReport {
  std::vector<Scalar> eta_grid;
  std::vector<std::vector<DirectionTrigger>> triggers;  // [segment][eta]
  std::vector<DirectionFit> fits;                       // per segment
  std::vector<Scalar> sup_tail_error;                   // per segment at the reference eta
  bool errors_decreasing = false;
  bool constants_stable = false;  // fitted c1, c2 within +-50% across the ladder
};

DirectionReport direction_convergence(const std::vector<OrbitSegment>& segments, const Vec& e,
                                      const std::vector<Scalar>& eta_grid, Scalar beta,
                                      Scalar L_eta);

struct SweepOptions {
  int n = 512;
  Scalar window = 5.0;        // W for the C_loc proxy
  Scalar eta = 0.2;           // reference transversality threshold
  Scalar L_threshold = 0;     // 0 = auto: max(2 M_emp, R0 / 4)
  SolverConfig solver;
  int jobs = 1;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::vector<OrbitSegment> shifted_segments;  // per successful entry
  RadiusVerdict radius_verdict;
  Scalar M_emp = 0;
  Scalar m_emp = 0;
  Scalar L_threshold = 0;
  std::vector<Scalar> window_distances;  // consecutive t*-shifted sup distances
  bool margins_increasing = false;
  bool window_distances_decreasing = false;
  bool edge_radii_growing = false;
  bool final_edge_exceeds_10M = false;
  bool hyperbolicity_pass = false;  // edge growth + final edge > 10 M_emp
};

/// Runs seed -> minimize -> rescale -> shift for every R in the schedule and
/// assembles all diagnostics.  Stage failures are recorded per entry and the
/// sweep continues.
SweepResult continuation_sweep(const PotentialSpec& spec, Scalar H, const Vec& e,
                               const std::vector<Scalar>& R_schedule,
                               const SweepOptions& options = {});

/// Sup distance between two trajectories on the overlap of their time
/// domains with [-W, W], by linear interpolation on a fixed grid.
Scalar window_distance(const OrbitSegment& a, const OrbitSegment& b, Scalar W,
                       int grid_points = 512);

JsonValue sweep_json(const SweepResult& result);

}  // namespace orbit
