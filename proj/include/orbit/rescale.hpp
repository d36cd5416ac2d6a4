#pragma once

// Converts a unit-interval loop into a true-time trajectory via the period
//   T^2 = (1/2 int |qdot|^2) / int (H - V(q))
// and applies the first-crossing time shift.  On the constraint set the
// denominator is negative for repulsive specs; the sign policy takes the
// magnitude, raises `period_sign_anomaly`, and leaves acceptance of the
// reconstruction to the integrator cross-check in dynamics.

#include <string>

#include "orbit/json_writer.hpp"
#include "orbit/loop.hpp"
#include "orbit/potential.hpp"

namespace orbit {

struct RescaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrbitSegment {
  Scalar period = 0;  // T
  Scalar energy_H = 0;
  Scalar endpoint_radius = 0;
  Scalar tstar_shift = 0;
  bool period_sign_anomaly = false;
  Vec times;      // 2n+1 samples, [-T/2 + shift, T/2 + shift]
  Mat positions;  // dimension x (2n+1)
  Mat velocities;
  Vec energy_residuals;  // |1/2 |udot|^2 + V(u) - H| per node
  Scalar max_interior_energy_residual = 0;

  int node_count() const { return static_cast<int>(times.size()); }
};

/// Strict Eq.-(21)-style period; throws "rescale impossible" when
/// int (H - V) <= 0.
Scalar compute_period(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H);

struct PeriodWithPolicy {
  Scalar period = 0;
  bool sign_anomaly = false;
};

/// Period magnitude sqrt(|half-dirichlet / int(H-V)|) with the anomaly flag.
PeriodWithPolicy period_with_sign_policy(const SymmetricLoop& loop, const PotentialSpec& spec,
                                         Scalar H);

OrbitSegment reconstruct_orbit(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H);

/// Translates time so the first crossing of |u| = M sits at t = 0.
OrbitSegment shift_by_tstar(const OrbitSegment& segment, Scalar M_threshold);

Scalar min_segment_radius(const OrbitSegment& segment);

void write_segment_csv(const OrbitSegment& segment, const std::string& path);
JsonValue segment_meta_json(const OrbitSegment& segment);

}  // namespace orbit
