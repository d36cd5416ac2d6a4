#pragma once

// Independent verification tools: Stormer-Verlet integration of
// udotdot + grad V(u) = 0, pointwise residuals, and two closed-form oracles
// (repulsive Kepler hyperbola, strong-force circle).

#include "orbit/json_writer.hpp"
#include "orbit/potential.hpp"
#include "orbit/rescale.hpp"
#include "orbit/types.hpp"

namespace orbit {

struct NearCollisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KeplerHyperbola {
  Scalar mass = 1;              // m
  Scalar delta = 1;             // coupling, >= 0 (repulsive)
  Scalar angular_momentum = 1;  // |L|
  Scalar energy = 1;            // H_r > 0
  Scalar lenz_magnitude = 0;    // |F|
  Scalar zeta_inf = 0;          // asymptote angle
};

/// |F|^2 = 2 m |L|^2 H_r + m^2 delta^2, zeta_inf = arccos(m delta / |F|).
KeplerHyperbola make_kepler(Scalar m, Scalar delta, Scalar L, Scalar H_r);

/// Conic radius r = |L|^2 / (|F| cos zeta - m delta); throws at/beyond the
/// asymptote angle.
Scalar kepler_radius(const KeplerHyperbola& h, Scalar zeta);

struct CircularOracle {
  Scalar radius = 0;  // r_alpha
  Scalar omega = 0;   // omega_alpha
};

/// Explicit circular solution of the attractive strong-force system
/// V = -|x|^{-alpha}, alpha > 2, H > 0.
CircularOracle circular_oracle(Scalar alpha, Scalar H);

struct Trajectory {
  Vec times;
  Mat positions;   // N x steps
  Mat velocities;  // N x steps
  Scalar energy_drift = 0;  // max |E(t) - E(0)|
  Scalar dt_used = 0;
};

struct VerletOptions {
  int max_halvings = 20;
  long long step_budget = 200'000'000;
  int store_every = 1;  // thin the stored samples
};

/// Fixed-step Stormer-Verlet for udotdot = -grad V(u).  Near-collision steps
/// halve dt; below the halving budget the run aborts.
Trajectory verlet_integrate(const PotentialSpec& spec, const Vec& x0, const Vec& v0,
                            Scalar t_span, Scalar dt, const VerletOptions& opts = {});

/// Max over interior samples of |second difference / dt^2 + grad V|,
/// normalized by max |grad V|.
Scalar ode_residual(const Vec& times, const Mat& positions, const PotentialSpec& spec);
Scalar ode_residual(const OrbitSegment& segment, const PotentialSpec& spec);

/// Max over samples of |1/2 |v|^2 + V(x) - H|.
Scalar energy_residual(const Mat& positions, const Mat& velocities, const PotentialSpec& spec,
                       Scalar H);
Scalar energy_residual(const OrbitSegment& segment, const PotentialSpec& spec, Scalar H);

JsonValue kepler_json(const KeplerHyperbola& h);
JsonValue circle_json(const CircularOracle& c, Scalar alpha, Scalar H);

}  // namespace orbit
