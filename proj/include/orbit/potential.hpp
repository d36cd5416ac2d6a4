#pragma once

// Homogeneous potentials V(x) = profile(x/|x|) * |x|^{-alpha} together with
// gradients, Hessians and sampling-based hypothesis checks.  The profile
// construction makes every spec exactly (-alpha)-homogeneous; a negative
// coefficient gives the attractive variant used by the dynamics oracles.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orbit/types.hpp"

namespace orbit {

enum class ProfileKind { Power, Anisotropic, Custom };

struct PotentialSpec {
  int dimension = 2;
  Scalar alpha = 1.0;
  ProfileKind profile = ProfileKind::Power;
  Scalar coefficient = 1.0;  // < 0 selects the attractive (oracle) variant
  Scalar anisotropy = 0.1;   // epsilon in profile(theta) = 1 + epsilon*theta_1^2
  std::optional<Scalar> beta;  // (V2) decay exponent
  std::optional<Scalar> m0;    // (V2) constant
  std::optional<Scalar> r0;    // (V2) threshold radius

  // Custom profiles are supplied as callables on the unit sphere plus an
  // evenness declaration; the gradient falls back to central differences
  // unless an analytic one is given.
  std::function<Scalar(const Vec&)> custom_profile;
  std::function<Vec(const Vec&)> custom_gradient;  // full gradient of V
  bool custom_even = true;
};

PotentialSpec make_power_potential(int dimension, Scalar alpha, Scalar coefficient = 1.0);
PotentialSpec make_anisotropic_potential(int dimension, Scalar alpha, Scalar epsilon = 0.1,
                                         Scalar coefficient = 1.0);

void validate_spec(const PotentialSpec& spec);

Scalar profile_value(const PotentialSpec& spec, const Vec& theta);

Scalar eval_potential(const PotentialSpec& spec, const Vec& x);
Vec eval_gradient(const PotentialSpec& spec, const Vec& x);
Mat eval_hessian(const PotentialSpec& spec, const Vec& x);

/// 3(x,grad V) + (x, Hess V x); equals alpha(alpha-2)V for homogeneous V.
Scalar manifold_condition(const PotentialSpec& spec, const Vec& x);

/// Deterministic low-discrepancy points on the unit sphere S^{N-1}.
/// The first 2N points are the +-coordinate directions.
std::vector<Vec> sphere_samples(int dimension, int count);

/// (C1, C2) = extrema of V over sampled unit-sphere directions.
std::pair<Scalar, Scalar> two_sided_bounds(const PotentialSpec& spec, int sphere_samples_count);

struct HypothesisEntry {
  std::string name;
  bool applicable = true;
  bool pass = false;
  Scalar worst_residual = 0.0;
  Vec witness;
};

struct HypothesisReport {
  std::vector<HypothesisEntry> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (e.applicable && !e.pass) return false;
    return true;
  }
  const HypothesisEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

/// Samples shells |x| in {0.1, 1, 10, r0} and reports the worst violation of
/// each hypothesis.  Failures are data, not errors.
HypothesisReport check_hypotheses(const PotentialSpec& spec, int sample_count);

}  // namespace orbit
