#pragma once

// Feasible initial curves q_a(t) = R e cos^p(2 pi t) + a eta sin^p(2 pi t)
// with p = 2 floor(2/alpha) + 1 (odd, so the antisymmetry is exact), landed
// on the constraint g(q) = H by bisection in the amplitude a.

#include <vector>

#include "orbit/functional.hpp"
#include "orbit/loop.hpp"

namespace orbit {

struct NoBracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int seed_exponent(Scalar alpha);  // p = 2 floor(2/alpha) + 1

/// First standard basis direction orthogonal to e (Gram-Schmidt).
Vec default_eta(const Vec& e);

SymmetricLoop build_qa(Scalar R, const Vec& e, const Vec& eta, Scalar a, Scalar alpha, int n);

struct SeedResult {
  SymmetricLoop loop;
  Scalar amplitude = 0;           // a*
  Scalar residual = 0;            // |g - H| / H
  int bisections = 0;
  // (a, g(q_a)) at each bracket-expansion probe; tests use these to observe
  // the monotone escape of g from the bracket.
  std::vector<std::pair<Scalar, Scalar>> expansion_trace;
};

SeedResult solve_seed(Scalar R, const Vec& e, Scalar H, const PotentialSpec& spec, int n,
                      std::pair<Scalar, Scalar> bracket = {1e-3, 1e3});

}  // namespace orbit
