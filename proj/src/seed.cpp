#include "orbit/seed.hpp"

#include <cmath>

namespace orbit {

namespace {
constexpr Scalar kSeedTol = 1e-10;
constexpr int kMaxDoublings = 60;
constexpr int kMaxBisections = 200;
}  // namespace

int seed_exponent(Scalar alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha must lie in (0, 2)");
  return 2 * static_cast<int>(std::floor(2.0 / alpha)) + 1;
}

Vec default_eta(const Vec& e) {
  const int N = static_cast<int>(e.size());
  for (int k = 0; k < N; ++k) {
    Vec eta = Vec::Zero(N);
    eta(k) = 1.0;
    eta -= eta.dot(e) * e;
    const Scalar norm = eta.norm();
    if (norm > 1e-8) return eta / norm;
  }
  throw std::invalid_argument("no direction orthogonal to e");
}

SymmetricLoop build_qa(Scalar R, const Vec& e, const Vec& eta, Scalar a, Scalar alpha, int n) {
  if (!(a > 0)) throw std::invalid_argument("amplitude a must be positive");
  if (std::abs(e.norm() - 1.0) > 1e-12 || std::abs(eta.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("e and eta must be unit vectors");
  if (std::abs(e.dot(eta)) > 1e-12) throw std::invalid_argument("e and eta must be orthogonal");
  const int p = seed_exponent(alpha);
  const int N = static_cast<int>(e.size());
  const Scalar dt = 1.0 / (2.0 * n);
  Mat interior(N, n - 1);
  for (int j = 1; j < n; ++j) {
    const Scalar t = j * dt;
    const Scalar c = std::pow(std::cos(2.0 * kPi * t), p);
    const Scalar s = std::pow(std::sin(2.0 * kPi * t), p);
    interior.col(j - 1) = R * c * e + a * s * eta;
  }
  return make_loop(N, n, R, e, interior);
}

SeedResult solve_seed(Scalar R, const Vec& e, Scalar H, const PotentialSpec& spec, int n,
                      std::pair<Scalar, Scalar> bracket) {
  if (!(H > 0)) throw std::invalid_argument("H must be positive");
  const Vec eta = default_eta(e);
  const auto g_of = [&](Scalar a) {
    return eval_g(build_qa(R, e, eta, a, spec.alpha, n), spec);
  };

  SeedResult result;
  Scalar a_lo = bracket.first, a_hi = bracket.second;
  // g(q_a) -> +inf as a -> 0 and -> 0 as a -> +inf; expand geometrically
  // until the bracket straddles H.
  Scalar g_lo = g_of(a_lo);
  result.expansion_trace.emplace_back(a_lo, g_lo);
  for (int k = 0; g_lo <= H; ++k) {
    if (k >= kMaxDoublings) throw NoBracketError("no bracket: g never exceeds H at small a");
    a_lo *= 0.5;
    g_lo = g_of(a_lo);
    result.expansion_trace.emplace_back(a_lo, g_lo);
  }
  Scalar g_hi = g_of(a_hi);
  result.expansion_trace.emplace_back(a_hi, g_hi);
  for (int k = 0; g_hi >= H; ++k) {
    if (k >= kMaxDoublings) throw NoBracketError("no bracket: g never drops below H at large a");
    a_hi *= 2.0;
    g_hi = g_of(a_hi);
    result.expansion_trace.emplace_back(a_hi, g_hi);
  }

  Scalar best_a = 0.5 * (a_lo + a_hi);
  Scalar best_res = std::numeric_limits<Scalar>::infinity();
  for (int it = 0; it < kMaxBisections; ++it) {
    const Scalar mid = 0.5 * (a_lo + a_hi);
    const Scalar gm = g_of(mid);
    const Scalar res = std::abs(gm - H) / H;
    if (res < best_res) {
      best_res = res;
      best_a = mid;
    }
    if (res < kSeedTol) break;
    if (gm > H)
      a_lo = mid;
    else
      a_hi = mid;
    result.bisections = it + 1;
  }

  result.amplitude = best_a;
  result.residual = best_res;
  result.loop = build_qa(R, e, eta, best_a, spec.alpha, n);
  return result;
}

}  // namespace orbit
