#include "orbit/potential.hpp"

#include <algorithm>
#include <cmath>

namespace orbit {

namespace {

constexpr Scalar kEulerTol = 1e-9;

Vec unit(const Vec& x) {
  Scalar r = x.norm();
  if (r <= 0.0) throw SingularityError("potential evaluated at the origin");
  return x / r;
}

// Halton sequence, one dimension.
Scalar halton(int index, int base) {
  Scalar f = 1.0, r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

PotentialSpec make_power_potential(int dimension, Scalar alpha, Scalar coefficient) {
  PotentialSpec spec;
  spec.dimension = dimension;
  spec.alpha = alpha;
  spec.profile = ProfileKind::Power;
  spec.coefficient = coefficient;
  validate_spec(spec);
  return spec;
}

PotentialSpec make_anisotropic_potential(int dimension, Scalar alpha, Scalar epsilon,
                                         Scalar coefficient) {
  PotentialSpec spec;
  spec.dimension = dimension;
  spec.alpha = alpha;
  spec.profile = ProfileKind::Anisotropic;
  spec.anisotropy = epsilon;
  spec.coefficient = coefficient;
  validate_spec(spec);
  return spec;
}

void validate_spec(const PotentialSpec& spec) {
  if (spec.dimension < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(spec.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (spec.coefficient == 0.0) throw std::invalid_argument("coefficient must be nonzero");
  if (spec.profile == ProfileKind::Anisotropic && spec.anisotropy <= -1.0)
    throw std::invalid_argument("anisotropy must keep the profile positive");
  if (spec.profile == ProfileKind::Custom && !spec.custom_profile)
    throw std::invalid_argument("custom profile requires a callable");
}

Scalar profile_value(const PotentialSpec& spec, const Vec& theta) {
  switch (spec.profile) {
    case ProfileKind::Power:
      return spec.coefficient;
    case ProfileKind::Anisotropic:
      return spec.coefficient * (1.0 + spec.anisotropy * theta(0) * theta(0));
    case ProfileKind::Custom:
      return spec.coefficient * spec.custom_profile(theta);
  }
  return spec.coefficient;
}

Scalar eval_potential(const PotentialSpec& spec, const Vec& x) {
  Scalar r = x.norm();
  if (r <= 0.0) throw SingularityError("potential evaluated at the origin");
  return profile_value(spec, x / r) * std::pow(r, -spec.alpha);
}

Vec eval_gradient(const PotentialSpec& spec, const Vec& x) {
  Scalar r = x.norm();
  if (r <= 0.0) throw SingularityError("gradient evaluated at the origin");
  const Scalar a = spec.alpha;
  switch (spec.profile) {
    case ProfileKind::Power:
      return -a * spec.coefficient * std::pow(r, -a - 2.0) * x;
    case ProfileKind::Anisotropic: {
      // V = c r^{-a} + c eps x1^2 r^{-a-2}
      const Scalar c = spec.coefficient, eps = spec.anisotropy;
      const Scalar x1 = x(0);
      Vec grad = -a * c * std::pow(r, -a - 2.0) * x;
      grad -= c * eps * (a + 2.0) * x1 * x1 * std::pow(r, -a - 4.0) * x;
      grad(0) += 2.0 * c * eps * x1 * std::pow(r, -a - 2.0);
      return grad;
    }
    case ProfileKind::Custom: {
      if (spec.custom_gradient) return spec.custom_gradient(x);
      // central differences at relative step 1e-6
      const Scalar h = 1e-6 * r;
      Vec grad(x.size());
      Vec xp = x, xm = x;
      for (int i = 0; i < x.size(); ++i) {
        xp(i) = x(i) + h;
        xm(i) = x(i) - h;
        grad(i) = (eval_potential(spec, xp) - eval_potential(spec, xm)) / (2.0 * h);
        xp(i) = x(i);
        xm(i) = x(i);
      }
      return grad;
    }
  }
  return Vec::Zero(x.size());
}

Mat eval_hessian(const PotentialSpec& spec, const Vec& x) {
  Scalar r = x.norm();
  if (r <= 0.0) throw SingularityError("hessian evaluated at the origin");
  const int N = static_cast<int>(x.size());
  if (spec.profile == ProfileKind::Power) {
    const Scalar a = spec.alpha, c = spec.coefficient;
    Mat h = a * (a + 2.0) * c * std::pow(r, -a - 4.0) * (x * x.transpose());
    h -= a * c * std::pow(r, -a - 2.0) * Mat::Identity(N, N);
    return h;
  }
  // nested central differences of the gradient, relative step 1e-4
  const Scalar h = 1e-4 * r;
  Mat hess(N, N);
  Vec xp = x, xm = x;
  for (int i = 0; i < N; ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    hess.col(i) = (eval_gradient(spec, xp) - eval_gradient(spec, xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return 0.5 * (hess + hess.transpose());
}

Scalar manifold_condition(const PotentialSpec& spec, const Vec& x) {
  const Vec g = eval_gradient(spec, x);
  const Mat h = eval_hessian(spec, x);
  return 3.0 * x.dot(g) + x.dot(h * x);
}

std::vector<Vec> sphere_samples(int dimension, int count) {
  std::vector<Vec> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int i = 0; i < dimension && static_cast<int>(pts.size()) < count; ++i) {
    Vec v = Vec::Zero(dimension);
    v(i) = 1.0;
    pts.push_back(v);
    if (static_cast<int>(pts.size()) < count) pts.push_back(-v);
  }
  // Halton points mapped to the sphere through Box-Muller pairs.
  const int pairs = (dimension + 1) / 2;
  int index = 1;
  while (static_cast<int>(pts.size()) < count) {
    Vec v(dimension);
    for (int p = 0; p < pairs; ++p) {
      Scalar u1 = halton(index, kPrimes[(2 * p) % 12]);
      Scalar u2 = halton(index, kPrimes[(2 * p + 1) % 12]);
      u1 = std::max(u1, Scalar(1e-12));
      const Scalar rad = std::sqrt(-2.0 * std::log(u1));
      const Scalar n1 = rad * std::cos(2.0 * kPi * u2);
      const Scalar n2 = rad * std::sin(2.0 * kPi * u2);
      v(2 * p) = n1;
      if (2 * p + 1 < dimension) v(2 * p + 1) = n2;
    }
    ++index;
    const Scalar norm = v.norm();
    if (norm < 1e-9) continue;
    pts.push_back(v / norm);
  }
  return pts;
}

std::pair<Scalar, Scalar> two_sided_bounds(const PotentialSpec& spec, int sphere_samples_count) {
  if (sphere_samples_count < spec.dimension)
    throw std::invalid_argument("need at least `dimension` sphere samples");
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar hi = -lo;
  for (const Vec& theta : sphere_samples(spec.dimension, sphere_samples_count)) {
    const Scalar v = eval_potential(spec, theta);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

HypothesisReport check_hypotheses(const PotentialSpec& spec, int sample_count) {
  if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
  HypothesisReport report;

  HypothesisEntry range;
  range.name = "V1-range";
  range.pass = spec.alpha > 0.0 && spec.alpha < 2.0;
  range.worst_residual = range.pass ? 0.0 : std::abs(spec.alpha - 1.0);
  report.entries.push_back(range);

  std::vector<Scalar> shells = {0.1, 1.0, 10.0};
  if (spec.r0 && std::find(shells.begin(), shells.end(), *spec.r0) == shells.end())
    shells.push_back(*spec.r0);

  const auto dirs = sphere_samples(spec.dimension, sample_count);

  HypothesisEntry euler{"V1", true, true, 0.0, {}};
  HypothesisEntry positivity{"positivity", true, true, 0.0, {}};
  HypothesisEntry even{"B1", true, true, 0.0, {}};
  HypothesisEntry decay{"V2", spec.beta && spec.m0 && spec.r0, true, 0.0, {}};

  for (Scalar shell : shells) {
    for (const Vec& theta : dirs) {
      const Vec x = shell * theta;
      const Scalar v = eval_potential(spec, x);
      const Vec g = eval_gradient(spec, x);
      const Scalar scale = std::max(std::abs(v), Scalar(1e-300));

      const Scalar euler_res = std::abs(x.dot(g) + spec.alpha * v) / scale;
      if (euler_res > euler.worst_residual) {
        euler.worst_residual = euler_res;
        euler.witness = x;
      }

      if (v <= 0.0) {
        positivity.pass = false;
        positivity.worst_residual = std::max(positivity.worst_residual, -v);
        positivity.witness = x;
      }

      const Scalar even_res = std::abs(eval_potential(spec, -x) - v) / scale;
      if (even_res > even.worst_residual) {
        even.worst_residual = even_res;
        even.witness = x;
      }

      if (decay.applicable && shell >= *spec.r0) {
        const Scalar lhs = std::pow(shell, *spec.beta + 1.0) * g.norm();
        const Scalar excess = lhs - *spec.m0;
        if (excess > decay.worst_residual) {
          decay.worst_residual = excess;
          decay.witness = x;
        }
      }
    }
  }

  euler.pass = euler.worst_residual < kEulerTol;
  even.pass = even.worst_residual < kEulerTol;
  decay.pass = !decay.applicable || decay.worst_residual <= 1e-12;

  report.entries.push_back(euler);
  report.entries.push_back(positivity);
  report.entries.push_back(even);
  report.entries.push_back(decay);
  return report;
}

}  // namespace orbit
