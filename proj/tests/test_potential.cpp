#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbit/potential.hpp"

using namespace orbit;

namespace {
Vec v2(Scalar x, Scalar y) {
  Vec v(2);
  v << x, y;
  return v;
}
}  // namespace

TEST_CASE("pure power evaluation") {
  const auto spec = make_power_potential(2, 1.0);
  CHECK(eval_potential(spec, v2(2, 0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eval_potential(spec, v2(1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(eval_potential(spec, v2(0, 0)), SingularityError);
}

TEST_CASE("homogeneity scaling law") {
  for (Scalar alpha : {0.5, 1.0, 1.7}) {
    const auto spec = make_power_potential(2, alpha, 3.0);
    const Vec x = v2(0.3, -1.2);
    for (Scalar s : {0.5, 2.0, 10.0}) {
      const Scalar lhs = eval_potential(spec, s * x);
      const Scalar rhs = std::pow(s, -alpha) * eval_potential(spec, x);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
    }
  }
}

TEST_CASE("gradient of 1/|x|") {
  const auto spec = make_power_potential(2, 1.0);
  const Vec g1 = eval_gradient(spec, v2(1, 0));
  CHECK(g1(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(g1(1) == doctest::Approx(0.0));
  const Vec g2 = eval_gradient(spec, v2(0, 2));
  CHECK(g2(0) == doctest::Approx(0.0));
  CHECK(g2(1) == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("Euler relation across profiles") {
  const std::vector<PotentialSpec> specs = {
      make_power_potential(2, 1.0),
      make_power_potential(3, 1.5, 2.0),
      make_anisotropic_potential(2, 0.7),
      make_anisotropic_potential(3, 1.9, 0.3),
  };
  for (const auto& spec : specs) {
    for (const Vec& theta : sphere_samples(spec.dimension, 32)) {
      for (Scalar r : {0.3, 1.0, 7.5}) {
        const Vec x = r * theta;
        const Scalar v = eval_potential(spec, x);
        const Scalar res = std::abs(x.dot(eval_gradient(spec, x)) + spec.alpha * v);
        CHECK(res <= 1e-9 * std::abs(v));
      }
    }
  }
}

TEST_CASE("analytic gradient matches central differences") {
  const std::vector<PotentialSpec> specs = {
      make_power_potential(2, 1.3, 0.8),
      make_anisotropic_potential(3, 1.1),
  };
  for (const auto& spec : specs) {
    for (const Vec& theta : sphere_samples(spec.dimension, 10)) {
      const Vec x = 1.7 * theta;
      const Vec g = eval_gradient(spec, x);
      const Scalar h = 1e-5 * x.norm();
      Vec fd(x.size());
      for (int i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        fd(i) = (eval_potential(spec, xp) - eval_potential(spec, xm)) / (2 * h);
      }
      CHECK((g - fd).norm() <= 1e-6 * std::max(g.norm(), Scalar(1e-12)));
    }
  }
}

TEST_CASE("hypothesis report: exact homogeneous potentials pass") {
  const auto report = check_hypotheses(make_power_potential(2, 1.5), 64);
  CHECK(report.all_pass());
  CHECK(report.find("V1")->worst_residual < 1e-9);
  CHECK(report.find("B1")->worst_residual < 1e-9);
}

TEST_CASE("hypothesis report: (V2) for 1/|x| with beta=1, M0=1, r0=1") {
  auto spec = make_power_potential(2, 1.0);
  spec.beta = 1.0;
  spec.m0 = 1.0;
  spec.r0 = 1.0;
  const auto report = check_hypotheses(spec, 64);
  const auto* v2e = report.find("V2");
  REQUIRE(v2e != nullptr);
  CHECK(v2e->applicable);
  CHECK(v2e->pass);  // |x|^2 |grad V| = 1 <= 1 exactly
}

TEST_CASE("hypothesis report: even anisotropic profile passes B1 and V1") {
  const auto report = check_hypotheses(make_anisotropic_potential(2, 1.0), 64);
  CHECK(report.find("B1")->pass);
  CHECK(report.find("V1")->pass);
}

TEST_CASE("hypothesis report: alpha out of theorem range is flagged") {
  PotentialSpec spec = make_power_potential(2, 1.0);
  spec.alpha = 2.5;
  const auto report = check_hypotheses(spec, 16);
  CHECK_FALSE(report.find("V1-range")->pass);
  CHECK_FALSE(report.all_pass());
}

TEST_CASE("hypothesis report: odd custom profile fails B1") {
  PotentialSpec spec;
  spec.dimension = 2;
  spec.alpha = 1.0;
  spec.profile = ProfileKind::Custom;
  spec.custom_profile = [](const Vec& theta) { return 2.0 + theta(0); };
  spec.custom_even = false;
  const auto report = check_hypotheses(spec, 64);
  CHECK_FALSE(report.find("B1")->pass);
}

TEST_CASE("two-sided bounds") {
  const auto [c1p, c2p] = two_sided_bounds(make_power_potential(2, 1.0), 128);
  CHECK(c1p == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c2p == doctest::Approx(1.0).epsilon(1e-12));

  const auto [c1a, c2a] = two_sided_bounds(make_anisotropic_potential(2, 1.0, 0.1), 4096);
  CHECK(c1a == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c2a == doctest::Approx(1.1).epsilon(1e-4));
  CHECK(c1a > 0);
  CHECK(c1a <= c2a);

  // spot-check the sandwich C1 |x|^-a <= V <= C2 |x|^-a
  const auto spec = make_anisotropic_potential(2, 1.0, 0.1);
  for (const Vec& theta : sphere_samples(2, 32)) {
    for (Scalar r : {0.2, 1.0, 30.0}) {
      const Scalar v = eval_potential(spec, r * theta);
      CHECK(v >= c1a * std::pow(r, -1.0) * (1 - 1e-9));
      CHECK(v <= c2a * std::pow(r, -1.0) * (1 + 1e-9));
    }
  }
}

TEST_CASE("manifold condition equals alpha(alpha-2)V") {
  const auto s1 = make_power_potential(2, 1.0);
  CHECK(manifold_condition(s1, v2(1, 0)) == doctest::Approx(-1.0).epsilon(1e-8));
  const auto s2 = make_power_potential(2, 1.5);
  CHECK(manifold_condition(s2, v2(0, 1)) == doctest::Approx(-0.75).epsilon(1e-8));
  for (const auto& spec : {make_power_potential(3, 0.5), make_anisotropic_potential(2, 1.9)}) {
    for (const Vec& theta : sphere_samples(spec.dimension, 16)) {
      const Vec x = 2.5 * theta;
      const Scalar mc = manifold_condition(spec, x);
      CHECK(mc < 0);
      const Scalar expected = spec.alpha * (spec.alpha - 2.0) * eval_potential(spec, x);
      CHECK(mc == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("derived limit trends of (x, grad V) + 2V = (2 - alpha)V") {
  for (Scalar alpha : {1.1, 1.5, 1.9}) {
    const auto spec = make_power_potential(2, alpha);
    const auto [c1, c2] = two_sided_bounds(spec, 64);
    const Vec theta = v2(std::sqrt(0.5), std::sqrt(0.5));
    const auto combo = [&](Scalar r) {
      const Vec x = r * theta;
      return x.dot(eval_gradient(spec, x)) + 2.0 * eval_potential(spec, x);
    };
    CHECK(combo(1e-3) > 1e3 * c1);
    CHECK(combo(1e3) < 1e-2 * c2);
  }
}
