#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "orbit/functional.hpp"
#include "orbit/seed.hpp"

using namespace orbit;

namespace {

Vec v2(Scalar x, Scalar y) {
  Vec v(2);
  v << x, y;
  return v;
}

SymmetricLoop circle_loop(Scalar R, int n) {
  Mat interior(2, n - 1);
  const Scalar dt = 1.0 / (2.0 * n);
  for (int j = 1; j < n; ++j) {
    const Scalar t = j * dt;
    interior.col(j - 1) = v2(R * std::cos(2 * kPi * t), R * std::sin(2 * kPi * t));
  }
  return make_loop(2, n, R, v2(1, 0), interior);
}

SymmetricLoop perturbed_qa(Scalar R, Scalar a, int n, unsigned seed_val, Scalar amp = 0.05) {
  auto loop = build_qa(R, v2(1, 0), v2(0, 1), a, 1.0, n);
  std::mt19937_64 rng(seed_val);
  std::uniform_real_distribution<Scalar> uni(-amp, amp);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < 2; ++i) loop.half_nodes(i, j) += uni(rng);
  return loop;
}

}  // namespace

TEST_CASE("g on circles: (1 - alpha/2) intV with constant integrand") {
  const auto spec = make_power_potential(2, 1.0);
  for (Scalar R : {0.5, 1.0, 3.0}) {
    const auto loop = circle_loop(R, 64);
    CHECK(eval_g(loop, spec) == doctest::Approx(0.5 / R).epsilon(1e-12));
  }
}

TEST_CASE("g equals (1 - alpha/2) intV on every homogeneous spec") {
  const std::vector<PotentialSpec> specs = {
      make_power_potential(2, 0.5),
      make_power_potential(2, 1.5, 2.0),
      make_anisotropic_potential(2, 1.0),
  };
  for (const auto& spec : specs) {
    const auto loop = perturbed_qa(2.0, 0.8, 64, 7);
    const Scalar lhs = eval_g(loop, spec);
    const Scalar rhs = (1.0 - spec.alpha / 2.0) * integral_of_potential(loop, spec);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("f on circles matches the closed form") {
  const auto spec = make_power_potential(2, 1.0);
  const Scalar R = 2.0, H = 1.0;
  const auto loop = circle_loop(R, 512);
  const Scalar expected = 2 * kPi * kPi * R * R * (H - 1.0 / R);
  CHECK(eval_f(loop, spec, H) == doctest::Approx(expected).epsilon(1e-3));
  CHECK(eval_F(loop, spec, H) == doctest::Approx(-eval_f(loop, spec, H)).epsilon(1e-14));
}

TEST_CASE("sign of f follows the potential factor") {
  const auto spec = make_power_potential(2, 1.0);
  const auto loop = circle_loop(1.0, 64);  // intV = 1
  CHECK(eval_f(loop, spec, 2.0) > 0);   // H > intV
  CHECK(eval_f(loop, spec, 0.5) < 0);   // H < intV
}

TEST_CASE("F is positive for repulsive nonconstant loops") {
  const auto spec = make_power_potential(2, 1.0);
  const Scalar H = 1.0;
  const auto seed = solve_seed(2.0, v2(1, 0), H, spec, 64);
  CHECK(eval_F(seed.loop, spec, H) > 0);
  // on the constraint F equals (alpha H / (2 (2 - alpha))) * dirichlet
  const Scalar expected = 0.5 * H * dirichlet_energy(seed.loop);
  CHECK(eval_F(seed.loop, spec, H) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("F grows with dirichlet on the constraint") {
  const auto spec = make_power_potential(2, 1.0);
  const Scalar H = 1.0;
  const auto s1 = solve_seed(2.0, v2(1, 0), H, spec, 64);
  const auto s2 = solve_seed(4.0, v2(1, 0), H, spec, 64);
  REQUIRE(dirichlet_energy(s2.loop) > dirichlet_energy(s1.loop));
  CHECK(eval_F(s2.loop, spec, H) > eval_F(s1.loop, spec, H));
}

TEST_CASE("pairing identity: dirichlet x (H - g)") {
  const auto spec = make_power_potential(2, 1.3);
  const auto loop = perturbed_qa(1.5, 0.6, 64, 3);
  const Scalar expected = dirichlet_energy(loop) * (0.8 - eval_g(loop, spec));
  CHECK(pairing_f_prime_q(loop, spec, 0.8) == doctest::Approx(expected).epsilon(1e-10));
  // on the constraint the pairing vanishes
  const auto seed = solve_seed(2.0, v2(1, 0), 1.0, spec, 64);
  CHECK(std::abs(pairing_f_prime_q(seed.loop, spec, 1.0)) <
        1e-8 * dirichlet_energy(seed.loop));
}

TEST_CASE("pairing sign facts for attractive potentials") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<Scalar> uni(0.3, 1.8);
  for (int rep = 0; rep < 20; ++rep) {
    const Scalar alpha_weak = 0.3 + 1.6 * (rep / 20.0);
    const auto weak = make_power_potential(2, alpha_weak, -1.0);  // attractive
    const auto loop = perturbed_qa(uni(rng), uni(rng), 32, 100 + rep, 0.2);
    for (Scalar H : {0.0, 1.0})
      CHECK(pairing_f_prime_q(loop, weak, H) > 0);  // weak force, H >= 0

    PotentialSpec strong = make_power_potential(2, 3.0, -1.0);
    for (Scalar H : {-1.0, 0.0}) {
      // integrand H - (1 - alpha/2) V = H - (1/2)|x|^{-3} < 0 pointwise,
      // so the pairing is strictly negative here
      CHECK(pairing_f_prime_q(loop, strong, H) < 0);
    }
  }
}

TEST_CASE("grad F matches central finite differences") {
  const Scalar H = 1.0;
  const std::vector<PotentialSpec> specs = {
      make_power_potential(2, 1.0),
      make_anisotropic_potential(2, 1.5),
  };
  for (const auto& spec : specs) {
    for (unsigned trial = 0; trial < 5; ++trial) {
      const auto loop = perturbed_qa(2.0, 0.8, 24, 40 + trial);
      const Vec grad = grad_F_free_nodes(loop, spec, H);
      Vec z = to_free_vector(loop);
      const Scalar h = 1e-6;
      Scalar worst = 0;
      for (int k = 0; k < z.size(); ++k) {
        Vec zp = z, zm = z;
        zp(k) += h;
        zm(k) -= h;
        const Scalar fp = eval_F(with_free_vector(loop, zp), spec, H);
        const Scalar fm = eval_F(with_free_vector(loop, zm), spec, H);
        worst = std::max(worst, std::abs((fp - fm) / (2 * h) - grad(k)));
      }
      CHECK(worst <= 1e-6 * std::max(grad.norm(), Scalar(1.0)));
    }
  }
}

TEST_CASE("grad g matches central finite differences") {
  const auto spec = make_power_potential(2, 1.0);
  const auto loop = perturbed_qa(2.0, 0.5, 24, 77);
  const Vec grad = grad_g_free(loop, spec);
  Vec z = to_free_vector(loop);
  const Scalar h = 1e-6;
  for (int k = 0; k < z.size(); ++k) {
    Vec zp = z, zm = z;
    zp(k) += h;
    zm(k) -= h;
    const Scalar gp = eval_g(with_free_vector(loop, zp), spec);
    const Scalar gm = eval_g(with_free_vector(loop, zm), spec);
    CHECK(std::abs((gp - gm) / (2 * h) - grad(k)) < 1e-6 * std::max(grad.norm(), Scalar(1e-6)));
  }
}

TEST_CASE("planar mirror symmetry kills the out-of-plane gradient (N=3)") {
  const int n = 24;
  Vec e = Vec::Zero(3);
  e(0) = 1.0;
  Vec eta = Vec::Zero(3);
  eta(1) = 1.0;
  auto loop = build_qa(2.0, e, eta, 0.8, 1.0, n);  // lives in the x-y plane
  const auto spec = make_power_potential(3, 1.0);
  const Vec grad = grad_F_free_nodes(loop, spec, 1.0);
  for (int j = 0; j < n - 1; ++j) CHECK(std::abs(grad(j * 3 + 2)) < 1e-12);
}

TEST_CASE("Eq.(10): intV = 2H/(2-alpha) once g = H") {
  const auto spec = make_power_potential(2, 1.0);
  for (Scalar H : {0.5, 1.0, 2.0}) {
    const auto seed = solve_seed(3.0, v2(1, 0), H, spec, 128);
    REQUIRE(std::abs(eval_g(seed.loop, spec) - H) < 1e-8);
    const Scalar expected = 2.0 * H / (2.0 - spec.alpha);
    CHECK(std::abs(integral_of_potential(seed.loop, spec) - expected) < 1e-6 * expected);
  }
}

TEST_CASE("functional report flags off-constraint loops") {
  const auto spec = make_power_potential(2, 1.0);
  const auto loop = circle_loop(1.0, 64);  // g = 1/2
  const auto on = make_functional_report(loop, spec, 0.5);
  CHECK_FALSE(on.off_constraint);
  CHECK(on.F_value == doctest::Approx(-on.f_value));
  const auto off = make_functional_report(loop, spec, 1.0);
  CHECK(off.off_constraint);
  CHECK(off.constraint_residual == doctest::Approx(-0.5).epsilon(1e-12));
}
