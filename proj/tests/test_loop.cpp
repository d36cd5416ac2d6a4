#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "orbit/loop.hpp"
#include "orbit/seed.hpp"

using namespace orbit;

namespace {

Vec v2(Scalar x, Scalar y) {
  Vec v(2);
  v << x, y;
  return v;
}

// circle loop R(cos 2 pi t, sin 2 pi t); antisymmetric through +-Re
SymmetricLoop circle_loop(Scalar R, int n) {
  Mat interior(2, n - 1);
  const Scalar dt = 1.0 / (2.0 * n);
  for (int j = 1; j < n; ++j) {
    const Scalar t = j * dt;
    interior.col(j - 1) = v2(R * std::cos(2 * kPi * t), R * std::sin(2 * kPi * t));
  }
  return make_loop(2, n, R, v2(1, 0), interior);
}

// straight chord Re -> -Re at constant parameter speed
SymmetricLoop chord_loop(Scalar R, int n, Scalar offset_y) {
  Mat interior(2, n - 1);
  for (int j = 1; j < n; ++j) {
    const Scalar s = static_cast<Scalar>(j) / n;  // 0..1 over the half
    interior.col(j - 1) = v2(R * (1 - 2 * s), offset_y);
  }
  return make_loop(2, n, R, v2(1, 0), interior);
}

}  // namespace

TEST_CASE("make_loop validation") {
  Mat interior = Mat::Ones(2, 7);
  CHECK_THROWS_WITH_AS(make_loop(2, 8, 1.0, v2(2, 0), interior), "direction not unit",
                       std::invalid_argument);
  Mat with_zero = interior;
  with_zero.col(3).setZero();
  CHECK_THROWS_WITH_AS(make_loop(2, 8, 1.0, v2(1, 0), with_zero), "collision node",
                       std::invalid_argument);
  CHECK_THROWS_AS(make_loop(2, 7, 1.0, v2(1, 0), Mat::Ones(2, 6)), std::invalid_argument);
  CHECK_THROWS_AS(make_loop(2, 4, 1.0, v2(1, 0), Mat::Ones(2, 3)), std::invalid_argument);

  const auto qa = build_qa(1.0, v2(1, 0), v2(0, 1), 1.0, 1.0, 8);
  CHECK(qa.half_nodes.col(0).isApprox(v2(1, 0)));
  CHECK(qa.half_nodes.col(8).isApprox(v2(-1, 0)));
}

TEST_CASE("full trace antisymmetry is structural") {
  const auto loop = build_qa(2.0, v2(1, 0), v2(0, 1), 0.7, 1.0, 16);
  const Mat trace = full_trace(loop);
  REQUIRE(trace.cols() == 2 * 16 + 1);
  for (int j = 0; j <= 16; ++j) {
    CHECK((trace.col(16 + j) + trace.col(j)).norm() == doctest::Approx(0.0));
    CHECK(trace.col(j).norm() == doctest::Approx(trace.col(16 + j).norm()));
  }
  CHECK((trace.col(32) - trace.col(0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("dirichlet energy of the circle") {
  const Scalar R = 1.5;
  const auto loop = circle_loop(R, 256);
  const Scalar exact = 4 * kPi * kPi * R * R;
  CHECK(std::abs(dirichlet_energy(loop) - exact) < 0.01 * exact);
}

TEST_CASE("dirichlet energy of the constant-speed chord is exact") {
  const Scalar R = 3.0;
  const int n = 64;
  const Scalar offset = 0.05;  // keeps the interior off the origin
  const auto loop = chord_loop(R, n, offset);
  // (4R)^2 for the piecewise-linear traverse, plus the two endpoint kinks
  const Scalar expected = 16 * R * R + 8 * n * offset * offset;
  CHECK(dirichlet_energy(loop) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("quadrature refinement on the circle is second order") {
  const Scalar R = 2.0;
  const Scalar exact = 4 * kPi * kPi * R * R;
  const Scalar e1 = std::abs(dirichlet_energy(circle_loop(R, 64)) - exact);
  const Scalar e2 = std::abs(dirichlet_energy(circle_loop(R, 128)) - exact);
  const Scalar e3 = std::abs(dirichlet_energy(circle_loop(R, 256)) - exact);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
  CHECK(e2 / e3 > 3.0);
  CHECK(e2 / e3 < 5.0);
}

TEST_CASE("integral of potential: constant integrand on circles") {
  for (Scalar alpha : {0.5, 1.0, 1.5}) {
    const auto spec = make_power_potential(2, alpha);
    for (Scalar R : {0.5, 1.0, 4.0}) {
      const auto loop = circle_loop(R, 64);
      CHECK(integral_of_potential(loop, spec) ==
            doctest::Approx(std::pow(R, -alpha)).epsilon(1e-12));
    }
  }
}

TEST_CASE("integral of potential decreases along the q_a family") {
  const auto spec = make_power_potential(2, 1.0);
  Scalar first = 0, prev = std::numeric_limits<Scalar>::infinity();
  for (Scalar a : {0.5, 2.0, 8.0, 32.0, 128.0}) {
    const auto loop = build_qa(1.0, v2(1, 0), v2(0, 1), a, 1.0, 128);
    const Scalar val = integral_of_potential(loop, spec);
    CHECK(val < prev);
    if (first == 0) first = val;
    prev = val;
  }
  // the decay rate is a^{-1/(2p)} (p = 5), so the drop is slow but strict
  CHECK(prev < 0.5 * first);
}

TEST_CASE("loop CSV round trip") {
  const auto loop = build_qa(2.5, v2(0, 1), v2(1, 0), 1.3, 1.5, 32);
  const std::string path = "loop_roundtrip_test.csv";
  save_loop_csv(loop, path);
  const auto back = load_loop_csv(path);
  CHECK(back.segments == loop.segments);
  CHECK(back.endpoint_radius == doctest::Approx(loop.endpoint_radius));
  CHECK((back.half_nodes - loop.half_nodes).cwiseAbs().maxCoeff() < 1e-15);
  std::remove(path.c_str());
}

TEST_CASE("endpoint pinning survives the free-vector round trip") {
  const auto loop = build_qa(2.0, v2(1, 0), v2(0, 1), 0.9, 1.0, 16);
  Vec z = to_free_vector(loop);
  z.array() += 0.01;
  const auto moved = with_free_vector(loop, z);
  CHECK((moved.half_nodes.col(0) - v2(2, 0)).norm() == 0.0);
  CHECK((moved.half_nodes.col(16) - v2(-2, 0)).norm() == 0.0);
}
