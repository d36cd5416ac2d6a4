#include "orbit/dynamics.hpp"

#include <cmath>
#include <vector>

namespace orbit {

KeplerHyperbola make_kepler(Scalar m, Scalar delta, Scalar L, Scalar H_r) {
  if (!(m > 0)) throw std::invalid_argument("mass must be positive");
  if (delta < 0) throw std::invalid_argument("repulsive coupling requires delta >= 0");
  if (!(H_r > 0)) throw std::invalid_argument("hyperbolic orbit requires H_r > 0");
  KeplerHyperbola h;
  h.mass = m;
  h.delta = delta;
  h.angular_momentum = std::abs(L);
  h.energy = H_r;
  h.lenz_magnitude = std::sqrt(2.0 * m * L * L * H_r + m * m * delta * delta);
  h.zeta_inf = std::acos(m * delta / h.lenz_magnitude);
  return h;
}

Scalar kepler_radius(const KeplerHyperbola& h, Scalar zeta) {
  const Scalar denom = h.lenz_magnitude * std::cos(zeta) - h.mass * h.delta;
  if (denom <= 0.0)
    throw std::domain_error("angle at or beyond the asymptote: radius diverges");
  return h.angular_momentum * h.angular_momentum / denom;
}

CircularOracle circular_oracle(Scalar alpha, Scalar H) {
  if (!(alpha > 2.0)) throw std::invalid_argument("circular oracle requires alpha > 2");
  if (!(H > 0.0)) throw std::invalid_argument("circular oracle requires H > 0");
  CircularOracle c;
  c.radius = std::pow((alpha - 2.0) / (2.0 * H), 1.0 / alpha);
  c.omega = std::sqrt(alpha * std::pow(c.radius, -(alpha + 2.0)));
  return c;
}

Trajectory verlet_integrate(const PotentialSpec& spec, const Vec& x0, const Vec& v0,
                            Scalar t_span, Scalar dt, const VerletOptions& opts) {
  if (x0.norm() <= 0.0) throw SingularityError("initial point at the origin");
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");

  const int N = static_cast<int>(x0.size());
  std::vector<Vec> xs, vs;
  std::vector<Scalar> ts;

  Vec x = x0, v = v0;
  Vec a = -eval_gradient(spec, x);
  Scalar t = 0;
  const Scalar e0 = 0.5 * v.squaredNorm() + eval_potential(spec, x);
  Scalar drift = 0;

  xs.push_back(x);
  vs.push_back(v);
  ts.push_back(t);

  Scalar h = dt;
  const Scalar dt_min = dt * std::pow(0.5, opts.max_halvings);
  long long steps = 0;
  long long stored = 0;
  while (t < t_span - 0.5 * h) {
    if (++steps > opts.step_budget) throw std::runtime_error("verlet step budget exhausted");
    // near-collision guard: refine the step when the next stride could
    // reach the origin
    while (x.norm() < 10.0 * h * std::max(v.norm(), Scalar(1e-30))) {
      h *= 0.5;
      if (h < dt_min) throw NearCollisionError("near-collision: dt underflow");
    }
    const Vec x_new = x + h * v + 0.5 * h * h * a;
    if (x_new.norm() <= 0.0) throw NearCollisionError("near-collision: node collapse");
    const Vec a_new = -eval_gradient(spec, x_new);
    v += 0.5 * h * (a + a_new);
    x = x_new;
    a = a_new;
    t += h;
    const Scalar e = 0.5 * v.squaredNorm() + eval_potential(spec, x);
    drift = std::max(drift, std::abs(e - e0));
    ++stored;
    if (stored % opts.store_every == 0) {
      xs.push_back(x);
      vs.push_back(v);
      ts.push_back(t);
    }
  }
  if (ts.back() != t) {
    xs.push_back(x);
    vs.push_back(v);
    ts.push_back(t);
  }

  Trajectory out;
  const int M = static_cast<int>(ts.size());
  out.times.resize(M);
  out.positions.resize(N, M);
  out.velocities.resize(N, M);
  for (int j = 0; j < M; ++j) {
    out.times(j) = ts[j];
    out.positions.col(j) = xs[j];
    out.velocities.col(j) = vs[j];
  }
  out.energy_drift = drift;
  out.dt_used = h;
  return out;
}

Scalar ode_residual(const Vec& times, const Mat& positions, const PotentialSpec& spec) {
  const int M = static_cast<int>(times.size());
  if (M < 3) throw std::invalid_argument("need at least 3 samples");
  Scalar worst = 0, scale = 0;
  for (int j = 1; j + 1 < M; ++j) {
    const Scalar h1 = times(j) - times(j - 1);
    const Scalar h2 = times(j + 1) - times(j);
    const Vec sec = 2.0 / (h1 + h2) *
                    ((positions.col(j + 1) - positions.col(j)) / h2 -
                     (positions.col(j) - positions.col(j - 1)) / h1);
    const Vec gv = eval_gradient(spec, positions.col(j));
    worst = std::max(worst, (sec + gv).norm());
    scale = std::max(scale, gv.norm());
  }
  return worst / std::max(scale, Scalar(1e-300));
}

Scalar ode_residual(const OrbitSegment& segment, const PotentialSpec& spec) {
  return ode_residual(segment.times, segment.positions, spec);
}

Scalar energy_residual(const Mat& positions, const Mat& velocities, const PotentialSpec& spec,
                       Scalar H) {
  Scalar worst = 0;
  for (int j = 0; j < positions.cols(); ++j) {
    const Scalar e = 0.5 * velocities.col(j).squaredNorm() +
                     eval_potential(spec, positions.col(j)) - H;
    worst = std::max(worst, std::abs(e));
  }
  return worst;
}

Scalar energy_residual(const OrbitSegment& segment, const PotentialSpec& spec, Scalar H) {
  return energy_residual(segment.positions, segment.velocities, spec, H);
}

JsonValue kepler_json(const KeplerHyperbola& h) {
  JsonValue j = JsonValue::object();
  j.set("schema", 1);
  j.set("mass", h.mass);
  j.set("delta", h.delta);
  j.set("angular_momentum", h.angular_momentum);
  j.set("energy", h.energy);
  j.set("lenz_magnitude", h.lenz_magnitude);
  j.set("zeta_inf", h.zeta_inf);
  j.set("periapsis", kepler_radius(h, 0.0));
  return j;
}

JsonValue circle_json(const CircularOracle& c, Scalar alpha, Scalar H) {
  JsonValue j = JsonValue::object();
  j.set("schema", 1);
  j.set("alpha", alpha);
  j.set("energy", H);
  j.set("radius", c.radius);
  j.set("omega", c.omega);
  j.set("period", 2.0 * kPi / c.omega);
  return j;
}

}  // namespace orbit
