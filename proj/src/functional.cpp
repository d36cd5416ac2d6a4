#include "orbit/functional.hpp"

namespace orbit {

Scalar eval_g(const SymmetricLoop& loop, const PotentialSpec& spec) {
  const int n = loop.segments;
  Scalar sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const Vec q = loop.half_nodes.col(j);
    sum += eval_potential(spec, q) + 0.5 * eval_gradient(spec, q).dot(q);
  }
  return 2.0 * loop.dt() * sum;
}

Scalar eval_f(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H) {
  return 0.5 * dirichlet_energy(loop) * (H - integral_of_potential(loop, spec));
}

Scalar eval_F(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H) {
  return -eval_f(loop, spec, H);
}

Scalar pairing_f_prime_q(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H) {
  const int n = loop.segments;
  Scalar sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const Vec q = loop.half_nodes.col(j);
    sum += H - eval_potential(spec, q) - 0.5 * eval_gradient(spec, q).dot(q);
  }
  return dirichlet_energy(loop) * 2.0 * loop.dt() * sum;
}

Vec grad_dirichlet_free(const SymmetricLoop& loop) {
  const int n = loop.segments, N = loop.dimension;
  const Scalar dt = loop.dt();
  Vec grad((n - 1) * N);
  for (int j = 1; j < n; ++j) {
    const Vec d = 2.0 * loop.half_nodes.col(j) - loop.half_nodes.col(j - 1) -
                  loop.half_nodes.col(j + 1);
    grad.segment((j - 1) * N, N) = (4.0 / dt) * d;
  }
  return grad;
}

Vec grad_intV_free(const SymmetricLoop& loop, const PotentialSpec& spec) {
  const int n = loop.segments, N = loop.dimension;
  Vec grad((n - 1) * N);
  for (int j = 1; j < n; ++j)
    grad.segment((j - 1) * N, N) = 2.0 * loop.dt() * eval_gradient(spec, loop.half_nodes.col(j));
  return grad;
}

Vec grad_g_free(const SymmetricLoop& loop, const PotentialSpec& spec) {
  const int n = loop.segments, N = loop.dimension;
  Vec grad((n - 1) * N);
  for (int j = 1; j < n; ++j) {
    const Vec q = loop.half_nodes.col(j);
    const Vec gv = eval_gradient(spec, q);
    const Mat hv = eval_hessian(spec, q);
    grad.segment((j - 1) * N, N) = 2.0 * loop.dt() * (1.5 * gv + 0.5 * (hv * q));
  }
  return grad;
}

Vec grad_F_free_nodes(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H) {
  const Scalar D = dirichlet_energy(loop);
  const Scalar P = integral_of_potential(loop, spec);
  return 0.5 * (D * grad_intV_free(loop, spec) - (H - P) * grad_dirichlet_free(loop));
}

FunctionalReport make_functional_report(const SymmetricLoop& loop, const PotentialSpec& spec,
                                        Scalar H) {
  FunctionalReport r;
  r.f_value = eval_f(loop, spec, H);
  r.F_value = -r.f_value;
  r.g_value = eval_g(loop, spec);
  r.constraint_residual = r.g_value - H;
  r.grad_norm = grad_F_free_nodes(loop, spec, H).norm();
  r.energy_H = H;
  r.off_constraint = std::abs(r.constraint_residual) > 1e-4;
  return r;
}

JsonValue functional_report_json(const FunctionalReport& r) {
  JsonValue j = JsonValue::object();
  j.set("f_value", r.f_value);
  j.set("F_value", r.F_value);
  j.set("g_value", r.g_value);
  j.set("constraint_residual", r.constraint_residual);
  j.set("grad_norm", r.grad_norm);
  j.set("energy_H", r.energy_H);
  j.set("off_constraint", r.off_constraint);
  return j;
}

}  // namespace orbit
