#include "orbit/minimize.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <deque>

namespace orbit {

namespace {

struct Problem {
  const SymmetricLoop* shape;  // fixed R, e, n
  const PotentialSpec* spec;
  Scalar H;
  Scalar floor;

  int n() const { return shape->segments; }
  int N() const { return shape->dimension; }
  int size() const { return (n() - 1) * N(); }

  bool admissible(const Vec& z) const {
    const int N_ = N();
    for (int j = 0; j < n() - 1; ++j)
      if (z.segment(j * N_, N_).norm() < floor) return false;
    return true;
  }

  void eval(const Vec& z, Scalar* D, Scalar* c, Vec* gD, Vec* gc) const {
    const SymmetricLoop loop = with_free_vector(*shape, z);
    if (D) *D = dirichlet_energy(loop);
    if (c) *c = eval_g(loop, *spec) - H;
    if (gD) *gD = grad_dirichlet_free(loop);
    if (gc) *gc = grad_g_free(loop, *spec);
  }
};

struct LbfgsResult {
  Vec z;
  int iterations = 0;
  bool floor_hit = false;      // some line search rejected a sub-floor iterate
  bool line_search_failed = false;
};

// Minimizes the augmented Lagrangian D + lambda c + mu/2 c^2 with Armijo
// backtracking; iterates below the collision floor are rejected.
LbfgsResult lbfgs_inner(const Problem& prob, Vec z, Scalar lambda, Scalar mu, Scalar gtol,
                        const SolverConfig& cfg, int max_iters) {
  const auto merit = [&](const Vec& v, Vec* grad) {
    Scalar D, c;
    Vec gD, gc;
    prob.eval(v, &D, &c, grad ? &gD : nullptr, grad ? &gc : nullptr);
    if (grad) *grad = gD + (lambda + mu * c) * gc;
    return D + lambda * c + 0.5 * mu * c * c;
  };

  LbfgsResult out;
  std::deque<Vec> s_hist, y_hist;
  std::deque<Scalar> rho_hist;

  Vec grad;
  Scalar value = merit(z, &grad);

  for (int it = 0; it < max_iters; ++it) {
    if (grad.norm() <= gtol) break;
    // two-loop recursion
    Vec q = grad;
    std::vector<Scalar> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const Scalar gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    } else {
      q *= 1.0 / std::max(grad.norm(), Scalar(1.0));
    }
    for (size_t i = 0; i < s_hist.size(); ++i) {
      const Scalar beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Vec dir = -q;
    Scalar slope = grad.dot(dir);
    if (slope >= 0) {  // fall back to steepest descent
      dir = -grad;
      slope = -grad.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    Scalar step = 1.0;
    bool accepted = false;
    Vec z_new;
    Scalar value_new = 0;
    for (int ls = 0; ls < 60; ++ls) {
      z_new = z + step * dir;
      if (!prob.admissible(z_new)) {
        out.floor_hit = true;
        step *= cfg.ls_shrink;
        continue;
      }
      value_new = merit(z_new, nullptr);
      if (value_new <= value + cfg.ls_sufficient_decrease * step * slope) {
        accepted = true;
        break;
      }
      step *= cfg.ls_shrink;
    }
    if (!accepted) {
      out.line_search_failed = true;
      break;
    }

    Vec grad_new;
    merit(z_new, &grad_new);
    const Vec s = z_new - z;
    const Vec y = grad_new - grad;
    const Scalar sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > cfg.lbfgs_memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    z = std::move(z_new);
    grad = std::move(grad_new);
    value = value_new;
    ++out.iterations;
  }
  out.z = std::move(z);
  return out;
}

Scalar least_squares_multiplier(const Vec& gD, const Vec& gc) {
  const Scalar denom = gc.squaredNorm();
  if (denom <= 0) return 0;
  return -gD.dot(gc) / denom;
}

// One Newton step on the KKT system
//   [ H_L   gc ] [dz     ]   [ -(gD + lambda gc) ]
//   [ gc^T  0  ] [dlambda] = [ -c                ]
// with H_L = hess(D) + lambda hess(g); exact for the homogeneous profile
// family.  Returns false when the factorization fails.
bool newton_step(const Problem& prob, const Vec& z, Scalar lambda, Vec* dz, Scalar* dlambda) {
  const int m = prob.size();
  const int n = prob.n(), N = prob.N();
  const Scalar dt = prob.shape->dt();
  const SymmetricLoop loop = with_free_vector(*prob.shape, z);

  std::vector<Eigen::Triplet<Scalar>> trips;
  trips.reserve(static_cast<size_t>(m) * (N + 3));
  // hess(D): (8/dt) I on the diagonal blocks, -(4/dt) I between neighbours
  for (int j = 0; j < n - 1; ++j) {
    for (int i = 0; i < N; ++i) {
      trips.emplace_back(j * N + i, j * N + i, 8.0 / dt);
      if (j + 1 < n - 1) {
        trips.emplace_back(j * N + i, (j + 1) * N + i, -4.0 / dt);
        trips.emplace_back((j + 1) * N + i, j * N + i, -4.0 / dt);
      }
    }
  }
  // lambda hess(g), homogeneous identity: hess(g) = (1 - alpha/2) 2 dt hess(V)
  const Scalar gfac = (1.0 - prob.spec->alpha / 2.0) * 2.0 * dt * lambda;
  for (int j = 1; j < n; ++j) {
    const Mat hv = eval_hessian(*prob.spec, loop.half_nodes.col(j));
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        trips.emplace_back((j - 1) * N + a, (j - 1) * N + b, gfac * hv(a, b));
  }

  Scalar c;
  Vec gD, gc;
  prob.eval(z, nullptr, &c, &gD, &gc);

  Eigen::SparseMatrix<Scalar> K(m + 1, m + 1);
  for (int i = 0; i < m; ++i) {
    trips.emplace_back(i, m, gc(i));
    trips.emplace_back(m, i, gc(i));
  }
  K.setFromTriplets(trips.begin(), trips.end());

  Vec rhs(m + 1);
  rhs.head(m) = -(gD + lambda * gc);
  rhs(m) = -c;

  Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success) return false;
  const Vec sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success) return false;
  *dz = sol.head(m);
  *dlambda = sol(m);
  return true;
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::CollisionAbort: return "collision_abort";
  }
  return "unknown";
}

std::pair<SymmetricLoop, SolveReport> minimize_constrained(const SymmetricLoop& seed,
                                                           const PotentialSpec& spec, Scalar H,
                                                           const SolverConfig& config) {
  if (!(H > 0)) throw std::invalid_argument("H must be positive");
  const Scalar seed_res = std::abs(eval_g(seed, spec) - H);
  if (seed_res >= 1e-6 * H)
    throw std::invalid_argument("seed violates |g - H| < 1e-6 H; run solve_seed first");

  Problem prob{&seed, &spec, H, config.collision_floor_rel * seed.endpoint_radius};

  SolveReport report;
  report.collision_floor = prob.floor;

  Vec z = to_free_vector(seed);
  Scalar lambda = 0.0;
  Scalar mu = config.penalty_init;

  Scalar c;
  Vec gD, gc;
  prob.eval(z, nullptr, &c, &gD, &gc);
  lambda = least_squares_multiplier(gD, gc);

  Scalar gtol = 0.0;
  {
    const Vec g0 = gD + (lambda + mu * c) * gc;
    gtol = std::max(1e-2 * g0.norm(), 1e3 * config.tol_kkt);
  }
  Scalar feas_target = std::max(std::abs(c) * 1e-2, 0.1 * config.tol_constraint * H);

  bool floor_hit_unrecoverable = false;
  for (int outer = 0; outer < config.max_outer; ++outer) {
    LbfgsResult inner = lbfgs_inner(prob, z, lambda, mu, gtol, config, config.max_inner);
    z = inner.z;
    report.inner_iterations += inner.iterations;
    ++report.outer_iterations;

    Scalar D;
    prob.eval(z, &D, &c, &gD, &gc);
    const SymmetricLoop cur = with_free_vector(seed, z);
    report.F_trajectory.push_back(eval_F(cur, spec, H));
    report.merit_trajectory.push_back(D + lambda * c + 0.5 * mu * c * c);

    if (inner.line_search_failed && inner.floor_hit) {
      floor_hit_unrecoverable = true;
      break;
    }

    const Scalar kkt = (gD + least_squares_multiplier(gD, gc) * gc).norm();
    if (std::abs(c) <= 10.0 * config.tol_constraint * H && kkt <= 1e3 * config.tol_kkt) break;

    if (std::abs(c) <= feas_target) {
      lambda += mu * c;
      feas_target = std::max(0.25 * feas_target, 0.1 * config.tol_constraint * H);
      gtol = std::max(0.2 * gtol, 0.1 * config.tol_kkt);
    } else {
      mu *= config.penalty_growth;
    }
    if (inner.line_search_failed) {
      // progress stalled at this subproblem accuracy; tighten multiplier and go on
      lambda += mu * c;
      gtol = std::max(0.2 * gtol, 0.1 * config.tol_kkt);
    }
  }

  // Newton polish on the KKT system down to the stationarity target.
  prob.eval(z, nullptr, &c, &gD, &gc);
  lambda = least_squares_multiplier(gD, gc);
  Vec best_z = z;
  Scalar best_lambda = lambda;
  Scalar best_score = (gD + lambda * gc).norm() / H + std::abs(c) / (config.tol_constraint * H);
  if (!floor_hit_unrecoverable) {
    for (int it = 0; it < config.newton_max; ++it) {
      const Scalar kkt = (gD + lambda * gc).norm();
      if (kkt <= 0.5 * config.tol_kkt && std::abs(c) <= 0.5 * config.tol_constraint * H) break;
      Vec dz;
      Scalar dlambda;
      if (!newton_step(prob, z, lambda, &dz, &dlambda)) break;
      Scalar step = 1.0;
      bool moved = false;
      for (int back = 0; back < 30; ++back) {
        const Vec z_try = z + step * dz;
        if (prob.admissible(z_try)) {
          const Scalar lambda_try = lambda + step * dlambda;
          Scalar c_try;
          Vec gD_try, gc_try;
          prob.eval(z_try, nullptr, &c_try, &gD_try, &gc_try);
          const Scalar score = (gD_try + lambda_try * gc_try).norm() / H +
                               std::abs(c_try) / (config.tol_constraint * H);
          if (score < best_score || back == 29) {
            z = z_try;
            lambda = lambda_try;
            c = c_try;
            gD = gD_try;
            gc = gc_try;
            ++report.newton_iterations;
            moved = true;
            if (score < best_score) {
              best_score = score;
              best_z = z;
              best_lambda = lambda;
            }
            break;
          }
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
  }
  z = best_z;
  lambda = best_lambda;

  SymmetricLoop loop = with_free_vector(seed, z);
  prob.eval(z, nullptr, &c, &gD, &gc);
  const Scalar lambda_ls = least_squares_multiplier(gD, gc);

  report.multiplier = lambda_ls;
  report.kkt_residual = (gD + lambda_ls * gc).norm();
  report.g_value = c + H;
  report.constraint_residual = std::abs(c) / H;
  report.f_value = eval_f(loop, spec, H);
  report.F_value = -report.f_value;
  report.min_radius = min_interior_radius(loop);
  report.collision_floor_active = report.min_radius <= 1.05 * prob.floor;

  if (floor_hit_unrecoverable)
    report.status = SolveStatus::CollisionAbort;
  else if (report.kkt_residual <= config.tol_kkt &&
           report.constraint_residual <= config.tol_constraint)
    report.status = SolveStatus::Converged;
  else
    report.status = SolveStatus::MaxIterations;
  return {loop, report};
}

KktReport kkt_report(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar /*H*/) {
  const Vec gD = grad_dirichlet_free(loop);
  const Vec gc = grad_g_free(loop, spec);
  KktReport r;
  r.multiplier = least_squares_multiplier(gD, gc);
  r.stationarity_residual = (gD + r.multiplier * gc).norm();
  return r;
}

Scalar full_space_kkt_residual(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar /*H*/) {
  const Mat trace = full_trace(loop);
  const int M = static_cast<int>(trace.cols()) - 1;  // distinct nodes 0..M-1
  const int N = loop.dimension;
  const Scalar dt = loop.dt();
  // full-loop gradients over nodes 1..M-1 (node 0 pinned to Re)
  Vec gD((M - 1) * N), gc((M - 1) * N);
  for (int j = 1; j < M; ++j) {
    const Vec prev = trace.col(j - 1), cur = trace.col(j), next = trace.col(j + 1);
    gD.segment((j - 1) * N, N) = (2.0 / dt) * (2.0 * cur - prev - next);
    const Vec gv = eval_gradient(spec, cur);
    const Mat hv = eval_hessian(spec, cur);
    gc.segment((j - 1) * N, N) = dt * (1.5 * gv + 0.5 * (hv * cur));
  }
  const Scalar lambda = least_squares_multiplier(gD, gc);
  return (gD + lambda * gc).norm();
}

JsonValue solve_report_json(const SolveReport& r) {
  JsonValue j = JsonValue::object();
  j.set("status", to_string(r.status));
  j.set("outer_iterations", r.outer_iterations);
  j.set("inner_iterations", r.inner_iterations);
  j.set("newton_iterations", r.newton_iterations);
  j.set("f_value", r.f_value);
  j.set("F_value", r.F_value);
  j.set("g_value", r.g_value);
  j.set("constraint_residual", r.constraint_residual);
  j.set("kkt_residual", r.kkt_residual);
  j.set("multiplier", r.multiplier);
  j.set("min_radius", r.min_radius);
  j.set("collision_floor", r.collision_floor);
  j.set("collision_floor_active", r.collision_floor_active);
  JsonValue traj = JsonValue::array();
  for (Scalar v : r.F_trajectory) traj.push_back(v);
  j.set("F_trajectory", std::move(traj));
  JsonValue merit = JsonValue::array();
  for (Scalar v : r.merit_trajectory) merit.push_back(v);
  j.set("merit_trajectory", std::move(merit));
  return j;
}

}  // namespace orbit
