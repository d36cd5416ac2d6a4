#include "orbit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace orbit {

AngularDefect angular_defect(const OrbitSegment& seg) {
  const int M = seg.node_count();
  AngularDefect out;
  out.A.resize(M);
  out.omega.resize(M);
  for (int j = 0; j < M; ++j) {
    const Vec u = seg.positions.col(j);
    const Vec v = seg.velocities.col(j);
    const Scalar r = u.norm(), s = v.norm();
    if (r <= 0.0) throw SingularityError("angular defect at the origin");
    const Scalar cross2 = std::max(r * r * s * s - u.dot(v) * u.dot(v), Scalar(0));
    out.A(j) = std::sqrt(cross2);
    if (s <= 0.0) {
      out.omega(j) = std::numeric_limits<Scalar>::quiet_NaN();
      out.gaps.push_back(j);
    } else {
      out.omega(j) = out.A(j) / (r * s);
    }
  }
  return out;
}

RadiusVerdict radius_bounds_sweep(const std::vector<SweepEntry>& entries) {
  std::vector<const SweepEntry*> ok;
  for (const auto& e : entries)
    if (e.ok()) ok.push_back(&e);
  if (ok.size() < 4) throw std::invalid_argument("need at least 4 sweep entries");
  const Scalar span = ok.back()->R / ok.front()->R;
  if (span < 16.0) throw std::invalid_argument("sweep must span at least 16x in R");

  RadiusVerdict v;
  v.M_emp = 0;
  v.m_emp = std::numeric_limits<Scalar>::infinity();
  for (const auto* e : ok) {
    v.M_emp = std::max(v.M_emp, e->min_radius);
    v.m_emp = std::min(v.m_emp, e->min_radius);
  }

  // log-log least-squares fit of min_radius against R
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int k = static_cast<int>(ok.size());
  for (const auto* e : ok) {
    const Scalar x = std::log2(e->R), y = std::log(e->min_radius);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const Scalar slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  v.drift_per_doubling = std::exp(slope) - 1.0;

  v.monotone = true;
  bool inc = true, dec = true;
  for (size_t i = 1; i < ok.size(); ++i) {
    inc = inc && ok[i]->min_radius > ok[i - 1]->min_radius;
    dec = dec && ok[i]->min_radius < ok[i - 1]->min_radius;
  }
  v.monotone = inc || dec;

  const bool band_ok = v.M_emp / v.m_emp < 10.0;
  const bool drift_ok = !(v.monotone && std::abs(v.drift_per_doubling) > 0.10);
  v.pass = band_ok && drift_ok;
  return v;
}

std::pair<Scalar, Scalar> escape_margins(const OrbitSegment& seg, Scalar L) {
  const int M = seg.node_count();
  Scalar t_minus = 0, t_plus = 0;
  bool found = false;
  for (int j = 0; j < M; ++j) {
    if (seg.positions.col(j).norm() <= L) {
      t_minus = seg.times(j);
      if (j > 0) {
        const Scalar r0 = seg.positions.col(j - 1).norm();
        const Scalar r1 = seg.positions.col(j).norm();
        const Scalar w = (r0 - L) / std::max(r0 - r1, Scalar(1e-300));
        t_minus = seg.times(j - 1) + w * (seg.times(j) - seg.times(j - 1));
      }
      found = true;
      break;
    }
  }
  if (!found) throw std::invalid_argument("threshold never crossed");
  for (int j = M - 1; j >= 0; --j) {
    if (seg.positions.col(j).norm() <= L) {
      t_plus = seg.times(j);
      if (j + 1 < M) {
        const Scalar r0 = seg.positions.col(j).norm();
        const Scalar r1 = seg.positions.col(j + 1).norm();
        const Scalar w = (L - r0) / std::max(r1 - r0, Scalar(1e-300));
        t_plus = seg.times(j) + w * (seg.times(j + 1) - seg.times(j));
      }
      break;
    }
  }
  return {t_minus, t_plus};
}

ActionIntegral action_bound(const OrbitSegment& seg, const PotentialSpec& spec, Scalar H) {
  const int M = seg.node_count();
  ActionIntegral out;
  Vec integrand(M);
  for (int j = 0; j < M; ++j) {
    const Scalar hv = H - eval_potential(spec, seg.positions.col(j));
    if (hv < 0) ++out.clipped_nodes;
    integrand(j) = std::sqrt(std::max(hv, Scalar(0))) * seg.velocities.col(j).norm();
  }
  for (int j = 0; j + 1 < M; ++j)
    out.value += 0.5 * (integrand(j) + integrand(j + 1)) * (seg.times(j + 1) - seg.times(j));
  return out;
}

DirectionTrigger direction_trigger(const OrbitSegment& seg, const Vec& e, Scalar eta,
                                   Scalar L_eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
  const AngularDefect ad = angular_defect(seg);
  const int M = seg.node_count();
  DirectionTrigger out;
  int j0 = -1;
  for (int j = 0; j < M; ++j) {
    const Vec u = seg.positions.col(j);
    const Vec v = seg.velocities.col(j);
    if (u.norm() >= L_eta && u.dot(v) > 0.0 && std::isfinite(ad.omega(j)) && ad.omega(j) < eta) {
      j0 = j;
      break;
    }
  }
  if (j0 < 0) return out;  // escape conditions unmet
  out.found = true;
  out.t0 = seg.times(j0);
  out.radius_t0 = seg.positions.col(j0).norm();
  out.omega_after_max = 0;
  out.sup_tail_error = 0;
  out.min_radial_speed = std::numeric_limits<Scalar>::infinity();
  for (int j = j0; j < M; ++j) {
    if (std::isfinite(ad.omega(j)))
      out.omega_after_max = std::max(out.omega_after_max, ad.omega(j));
    const Vec u = seg.positions.col(j);
    out.sup_tail_error = std::max(out.sup_tail_error, (u / u.norm() - e).norm());
    if (j > j0) {
      const Scalar dr = u.norm() - seg.positions.col(j - 1).norm();
      const Scalar dt = seg.times(j) - seg.times(j - 1);
      out.min_radial_speed = std::min(out.min_radial_speed, dr / dt);
    }
  }
  return out;
}

DirectionReport direction_convergence(const std::vector<OrbitSegment>& segments, const Vec& e,
                                      const std::vector<Scalar>& eta_grid, Scalar beta,
                                      Scalar L_eta) {
  DirectionReport rep;
  rep.eta_grid = eta_grid;
  rep.triggers.resize(segments.size());
  rep.fits.resize(segments.size());
  rep.sup_tail_error.resize(segments.size(), 0);

  for (size_t s = 0; s < segments.size(); ++s) {
    for (Scalar eta : eta_grid)
      rep.triggers[s].push_back(direction_trigger(segments[s], e, eta, L_eta));

    // least squares of drift ~ c1 eta + c2 |u(t0)|^{-beta} over the eta grid
    Scalar a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    int rows = 0;
    for (size_t k = 0; k < eta_grid.size(); ++k) {
      const DirectionTrigger& tr = rep.triggers[s][k];
      if (!tr.found) continue;
      const Scalar x1 = eta_grid[k];
      const Scalar x2 = std::pow(tr.radius_t0, -beta);
      const Scalar y = tr.sup_tail_error;
      a11 += x1 * x1;
      a12 += x1 * x2;
      a22 += x2 * x2;
      b1 += x1 * y;
      b2 += x2 * y;
      ++rows;
    }
    const Scalar det = a11 * a22 - a12 * a12;
    if (rows >= 2 && std::abs(det) > 1e-14 * std::max(a11 * a22, Scalar(1e-300))) {
      rep.fits[s].c1 = (b1 * a22 - b2 * a12) / det;
      rep.fits[s].c2 = (a11 * b2 - a12 * b1) / det;
      rep.fits[s].valid = true;
    }
    // reference drift at the middle of the grid
    const size_t mid = eta_grid.size() / 2;
    if (rep.triggers[s][mid].found) rep.sup_tail_error[s] = rep.triggers[s][mid].sup_tail_error;
  }

  rep.errors_decreasing = segments.size() >= 2;
  for (size_t s = 1; s < segments.size(); ++s)
    rep.errors_decreasing =
        rep.errors_decreasing && rep.sup_tail_error[s] < rep.sup_tail_error[s - 1];

  rep.constants_stable = true;
  for (size_t s = 1; s < segments.size(); ++s) {
    if (!rep.fits[s].valid || !rep.fits[0].valid) {
      rep.constants_stable = false;
      break;
    }
    const auto within = [](Scalar a, Scalar b) {
      const Scalar lo = std::min(std::abs(a), std::abs(b));
      const Scalar hi = std::max(std::abs(a), std::abs(b));
      return hi <= 1.5 * lo;
    };
    if (!within(rep.fits[s].c1, rep.fits[0].c1) || !within(rep.fits[s].c2, rep.fits[0].c2))
      rep.constants_stable = false;
  }
  return rep;
}

Scalar window_distance(const OrbitSegment& a, const OrbitSegment& b, Scalar W, int grid_points) {
  const Scalar lo = std::max({a.times(0), b.times(0), -W});
  const Scalar hi = std::min({a.times(a.node_count() - 1), b.times(b.node_count() - 1), W});
  if (hi <= lo) return 0.0;

  const auto sample = [](const OrbitSegment& seg, Scalar t) -> Vec {
    const int M = seg.node_count();
    if (t <= seg.times(0)) return seg.positions.col(0);
    if (t >= seg.times(M - 1)) return seg.positions.col(M - 1);
    int lo_i = 0, hi_i = M - 1;
    while (hi_i - lo_i > 1) {
      const int mid = (lo_i + hi_i) / 2;
      if (seg.times(mid) <= t)
        lo_i = mid;
      else
        hi_i = mid;
    }
    const Scalar w = (t - seg.times(lo_i)) / (seg.times(hi_i) - seg.times(lo_i));
    return (1.0 - w) * seg.positions.col(lo_i) + w * seg.positions.col(hi_i);
  };

  Scalar worst = 0;
  for (int k = 0; k <= grid_points; ++k) {
    const Scalar t = lo + (hi - lo) * k / grid_points;
    worst = std::max(worst, (sample(a, t) - sample(b, t)).norm());
  }
  return worst;
}

namespace {

struct StageOutput {
  SweepEntry entry;
  std::optional<OrbitSegment> segment;  // unshifted
  std::optional<SolveReport> solve;
};

StageOutput run_stage(const PotentialSpec& spec, Scalar H, const Vec& e, Scalar R,
                      const SweepOptions& opt) {
  StageOutput out;
  out.entry.R = R;
  try {
    const SeedResult seed = solve_seed(R, e, H, spec, opt.n);
    auto [loop, report] = minimize_constrained(seed.loop, spec, H, opt.solver);
    if (report.status == SolveStatus::CollisionAbort) {
      out.entry.error = "collision abort";
      return out;
    }
    OrbitSegment seg = reconstruct_orbit(loop, spec, H);
    out.entry.T = seg.period;
    out.entry.period_sign_anomaly = seg.period_sign_anomaly;
    out.entry.collision_floor_active = report.collision_floor_active;
    out.entry.min_radius = min_segment_radius(seg);
    int jmin = 0;
    for (int j = 0; j < seg.node_count(); ++j)
      if (seg.positions.col(j).norm() < seg.positions.col(jmin).norm()) jmin = j;
    out.entry.min_radius_time = seg.times(jmin);
    for (int j = 0; j < seg.node_count(); ++j)
      out.entry.max_speed = std::max(out.entry.max_speed, seg.velocities.col(j).norm());
    const ActionIntegral ai = action_bound(seg, spec, H);
    out.entry.action_integral = ai.value;
    out.entry.action_clipped_nodes = ai.clipped_nodes;
    out.segment = std::move(seg);
    out.solve = std::move(report);
  } catch (const std::exception& ex) {
    out.entry.error = ex.what();
  }
  return out;
}

}  // namespace

SweepResult continuation_sweep(const PotentialSpec& spec, Scalar H, const Vec& e,
                               const std::vector<Scalar>& R_schedule,
                               const SweepOptions& options) {
  if (R_schedule.size() < 4) throw std::invalid_argument("R schedule needs >= 4 entries");
  for (size_t i = 1; i < R_schedule.size(); ++i)
    if (!(R_schedule[i] > R_schedule[i - 1]))
      throw std::invalid_argument("R schedule must be strictly increasing");

  SweepResult result;
  std::vector<StageOutput> stages(R_schedule.size());

  if (options.jobs > 1) {
    std::vector<std::future<StageOutput>> futures;
    futures.reserve(R_schedule.size());
    for (Scalar R : R_schedule)
      futures.push_back(std::async(std::launch::async,
                                   [&, R]() { return run_stage(spec, H, e, R, options); }));
    for (size_t i = 0; i < futures.size(); ++i) stages[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < R_schedule.size(); ++i)
      stages[i] = run_stage(spec, H, e, R_schedule[i], options);
  }

  // empirical radius band over successful entries
  result.M_emp = 0;
  result.m_emp = std::numeric_limits<Scalar>::infinity();
  for (const auto& st : stages) {
    if (st.entry.ok()) {
      result.M_emp = std::max(result.M_emp, st.entry.min_radius);
      result.m_emp = std::min(result.m_emp, st.entry.min_radius);
    }
  }
  result.L_threshold = options.L_threshold > 0
                           ? options.L_threshold
                           : std::max(2.0 * result.M_emp, R_schedule.front() / 4.0);

  // shift by t* (threshold M_emp) and fill the crossing diagnostics
  for (auto& st : stages) {
    SweepEntry& entry = st.entry;
    if (st.segment) {
      try {
        OrbitSegment shifted = shift_by_tstar(*st.segment, result.M_emp);
        const auto [tm, tp] = escape_margins(shifted, result.L_threshold);
        entry.t_minus = tm;
        entry.t_plus = tp;
        entry.escape_margin_plus = shifted.times(shifted.node_count() - 1) - tp;
        entry.escape_margin_minus = tm - shifted.times(0);
        const DirectionTrigger tr =
            direction_trigger(shifted, e, options.eta, result.L_threshold);
        if (tr.found) {
          entry.omega_max_after_escape = tr.omega_after_max;
          entry.sup_direction_error = tr.sup_tail_error;
        }
        result.shifted_segments.push_back(std::move(shifted));
      } catch (const std::exception& ex) {
        entry.error = ex.what();
      }
    }
    result.entries.push_back(entry);
  }

  try {
    result.radius_verdict = radius_bounds_sweep(result.entries);
  } catch (const std::exception&) {
    result.radius_verdict = {};
  }

  result.margins_increasing = result.shifted_segments.size() >= 2;
  for (size_t i = 1; i < result.entries.size(); ++i) {
    if (!result.entries[i].ok() || !result.entries[i - 1].ok()) continue;
    if (!(result.entries[i].escape_margin_plus > result.entries[i - 1].escape_margin_plus))
      result.margins_increasing = false;
  }

  for (size_t i = 1; i < result.shifted_segments.size(); ++i)
    result.window_distances.push_back(window_distance(result.shifted_segments[i - 1],
                                                      result.shifted_segments[i],
                                                      options.window));
  result.window_distances_decreasing = result.window_distances.size() >= 2;
  for (size_t i = 1; i < result.window_distances.size(); ++i)
    if (!(result.window_distances[i] < result.window_distances[i - 1]))
      result.window_distances_decreasing = false;

  // hyperbolicity proxy: |u| at the window edges grows along the ladder and
  // the largest-R run ends far outside the empirical radius band
  result.edge_radii_growing = result.shifted_segments.size() >= 2;
  Scalar prev_edge = 0;
  for (size_t i = 0; i < result.shifted_segments.size(); ++i) {
    const OrbitSegment& seg = result.shifted_segments[i];
    const Scalar edge = std::min(seg.positions.col(0).norm(),
                                 seg.positions.col(seg.node_count() - 1).norm());
    if (i > 0 && !(edge > prev_edge)) result.edge_radii_growing = false;
    prev_edge = edge;
    if (i + 1 == result.shifted_segments.size())
      result.final_edge_exceeds_10M = edge > 10.0 * result.M_emp;
  }
  result.hyperbolicity_pass = result.edge_radii_growing && result.final_edge_exceeds_10M;
  return result;
}

JsonValue sweep_json(const SweepResult& r) {
  JsonValue root = JsonValue::object();
  root.set("schema", 1);
  JsonValue arr = JsonValue::array();
  for (const auto& e : r.entries) {
    JsonValue j = JsonValue::object();
    j.set("R", e.R);
    j.set("T", e.T);
    j.set("min_radius", e.min_radius);
    j.set("min_radius_time", e.min_radius_time);
    j.set("action_integral", e.action_integral);
    j.set("action_clipped_nodes", e.action_clipped_nodes);
    j.set("t_plus", e.t_plus);
    j.set("t_minus", e.t_minus);
    j.set("escape_margin_plus", e.escape_margin_plus);
    j.set("escape_margin_minus", e.escape_margin_minus);
    j.set("omega_max_after_escape", e.omega_max_after_escape);
    j.set("sup_direction_error", e.sup_direction_error);
    j.set("max_speed", e.max_speed);
    j.set("collision_floor_active", e.collision_floor_active);
    j.set("period_sign_anomaly", e.period_sign_anomaly);
    j.set("error", e.error);
    arr.push_back(std::move(j));
  }
  root.set("entries", std::move(arr));

  JsonValue verdict = JsonValue::object();
  verdict.set("M_emp", r.M_emp);
  verdict.set("m_emp", r.m_emp);
  verdict.set("L_threshold", r.L_threshold);
  verdict.set("radius_band_pass", r.radius_verdict.pass);
  verdict.set("radius_drift_per_doubling", r.radius_verdict.drift_per_doubling);
  verdict.set("margins_increasing", r.margins_increasing);
  JsonValue wd = JsonValue::array();
  for (Scalar d : r.window_distances) wd.push_back(d);
  verdict.set("window_distances", std::move(wd));
  verdict.set("window_distances_decreasing", r.window_distances_decreasing);
  verdict.set("edge_radii_growing", r.edge_radii_growing);
  verdict.set("final_edge_exceeds_10M", r.final_edge_exceeds_10M);
  verdict.set("hyperbolicity_pass", r.hyperbolicity_pass);
  root.set("verdict", std::move(verdict));
  return root;
}

}  // namespace orbit
