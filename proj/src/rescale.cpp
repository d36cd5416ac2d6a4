#include "orbit/rescale.hpp"

#include <cmath>
#include <fstream>

namespace orbit {

Scalar compute_period(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H) {
  const Scalar denom = H - integral_of_potential(loop, spec);
  if (denom <= 0.0)
    throw RescaleError("rescale impossible: int(H - V) <= 0 on this loop");
  return std::sqrt(0.5 * dirichlet_energy(loop) / denom);
}

PeriodWithPolicy period_with_sign_policy(const SymmetricLoop& loop, const PotentialSpec& spec,
                                         Scalar H) {
  const Scalar denom = H - integral_of_potential(loop, spec);
  if (denom == 0.0) throw RescaleError("rescale impossible: int(H - V) vanishes");
  PeriodWithPolicy out;
  out.sign_anomaly = denom < 0.0;
  out.period = std::sqrt(0.5 * dirichlet_energy(loop) / std::abs(denom));
  return out;
}

OrbitSegment reconstruct_orbit(const SymmetricLoop& loop, const PotentialSpec& spec, Scalar H) {
  const PeriodWithPolicy p = period_with_sign_policy(loop, spec, H);
  const Scalar T = p.period;
  const Mat trace = full_trace(loop);
  const int M = static_cast<int>(trace.cols());  // 2n+1
  const Scalar dt_loop = loop.dt();
  const Scalar dt_time = dt_loop * T;

  OrbitSegment seg;
  seg.period = T;
  seg.energy_H = H;
  seg.endpoint_radius = loop.endpoint_radius;
  seg.period_sign_anomaly = p.sign_anomaly;
  seg.times.resize(M);
  for (int j = 0; j < M; ++j) seg.times(j) = -0.5 * T + j * dt_time;
  seg.positions = trace;

  seg.velocities.resize(loop.dimension, M);
  for (int j = 0; j < M; ++j) {
    if (j == 0)
      seg.velocities.col(j) = (trace.col(1) - trace.col(0)) / dt_time;
    else if (j == M - 1)
      seg.velocities.col(j) = (trace.col(M - 1) - trace.col(M - 2)) / dt_time;
    else
      seg.velocities.col(j) = (trace.col(j + 1) - trace.col(j - 1)) / (2.0 * dt_time);
  }

  seg.energy_residuals.resize(M);
  seg.max_interior_energy_residual = 0;
  for (int j = 0; j < M; ++j) {
    const Scalar e = 0.5 * seg.velocities.col(j).squaredNorm() +
                     eval_potential(spec, seg.positions.col(j)) - H;
    seg.energy_residuals(j) = std::abs(e);
    if (j > 0 && j < M - 1)
      seg.max_interior_energy_residual =
          std::max(seg.max_interior_energy_residual, seg.energy_residuals(j));
  }
  return seg;
}

Scalar min_segment_radius(const OrbitSegment& seg) {
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  for (int j = 0; j < seg.node_count(); ++j) lo = std::min(lo, seg.positions.col(j).norm());
  return lo;
}

OrbitSegment shift_by_tstar(const OrbitSegment& segment, Scalar M_threshold) {
  if (!(M_threshold <= segment.endpoint_radius))
    throw std::invalid_argument("threshold must not exceed the endpoint radius");
  const int M = segment.node_count();
  Scalar tstar = 0;
  bool found = false;
  for (int j = 0; j < M; ++j) {
    const Scalar r = segment.positions.col(j).norm();
    if (r <= M_threshold) {
      if (j == 0) {
        tstar = segment.times(0);
      } else {
        // linear interpolation of |u| between nodes j-1 and j
        const Scalar r_prev = segment.positions.col(j - 1).norm();
        const Scalar w = (r_prev - M_threshold) / std::max(r_prev - r, Scalar(1e-300));
        tstar = segment.times(j - 1) + w * (segment.times(j) - segment.times(j - 1));
      }
      found = true;
      break;
    }
  }
  if (!found) throw std::invalid_argument("threshold radius never attained on the segment");
  OrbitSegment out = segment;
  out.times.array() -= tstar;
  out.tstar_shift = segment.tstar_shift + tstar;
  return out;
}

void write_segment_csv(const OrbitSegment& seg, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  const int N = static_cast<int>(seg.positions.rows());
  os << "t";
  for (int i = 1; i <= N; ++i) os << ",x" << i;
  for (int i = 1; i <= N; ++i) os << ",v" << i;
  os << ",energy_residual\n";
  for (int j = 0; j < seg.node_count(); ++j) {
    os << fmt17(seg.times(j));
    for (int i = 0; i < N; ++i) os << ',' << fmt17(seg.positions(i, j));
    for (int i = 0; i < N; ++i) os << ',' << fmt17(seg.velocities(i, j));
    os << ',' << fmt17(seg.energy_residuals(j)) << "\n";
  }
}

JsonValue segment_meta_json(const OrbitSegment& seg) {
  JsonValue j = JsonValue::object();
  j.set("schema", 1);
  j.set("period", seg.period);
  j.set("energy_H", seg.energy_H);
  j.set("endpoint_radius", seg.endpoint_radius);
  j.set("tstar_shift", seg.tstar_shift);
  j.set("period_sign_anomaly", seg.period_sign_anomaly);
  j.set("max_interior_energy_residual", seg.max_interior_energy_residual);
  j.set("min_radius", min_segment_radius(seg));
  j.set("nodes", seg.node_count());
  return j;
}

}  // namespace orbit
