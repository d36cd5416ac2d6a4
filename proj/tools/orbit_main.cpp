// Command-line front end: hypothesis checking, single constrained solves,
// continuation sweeps and closed-form oracles.  All output is deterministic:
// fixed seeds, fixed iteration order, 17-significant-digit floats.
//
// Exit codes: 0 full pass, 1 check/verdict failure, 2 bad configuration or
// arguments, 3 collision abort, 4 non-convergence.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "orbit/config.hpp"
#include "orbit/diagnostics.hpp"
#include "orbit/dynamics.hpp"
#include "orbit/minimize.hpp"
#include "orbit/rescale.hpp"
#include "orbit/seed.hpp"

namespace fs = std::filesystem;
using namespace orbit;

namespace {

bool log_enabled() {
  const char* v = std::getenv("ORBIT_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void logline(const std::string& msg) {
  if (log_enabled()) std::cerr << "[orbit] " << msg << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << text;
}

JsonValue hypothesis_json(const HypothesisReport& report) {
  JsonValue j = JsonValue::object();
  j.set("schema", 1);
  JsonValue entries = JsonValue::array();
  for (const auto& e : report.entries) {
    JsonValue one = JsonValue::object();
    one.set("name", e.name);
    one.set("applicable", e.applicable);
    one.set("pass", e.pass);
    one.set("worst_residual", e.worst_residual);
    if (e.witness.size() > 0) {
      JsonValue w = JsonValue::array();
      for (int i = 0; i < e.witness.size(); ++i) w.push_back(e.witness(i));
      one.set("witness", std::move(w));
    }
    entries.push_back(std::move(one));
  }
  j.set("entries", std::move(entries));
  j.set("all_pass", report.all_pass());
  return j;
}

Vec axis_direction(int dimension) {
  Vec e = Vec::Zero(dimension);
  e(0) = 1.0;
  return e;
}

int cmd_check_potential(const std::string& config_path, int samples) {
  PotentialSpec spec;
  try {
    spec = load_potential_config(config_path);
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  }
  const HypothesisReport report = check_hypotheses(spec, samples);
  std::cout << hypothesis_json(report).dump();
  if (report.all_pass()) return 0;
  for (const auto& e : report.entries)
    if (e.name == "V1-range" && !e.pass) std::cerr << "(V1) range violated\n";
  return 1;
}

int cmd_solve(const std::string& config_path, Scalar R, Scalar H, int n,
              const std::string& out_dir, const SolverConfig& solver,
              std::pair<Scalar, Scalar> bracket, Scalar alpha_override) {
  if (!(R > 0) || !(H > 0) || n < 8 || n % 2 != 0) {
    std::cerr << "bad arguments: need R > 0, H > 0, even n >= 8\n";
    return 2;
  }
  PotentialSpec spec;
  try {
    spec = load_potential_config(config_path);
    if (alpha_override > 0) {
      spec.alpha = alpha_override;
      validate_spec(spec);
    }
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  }
  fs::create_directories(out_dir);
  const Vec e = axis_direction(spec.dimension);
  try {
    logline("seeding R=" + fmt17(R));
    const SeedResult seed = solve_seed(R, e, H, spec, n, bracket);
    logline("minimizing, seed a*=" + fmt17(seed.amplitude));
    auto [loop, report] = minimize_constrained(seed.loop, spec, H, solver);
    save_loop_csv(loop, (fs::path(out_dir) / "loop.csv").string());
    write_text(fs::path(out_dir) / "solve_report.json", solve_report_json(report).dump());
    const OrbitSegment seg = reconstruct_orbit(loop, spec, H);
    write_segment_csv(seg, (fs::path(out_dir) / "orbit.csv").string());
    write_text(fs::path(out_dir) / "orbit_meta.json", segment_meta_json(seg).dump());
    if (report.status == SolveStatus::CollisionAbort) {
      std::cerr << "collision abort\n";
      return 3;
    }
    if (report.status != SolveStatus::Converged || report.collision_floor_active) {
      std::cerr << "non-convergence: status=" << to_string(report.status)
                << " kkt=" << fmt17(report.kkt_residual)
                << " constraint=" << fmt17(report.constraint_residual) << "\n";
      return 4;
    }
    std::cout << solve_report_json(report).dump();
    return 0;
  } catch (const NoBracketError& ex) {
    std::cerr << "seed error: " << ex.what() << "\n";
    return 4;
  } catch (const std::exception& ex) {
    std::cerr << "solve error: " << ex.what() << "\n";
    return 4;
  }
}

int cmd_sweep(const std::string& config_path, Scalar R0, int doublings, Scalar H,
              const std::string& out_dir, SweepOptions options) {
  if (!(R0 > 0) || doublings < 3) {
    std::cerr << "bad arguments: need R0 > 0 and >= 3 doublings\n";
    return 2;
  }
  PotentialSpec spec;
  try {
    spec = load_potential_config(config_path);
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  }
  fs::create_directories(out_dir);
  std::vector<Scalar> schedule;
  for (int k = 0; k <= doublings; ++k) schedule.push_back(R0 * std::pow(2.0, k));
  const Vec e = axis_direction(spec.dimension);
  try {
    const SweepResult result = continuation_sweep(spec, H, e, schedule, options);
    write_text(fs::path(out_dir) / "sweep.json", sweep_json(result).dump());
    for (size_t i = 0; i < result.shifted_segments.size(); ++i) {
      const std::string name = "orbit_R" + fmt17(result.shifted_segments[i].endpoint_radius) +
                               ".csv";
      write_segment_csv(result.shifted_segments[i], (fs::path(out_dir) / name).string());
    }
    std::cout << sweep_json(result).dump();
    return result.hyperbolicity_pass ? 0 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "sweep error: " << ex.what() << "\n";
    return 2;
  }
}

int cmd_oracle_kepler(Scalar m, Scalar delta, Scalar L, Scalar H, const std::string& out_dir) {
  try {
    const KeplerHyperbola h = make_kepler(m, delta, L, H);
    std::cout << kepler_json(h).dump();
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      // sample the conic between the asymptotes
      std::ofstream os(fs::path(out_dir) / "kepler.csv");
      os << "zeta,r,x1,x2\n";
      const int K = 512;
      for (int k = -K; k <= K; ++k) {
        const Scalar zeta = 0.999 * h.zeta_inf * k / K;
        const Scalar r = kepler_radius(h, zeta);
        os << fmt17(zeta) << ',' << fmt17(r) << ',' << fmt17(r * std::cos(zeta)) << ','
           << fmt17(r * std::sin(zeta)) << "\n";
      }
    }
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "oracle error: " << ex.what() << "\n";
    return 2;
  }
}

int cmd_oracle_circle(Scalar alpha, Scalar H, const std::string& out_dir) {
  try {
    const CircularOracle c = circular_oracle(alpha, H);
    std::cout << circle_json(c, alpha, H).dump();
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      std::ofstream os(fs::path(out_dir) / "circle.csv");
      os << "t,x1,x2,v1,v2\n";
      const int K = 1024;
      const Scalar T = 2.0 * kPi / c.omega;
      for (int k = 0; k <= K; ++k) {
        const Scalar t = T * k / K;
        os << fmt17(t) << ',' << fmt17(c.radius * std::cos(c.omega * t)) << ','
           << fmt17(c.radius * std::sin(c.omega * t)) << ','
           << fmt17(-c.radius * c.omega * std::sin(c.omega * t)) << ','
           << fmt17(c.radius * c.omega * std::cos(c.omega * t)) << "\n";
      }
    }
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "oracle error: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational solver for fixed-energy orbits of repulsive homogeneous potentials"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  Scalar R = 16, H = 1, R0 = 4;
  int n = 512, samples = 256, doublings = 4, jobs = 1;
  Scalar alpha = 4, mass = 1, delta = 1, L = 1;
  SolverConfig solver;
  std::pair<Scalar, Scalar> bracket{1e-3, 1e3};
  Scalar alpha_override = 0;

  auto* check = app.add_subcommand("check-potential", "verify potential hypotheses");
  check->add_option("config", config_path)->required();
  check->add_option("--samples", samples, "sphere sample count");

  auto* solve = app.add_subcommand("solve", "seed, minimize and rescale at one R");
  solve->add_option("config", config_path)->required();
  solve->add_option("--R", R, "endpoint radius")->required();
  solve->add_option("--H", H, "total energy")->required();
  solve->add_option("--n", n, "half-interval segments");
  solve->add_option("--out", out_dir, "output directory");
  solve->add_option("--tol-kkt", solver.tol_kkt);
  solve->add_option("--tol-constraint", solver.tol_constraint);
  solve->add_option("--alpha-override", alpha_override, "override config alpha");
  solve->add_option("--seed-bracket", bracket, "amplitude bracket (lo hi)");

  auto* sweep = app.add_subcommand("sweep", "continuation sweep over R");
  sweep->add_option("config", config_path)->required();
  sweep->add_option("--R0", R0, "base radius")->required();
  sweep->add_option("--doublings", doublings, "number of doublings");
  sweep->add_option("--H", H, "total energy");
  sweep->add_option("--n", n, "half-interval segments");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--jobs", jobs, "parallel per-R jobs");
  sweep->add_option("--tol-kkt", solver.tol_kkt);
  sweep->add_option("--tol-constraint", solver.tol_constraint);

  auto* oracle = app.add_subcommand("oracle", "closed-form oracle values");
  auto* kepler = oracle->add_subcommand("kepler", "repulsive Kepler hyperbola");
  kepler->add_option("--m", mass);
  kepler->add_option("--delta", delta);
  kepler->add_option("--L", L);
  kepler->add_option("--H", H);
  kepler->add_option("--out", out_dir)->default_val("");
  auto* circle = oracle->add_subcommand("circle", "strong-force circular solution");
  circle->add_option("--alpha", alpha)->required();
  circle->add_option("--H", H);
  circle->add_option("--out", out_dir)->default_val("");
  oracle->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check_potential(config_path, samples);
    if (solve->parsed())
      return cmd_solve(config_path, R, H, n, out_dir, solver, bracket, alpha_override);
    if (sweep->parsed()) {
      SweepOptions options;
      options.n = n;
      options.jobs = jobs;
      options.solver = solver;
      return cmd_sweep(config_path, R0, doublings, H, out_dir, options);
    }
    if (kepler->parsed()) return cmd_oracle_kepler(mass, delta, L, H, out_dir);
    if (circle->parsed()) return cmd_oracle_circle(alpha, H, out_dir);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
