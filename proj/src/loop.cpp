#include "orbit/loop.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace orbit {

SymmetricLoop make_loop(int dimension, int n, Scalar R, const Vec& e, const Mat& interior) {
  if (dimension < 2) throw std::invalid_argument("dimension must be >= 2");
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 8");
  if (!(R > 0)) throw std::invalid_argument("endpoint radius must be positive");
  if (std::abs(e.norm() - 1.0) > 1e-12) throw std::invalid_argument("direction not unit");
  if (interior.rows() != dimension || interior.cols() != n - 1)
    throw std::invalid_argument("interior shape must be dimension x (n-1)");
  for (int j = 0; j < interior.cols(); ++j)
    if (interior.col(j).norm() <= 0.0) throw std::invalid_argument("collision node");

  SymmetricLoop loop;
  loop.dimension = dimension;
  loop.segments = n;
  loop.endpoint_radius = R;
  loop.direction = e;
  loop.half_nodes.resize(dimension, n + 1);
  loop.half_nodes.col(0) = R * e;
  loop.half_nodes.col(n) = -R * e;
  loop.half_nodes.block(0, 1, dimension, n - 1) = interior;
  return loop;
}

Mat full_trace(const SymmetricLoop& loop) {
  const int n = loop.segments;
  Mat trace(loop.dimension, 2 * n + 1);
  trace.leftCols(n + 1) = loop.half_nodes;
  for (int j = 0; j <= n; ++j) trace.col(n + j) = -loop.half_nodes.col(j);
  return trace;
}

Scalar dirichlet_energy(const SymmetricLoop& loop) {
  const int n = loop.segments;
  const Scalar dt = loop.dt();
  Scalar sum = 0.0;
  for (int j = 0; j < n; ++j)
    sum += (loop.half_nodes.col(j + 1) - loop.half_nodes.col(j)).squaredNorm();
  return 2.0 * sum / dt;  // both halves contribute equally
}

Scalar integral_of_potential(const SymmetricLoop& loop, const PotentialSpec& spec) {
  const int n = loop.segments;
  Scalar sum = 0.0;
  for (int j = 0; j < n; ++j) sum += eval_potential(spec, loop.half_nodes.col(j));
  return 2.0 * loop.dt() * sum;
}

Scalar min_interior_radius(const SymmetricLoop& loop) {
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  for (int j = 1; j < loop.segments; ++j)
    lo = std::min(lo, loop.half_nodes.col(j).norm());
  return lo;
}

Vec to_free_vector(const SymmetricLoop& loop) {
  const int n = loop.segments, N = loop.dimension;
  Vec z((n - 1) * N);
  for (int j = 1; j < n; ++j) z.segment((j - 1) * N, N) = loop.half_nodes.col(j);
  return z;
}

SymmetricLoop with_free_vector(const SymmetricLoop& loop, const Vec& z) {
  SymmetricLoop out = loop;
  const int n = loop.segments, N = loop.dimension;
  if (z.size() != (n - 1) * N) throw std::invalid_argument("free vector size mismatch");
  for (int j = 1; j < n; ++j) out.half_nodes.col(j) = z.segment((j - 1) * N, N);
  return out;
}

void save_loop_csv(const SymmetricLoop& loop, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "# R=" << fmt17(loop.endpoint_radius) << " e=";
  for (int i = 0; i < loop.dimension; ++i) {
    if (i) os << ',';
    os << fmt17(loop.direction(i));
  }
  os << " n=" << loop.segments << " N=" << loop.dimension << "\n";
  os << "t";
  for (int i = 1; i <= loop.dimension; ++i) os << ",x" << i;
  os << "\n";
  for (int j = 0; j <= loop.segments; ++j) {
    os << fmt17(j * loop.dt());
    for (int i = 0; i < loop.dimension; ++i) os << ',' << fmt17(loop.half_nodes(i, j));
    os << "\n";
  }
}

SymmetricLoop load_loop_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string header;
  std::getline(is, header);
  Scalar R = 0;
  int n = 0, N = 0;
  std::string evals;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("R=", 0) == 0) R = std::stod(tok.substr(2));
      else if (tok.rfind("e=", 0) == 0) evals = tok.substr(2);
      else if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
      else if (tok.rfind("N=", 0) == 0) N = std::stoi(tok.substr(2));
    }
  }
  if (n == 0 || N == 0 || evals.empty()) throw std::runtime_error("malformed loop CSV header");
  Vec e(N);
  {
    std::istringstream es(evals);
    std::string part;
    for (int i = 0; i < N; ++i) {
      std::getline(es, part, ',');
      e(i) = std::stod(part);
    }
  }
  std::string line;
  std::getline(is, line);  // column header
  Mat nodes(N, n + 1);
  for (int j = 0; j <= n; ++j) {
    if (!std::getline(is, line)) throw std::runtime_error("truncated loop CSV");
    std::istringstream ls(line);
    std::string part;
    std::getline(ls, part, ',');  // t
    for (int i = 0; i < N; ++i) {
      std::getline(ls, part, ',');
      nodes(i, j) = std::stod(part);
    }
  }
  return make_loop(N, n, R, e, nodes.block(0, 1, N, n - 1));
}

}  // namespace orbit
