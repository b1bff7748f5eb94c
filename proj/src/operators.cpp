#include "toepmg/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace toepmg {

namespace {

using Triplet = Eigen::Triplet<double>;

// Row-major flattening with dimension 0 slowest, matching the Kronecker
// ordering J^{[j1]} (x) ... (x) J^{[jd]}.
std::size_t flatten(const Shape& shape, const std::vector<int>& idx) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) flat = flat * static_cast<std::size_t>(shape[k]) + idx[k];
  return flat;
}

std::vector<int> unflatten(const Shape& shape, std::size_t flat) {
  std::vector<int> idx(shape.size());
  for (std::size_t k = shape.size(); k-- > 0;) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(shape[k]));
    flat /= static_cast<std::size_t>(shape[k]);
  }
  return idx;
}

void require_shape(const Symbol& f, const Shape& n) {
  if (static_cast<int>(n.size()) != f.dim())
    throw DimensionMismatch("grid shape has " + std::to_string(n.size()) + " dimensions, symbol has " +
                            std::to_string(f.dim()));
  for (int v : n)
    if (v < 1) throw SizeError("grid sizes must be positive");
}

double real_coefficient(const Complex& a) {
  if (std::abs(a.imag()) > 1e-14 * std::max(1.0, std::abs(a)))
    throw Error("matrix construction needs real symbol coefficients");
  return a.real();
}

SparseMatrix build_toeplitz(const Symbol& f, const Shape& n) {
  const std::size_t total = total_size(n);
  std::vector<Triplet> trips;
  trips.reserve(total * f.coefficients().size());
  for (std::size_t row = 0; row < total; ++row) {
    const auto s = unflatten(n, row);
    for (const auto& [j, a] : f.coefficients()) {
      std::vector<int> t(s.size());
      bool inside = true;
      for (std::size_t k = 0; k < s.size(); ++k) {
        t[k] = s[k] - j[k];
        inside = inside && t[k] >= 0 && t[k] < n[k];
      }
      if (inside) trips.emplace_back(static_cast<int>(row), static_cast<int>(flatten(n, t)), real_coefficient(a));
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseMatrix build_circulant(const Symbol& f, const Shape& n) {
  const std::size_t total = total_size(n);
  std::vector<Triplet> trips;
  trips.reserve(total * f.coefficients().size());
  for (std::size_t row = 0; row < total; ++row) {
    const auto s = unflatten(n, row);
    for (const auto& [j, a] : f.coefficients()) {
      std::vector<int> t(s.size());
      for (std::size_t k = 0; k < s.size(); ++k) {
        t[k] = (s[k] - j[k]) % n[k];
        if (t[k] < 0) t[k] += n[k];
      }
      trips.emplace_back(static_cast<int>(row), static_cast<int>(flatten(n, t)), real_coefficient(a));
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  m.setFromTriplets(trips.begin(), trips.end());  // duplicates (aliases) are summed
  return m;
}

// Fine-grid position selected by row k of the 1-D cutting matrix (0-based).
int cut_position(int n, int k) { return 2 * (k + 1) - (n + 1) % 2 - 1; }

void prune_relative(SparseMatrix& m) {
  double scale = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  const double cut = 1e-15 * scale;
  m.prune([cut](Eigen::Index, Eigen::Index, double v) { return std::abs(v) > cut; });
}

}  // namespace

LevelMatrix::LevelMatrix(Shape row_shape, Shape col_shape, SparseMatrix m)
    : row_shape_(std::move(row_shape)), col_shape_(std::move(col_shape)), matrix_(std::move(m)) {
  if (static_cast<std::size_t>(matrix_.rows()) != total_size(row_shape_) ||
      static_cast<std::size_t>(matrix_.cols()) != total_size(col_shape_))
    throw SizeError("matrix dimensions do not match the grid shapes");
  matrix_.makeCompressed();
}

LevelMatrix& LevelMatrix::annotate(Structure s, std::optional<Symbol> f) {
  structure_ = s;
  symbol_ = std::move(f);
  return *this;
}

LevelMatrix& LevelMatrix::add_low_rank(LowRankTerm term) {
  low_rank_.push_back(std::move(term));
  return *this;
}

bool LevelMatrix::symmetric(double tol) const {
  if (!square()) return false;
  SparseMatrix diff = matrix_ - SparseMatrix(matrix_.transpose());
  double scale = 1.0;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
      if (std::abs(it.value()) > tol * scale) return false;
  return true;
}

double LevelMatrix::inf_norm() const {
  double best = 0.0;
  for (int k = 0; k < matrix_.outerSize(); ++k) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

int LevelMatrix::bandwidth() const {
  Eigen::Index reach = -1;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it)
      if (it.value() != 0.0) reach = std::max(reach, std::abs(it.row() - it.col()));
  return reach < 0 ? 0 : static_cast<int>(2 * reach + 1);
}

void LevelMatrix::write_coordinates(std::ostream& os) const {
  const auto old = os.precision(17);
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  os.precision(old);
}

std::size_t total_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t acc, int v) { return acc * static_cast<std::size_t>(std::max(v, 0)); });
}

Shape coarse_shape(const Shape& fine) {
  Shape out;
  for (int n : fine) out.push_back((n - n % 2) / 2);
  return out;
}

LevelMatrix toeplitz_from_symbol(const Symbol& f, const Shape& n) {
  require_shape(f, n);
  const auto radius = f.support_radius();
  for (std::size_t k = 0; k < n.size(); ++k)
    if (n[k] < radius[k] + 1)
      throw SizeError("Toeplitz size " + std::to_string(n[k]) + " cannot hold a stencil of radius " +
                      std::to_string(radius[k]));
  LevelMatrix out(n, build_toeplitz(f, n));
  out.annotate(Structure::toeplitz, f);
  return out;
}

LevelMatrix toeplitz_from_symbol(const Symbol& f, int n) { return toeplitz_from_symbol(f, Shape{n}); }

LevelMatrix circulant_from_symbol(const Symbol& f, const Shape& n) {
  require_shape(f, n);
  LevelMatrix out(n, build_circulant(f, n));
  out.annotate(Structure::circulant, f);
  return out;
}

LevelMatrix circulant_from_symbol(const Symbol& f, int n) { return circulant_from_symbol(f, Shape{n}); }

LevelMatrix from_symbol(const Symbol& f, const Shape& n, Structure s) {
  switch (s) {
    case Structure::circulant:
      return circulant_from_symbol(f, n);
    case Structure::toeplitz:
      return toeplitz_from_symbol(f, n);
    case Structure::general:
      break;
  }
  throw Error("no matrix family for a general structure");
}

std::vector<Complex> circulant_eigenvalues(const LevelMatrix& c) {
  if (c.shape().size() != 1 || !c.square()) throw UnsupportedAnalysis("circulant eigenvalues need a 1-D square matrix");
  const Eigen::Index n = c.rows();
  const Eigen::MatrixXd d = c.dense();
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex sum{};
    for (Eigen::Index m = 0; m < n; ++m) {
      const double phase = -2.0 * pi * static_cast<double>(j * m) / static_cast<double>(n);
      sum += d(m, 0) * Complex(std::cos(phase), std::sin(phase));
    }
    out[static_cast<std::size_t>(j)] = sum;
  }
  return out;
}

LevelMatrix stabilize(const LevelMatrix& a) {
  if (a.structure() != Structure::circulant || !a.symbol())
    throw UnsupportedAnalysis("stabilization needs a circulant annotated with its symbol");
  const Symbol& f = *a.symbol();
  const Shape& n = a.shape();
  const std::size_t total = total_size(n);

  std::vector<std::size_t> vanishing;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto idx = unflatten(n, flat);
    Point y(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) y[k] = 2.0 * pi * idx[k] / n[k];
    if (vanishes_at(f, y)) {
      vanishing.push_back(flat);
    } else {
      smallest = std::min(smallest, std::abs(f(y)));
    }
  }
  if (vanishing.empty()) return a;
  if (vanishing.size() > 1) throw UnsupportedAnalysis("symbol vanishes at more than one grid frequency");

  // The null eigenvector is real only for per-dimension frequencies 0 or pi.
  const auto freq = unflatten(n, vanishing.front());
  for (std::size_t k = 0; k < n.size(); ++k)
    if (freq[k] != 0 && 2 * freq[k] != n[k]) throw UnsupportedAnalysis("null eigenvector is not real");
  Vector v(static_cast<Eigen::Index>(total));
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto idx = unflatten(n, flat);
    int parity = 0;
    for (std::size_t k = 0; k < n.size(); ++k) parity += freq[k] != 0 ? idx[k] : 0;
    v[static_cast<Eigen::Index>(flat)] = parity % 2 == 0 ? 1.0 : -1.0;
  }
  const double weight = smallest / static_cast<double>(total);
  Eigen::MatrixXd dense = a.dense() + weight * v * v.transpose();
  LevelMatrix out(n, dense.sparseView());
  out.annotate(Structure::circulant, f);
  out.add_low_rank({weight * v, v});
  return out;
}

LevelMatrix downsample_matrix(const Shape& n) {
  for (int v : n)
    if (v < 2) throw SizeError("down-sampling needs at least two points per dimension");
  const Shape coarse = coarse_shape(n);
  const std::size_t rows = total_size(coarse);
  std::vector<Triplet> trips;
  trips.reserve(rows);
  for (std::size_t row = 0; row < rows; ++row) {
    auto k = unflatten(coarse, row);
    for (std::size_t d = 0; d < n.size(); ++d) k[d] = cut_position(n[d], k[d]);
    trips.emplace_back(static_cast<int>(row), static_cast<int>(flatten(n, k)), 1.0);
  }
  SparseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(total_size(n)));
  m.setFromTriplets(trips.begin(), trips.end());
  return LevelMatrix(coarse, n, std::move(m));
}

LevelMatrix downsample_matrix(int n) { return downsample_matrix(Shape{n}); }

LevelMatrix prolongation_matrix(const Symbol& p, const Shape& n_fine, Structure s) {
  require_shape(p, n_fine);
  const SparseMatrix t = s == Structure::circulant ? build_circulant(p, n_fine) : build_toeplitz(p, n_fine);
  const LevelMatrix k = downsample_matrix(n_fine);
  SparseMatrix prod = t * SparseMatrix(k.matrix().transpose());
  return LevelMatrix(n_fine, k.row_shape(), std::move(prod));
}

LevelMatrix restriction_matrix(const Symbol& r, const Shape& n_fine, Structure s) {
  require_shape(r, n_fine);
  const SparseMatrix t = s == Structure::circulant ? build_circulant(r, n_fine) : build_toeplitz(r, n_fine);
  const LevelMatrix k = downsample_matrix(n_fine);
  SparseMatrix prod = k.matrix() * t;
  return LevelMatrix(k.row_shape(), n_fine, std::move(prod));
}

Vector apply_prolongation(const Symbol& p, const Shape& n_fine, const Vector& x_coarse) {
  require_shape(p, n_fine);
  const Shape coarse = coarse_shape(n_fine);
  if (static_cast<std::size_t>(x_coarse.size()) != total_size(coarse))
    throw SizeError("coarse vector length does not match the fine grid");
  Vector y = Vector::Zero(static_cast<Eigen::Index>(total_size(n_fine)));
  for (std::size_t kc = 0; kc < total_size(coarse); ++kc) {
    const double xk = x_coarse[static_cast<Eigen::Index>(kc)];
    if (xk == 0.0) continue;
    auto t = unflatten(coarse, kc);
    for (std::size_t d = 0; d < n_fine.size(); ++d) t[d] = cut_position(n_fine[d], t[d]);
    for (const auto& [j, a] : p.coefficients()) {
      std::vector<int> s(t.size());
      bool inside = true;
      for (std::size_t d = 0; d < t.size(); ++d) {
        s[d] = t[d] + j[d];
        inside = inside && s[d] >= 0 && s[d] < n_fine[d];
      }
      if (inside) y[static_cast<Eigen::Index>(flatten(n_fine, s))] += real_coefficient(a) * xk;
    }
  }
  return y;
}

Vector apply_prolongation(const Symbol& p, int n_fine, const Vector& x_coarse) {
  return apply_prolongation(p, Shape{n_fine}, x_coarse);
}

Vector apply_restriction(const Symbol& r, const Shape& n_fine, const Vector& x_fine) {
  require_shape(r, n_fine);
  if (static_cast<std::size_t>(x_fine.size()) != total_size(n_fine))
    throw SizeError("fine vector length does not match the fine grid");
  const Shape coarse = coarse_shape(n_fine);
  Vector y = Vector::Zero(static_cast<Eigen::Index>(total_size(coarse)));
  for (std::size_t kc = 0; kc < total_size(coarse); ++kc) {
    auto s = unflatten(coarse, kc);
    for (std::size_t d = 0; d < n_fine.size(); ++d) s[d] = cut_position(n_fine[d], s[d]);
    double acc = 0.0;
    for (const auto& [j, a] : r.coefficients()) {
      std::vector<int> t(s.size());
      bool inside = true;
      for (std::size_t d = 0; d < s.size(); ++d) {
        t[d] = s[d] - j[d];
        inside = inside && t[d] >= 0 && t[d] < n_fine[d];
      }
      if (inside) acc += real_coefficient(a) * x_fine[static_cast<Eigen::Index>(flatten(n_fine, t))];
    }
    y[static_cast<Eigen::Index>(kc)] = acc;
  }
  return y;
}

Vector apply_restriction(const Symbol& r, int n_fine, const Vector& x_fine) {
  return apply_restriction(r, Shape{n_fine}, x_fine);
}

bool TransferPair::positive_product(int samples) const {
  if (restriction.dim() != 1) throw UnsupportedAnalysis("positivity sampling is implemented for d = 1");
  const Symbol rp = restriction * prolongation;
  const double tol = 1e-12 * std::max(1.0, rp.norm1());
  for (int i = 0; i < samples; ++i) {
    const Complex v = rp(-pi + 2.0 * pi * i / samples);
    if (std::abs(v.imag()) > tol || v.real() < -tol) return false;
  }
  return true;
}

LevelMatrix galerkin_product(const LevelMatrix& a, const TransferPair& tp, const GalerkinOptions& opts) {
  if (!a.square()) throw SizeError("Galerkin product needs a square matrix");
  const Structure st = opts.transfer_structure.value_or(a.structure() == Structure::circulant ? Structure::circulant
                                                                                              : Structure::toeplitz);
  const LevelMatrix r = restriction_matrix(tp.restriction, a.shape(), st);
  const LevelMatrix p = prolongation_matrix(tp.prolongation, a.shape(), st);
  SparseMatrix ap = a.matrix() * p.matrix();
  SparseMatrix coarse = r.matrix() * ap;
  prune_relative(coarse);
  LevelMatrix out(r.row_shape(), r.row_shape(), std::move(coarse));

  std::optional<Symbol> f;
  if (a.symbol()) f = coarsen_symbol(*a.symbol(), tp.restriction, tp.prolongation);
  const bool circulant = st == Structure::circulant && a.structure() == Structure::circulant;
  out.annotate(circulant ? Structure::circulant : (f ? Structure::toeplitz : Structure::general), std::move(f));

  if (opts.check_positive_definite) {
    const double lambda = smallest_eigenvalue_estimate(out.matrix());
    if (lambda < -1e-10 * out.inf_norm())
      throw NotPositiveDefinite("coarse matrix lost positive definiteness (smallest eigenvalue estimate " +
                                std::to_string(lambda) + ")");
  }
  return out;
}

double smallest_eigenvalue_estimate(const SparseMatrix& a, int steps) {
  const Eigen::Index n = a.rows();
  if (n == 0) throw SizeError("empty matrix");
  const SparseMatrix sym = 0.5 * (a + SparseMatrix(a.transpose()));
  const int m = static_cast<int>(std::min<Eigen::Index>(steps, n));

  Eigen::MatrixXd basis(n, m);
  Vector alpha(m), beta(m);
  Vector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  q.normalize();
  int used = 0;
  for (int k = 0; k < m; ++k) {
    basis.col(k) = q;
    Vector w = sym * q;
    alpha[k] = q.dot(w);
    // full reorthogonalization keeps the Ritz values clean at these sizes
    w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    used = k + 1;
    beta[k] = w.norm();
    if (beta[k] < 1e-14 * std::max(1.0, std::abs(alpha[k]))) break;
    q = w / beta[k];
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
  for (int k = 0; k < used; ++k) {
    t(k, k) = alpha[k];
    if (k + 1 < used) t(k, k + 1) = t(k + 1, k) = beta[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace toepmg
