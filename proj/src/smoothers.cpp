#include "toepmg/smoothers.hpp"

#include <cmath>

namespace toepmg {

void SmootherSpec::validate() const {
  if (steps < 1) throw std::invalid_argument("smoother steps must be at least 1");
  if (kind == SmootherKind::richardson && (pre_factor <= 0.0 || post_factor <= 0.0))
    throw std::invalid_argument("Richardson damping must be positive");
}

void richardson(const SparseMatrix& a, Vector& x, const Vector& b, double omega, int steps) {
  if (omega <= 0.0) throw std::invalid_argument("Richardson damping must be positive");
  for (int s = 0; s < steps; ++s) x += omega * (b - a * x);
}

void gauss_seidel(const SparseMatrix& a, Vector& x, const Vector& b, Sweep sweep, int steps) {
  const Eigen::Index n = a.rows();
  Vector diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag[i] = a.coeff(i, i);
    if (diag[i] == 0.0) throw Error("Gauss-Seidel needs a nonzero diagonal (row " + std::to_string(i) + ")");
  }
  auto relax_row = [&](Eigen::Index i) {
    double sum = b[i];
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      if (it.col() != i) sum -= it.value() * x[it.col()];
    x[i] = sum / diag[i];
  };
  for (int s = 0; s < steps; ++s) {
    if (sweep != Sweep::backward)
      for (Eigen::Index i = 0; i < n; ++i) relax_row(i);
    if (sweep != Sweep::forward)
      for (Eigen::Index i = n; i-- > 0;) relax_row(i);
  }
}

double symbol_sup_norm(const Symbol& f) {
  constexpr int samples = 4096;
  if (f.dim() == 1) {
    const double step = 2.0 * pi / samples;
    double best = -1.0, best_x = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double x = -pi + i * step;
      const double v = std::abs(f(x));
      if (v > best) best = v, best_x = x;
    }
    // golden-section refinement on the bracketing cells
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_x - step, hi = best_x + step;
    for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
      const double c = hi - ratio * (hi - lo), d = lo + ratio * (hi - lo);
      if (std::abs(f(c)) > std::abs(f(d))) {
        hi = d;
      } else {
        lo = c;
      }
    }
    return std::max(best, std::abs(f(0.5 * (lo + hi))));
  }
  if (f.separable()) {
    double prod = 1.0;
    for (const auto& g : f.factors()) prod *= symbol_sup_norm(g);
    return prod;
  }
  // general multivariate: plain grid maximum over a coarser tensor grid
  const int per_dim = f.dim() == 2 ? 512 : 64;
  const std::size_t d = static_cast<std::size_t>(f.dim());
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= static_cast<std::size_t>(per_dim);
  double best = 0.0;
  Point x(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = 0; k < d; ++k, rest /= per_dim) x[k] = -pi + 2.0 * pi * static_cast<double>(rest % per_dim) / per_dim;
    best = std::max(best, std::abs(f(x)));
  }
  return best;
}

}  // namespace toepmg
