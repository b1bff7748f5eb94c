#ifndef TOEPMG_SMOOTHERS_HPP
#define TOEPMG_SMOOTHERS_HPP

#include "toepmg/operators.hpp"

namespace toepmg {

enum class SmootherKind { richardson, gauss_seidel };
/// `symmetric` is a forward sweep followed by a backward one.
enum class Sweep { forward, backward, symmetric };

/// Where the Richardson damping scale ||f_i||_inf comes from.
enum class DampingNorm {
  /// Max absolute row sum of the level matrix.
  matrix,
  /// Sup of the tracked level symbol; falls back to `matrix` when no symbol
  /// is tracked.
  symbol,
};

struct SmootherSpec {
  SmootherKind kind = SmootherKind::richardson;
  /// Richardson damping is factor / ||f_i||_inf.
  double pre_factor = 1.5;
  double post_factor = 1.0;
  DampingNorm damping_norm = DampingNorm::matrix;
  Sweep pre_sweep = Sweep::forward;
  Sweep post_sweep = Sweep::forward;
  int steps = 1;

  void validate() const;
};

/// x <- x + omega (b - A x), `steps` times.
void richardson(const SparseMatrix& a, Vector& x, const Vector& b, double omega, int steps = 1);

/// Triangular Gauss-Seidel sweeps; a forward sweep solves (D + L) x' = b - U x.
/// Throws Error on a zero diagonal entry.
void gauss_seidel(const SparseMatrix& a, Vector& x, const Vector& b, Sweep sweep = Sweep::forward, int steps = 1);

/// max |f| over a uniform 4096-point-per-dimension grid, refined locally
/// around the best sample (d = 1).
double symbol_sup_norm(const Symbol& f);

}  // namespace toepmg

#endif  // TOEPMG_SMOOTHERS_HPP
