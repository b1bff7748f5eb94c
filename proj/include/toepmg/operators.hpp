#ifndef TOEPMG_OPERATORS_HPP
#define TOEPMG_OPERATORS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <ostream>
#include <vector>

#include "toepmg/symbol.hpp"

namespace toepmg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Shape = std::vector<int>;

struct SizeError : Error {
  using Error::Error;
};
struct NotPositiveDefinite : Error {
  using Error::Error;
};

enum class Structure { general, toeplitz, circulant };

/// Rank-one diagnostic term column * row^T.
struct LowRankTerm {
  Vector column;
  Vector row;
};

/// A linear operator at one grid level.
///
/// Arithmetic always goes through the explicit sparse matrix. The generating
/// symbol and the low-rank descriptors are annotations for diagnostics.
class LevelMatrix {
 public:
  LevelMatrix() = default;
  LevelMatrix(Shape row_shape, Shape col_shape, SparseMatrix m);
  LevelMatrix(Shape shape, SparseMatrix m) : LevelMatrix(shape, shape, std::move(m)) {}

  const Shape& row_shape() const { return row_shape_; }
  const Shape& col_shape() const { return col_shape_; }
  const Shape& shape() const { return col_shape_; }
  Eigen::Index rows() const { return matrix_.rows(); }
  Eigen::Index cols() const { return matrix_.cols(); }
  bool square() const { return rows() == cols(); }

  const SparseMatrix& matrix() const { return matrix_; }
  Vector operator*(const Vector& x) const { return matrix_ * x; }

  Structure structure() const { return structure_; }
  const std::optional<Symbol>& symbol() const { return symbol_; }
  LevelMatrix& annotate(Structure s, std::optional<Symbol> f);

  const std::vector<LowRankTerm>& low_rank() const { return low_rank_; }
  LevelMatrix& add_low_rank(LowRankTerm term);

  bool symmetric(double tol = 1e-13) const;
  /// Max absolute row sum.
  double inf_norm() const;
  /// Number of nonzero diagonals touched by the stored entries.
  int bandwidth() const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }

  /// Writes "row col value" lines (0-based) for every stored entry.
  void write_coordinates(std::ostream& os) const;

 private:
  Shape row_shape_;
  Shape col_shape_;
  SparseMatrix matrix_;
  Structure structure_ = Structure::general;
  std::optional<Symbol> symbol_;
  std::vector<LowRankTerm> low_rank_;
};

std::size_t total_size(const Shape& shape);
/// Coarse size rule n -> (n - n mod 2) / 2 per dimension.
Shape coarse_shape(const Shape& fine);

LevelMatrix toeplitz_from_symbol(const Symbol& f, const Shape& n);
LevelMatrix toeplitz_from_symbol(const Symbol& f, int n);
LevelMatrix circulant_from_symbol(const Symbol& f, const Shape& n);
LevelMatrix circulant_from_symbol(const Symbol& f, int n);
LevelMatrix from_symbol(const Symbol& f, const Shape& n, Structure s);

/// Eigenvalues of a 1-D circulant by direct DFT of its first column,
/// in frequency order j = 0..n-1.
std::vector<Complex> circulant_eigenvalues(const LevelMatrix& c);

/// Adds the rank-one correction that lifts the single vanishing grid eigenvalue
/// of a circulant with symbol f to the smallest nonzero symbol sample.
LevelMatrix stabilize(const LevelMatrix& a);

/// Down-sampling (cutting) matrix K_n: [K]_{j,k} = 1 iff j = 2k - (n+1) mod 2
/// (1-based), tensorized across dimensions.
LevelMatrix downsample_matrix(const Shape& n);
LevelMatrix downsample_matrix(int n);

/// P = T(p) K^T (or C(p) K^T) and R = K T(r).
LevelMatrix prolongation_matrix(const Symbol& p, const Shape& n_fine, Structure s = Structure::toeplitz);
LevelMatrix restriction_matrix(const Symbol& r, const Shape& n_fine, Structure s = Structure::toeplitz);

/// Matrix-free T(p) K^T x; Toeplitz boundary truncation (zero padding).
Vector apply_prolongation(const Symbol& p, const Shape& n_fine, const Vector& x_coarse);
Vector apply_prolongation(const Symbol& p, int n_fine, const Vector& x_coarse);
/// Matrix-free K T(r) x.
Vector apply_restriction(const Symbol& r, const Shape& n_fine, const Vector& x_fine);
Vector apply_restriction(const Symbol& r, int n_fine, const Vector& x_fine);

/// Restriction and prolongation symbols used between one level and the next.
struct TransferPair {
  Symbol restriction;
  Symbol prolongation;

  TransferPair(Symbol r, Symbol p) : restriction(std::move(r)), prolongation(std::move(p)) {}
  /// r p real and nonnegative on a sample grid.
  bool positive_product(int samples = 1024) const;
};

/// Per-level transfer selection: `finest` between levels 0 and 1, `coarser`
/// (when set) below that.
struct TransferPlan {
  TransferPair finest;
  std::optional<TransferPair> coarser;

  explicit TransferPlan(TransferPair all) : finest(std::move(all)) {}
  TransferPlan(TransferPair f, TransferPair c) : finest(std::move(f)), coarser(std::move(c)) {}
  const TransferPair& at(std::size_t level) const { return level == 0 || !coarser ? finest : *coarser; }
};

struct GalerkinOptions {
  /// Matrix family used for T(r), T(p); defaults to the structure of A.
  std::optional<Structure> transfer_structure;
  bool check_positive_definite = false;
};

/// K T(r) A T(p) K^T, annotated with coarsen_symbol when A carries a symbol.
LevelMatrix galerkin_product(const LevelMatrix& a, const TransferPair& tp, const GalerkinOptions& opts = {});

/// Lanczos estimate of the smallest eigenvalue of (A + A^T)/2.
double smallest_eigenvalue_estimate(const SparseMatrix& a, int steps = 200);

}  // namespace toepmg

#endif  // TOEPMG_OPERATORS_HPP
