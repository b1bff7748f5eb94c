#ifndef TOEPMG_CYCLES_HPP
#define TOEPMG_CYCLES_HPP

#include <Eigen/LU>

#include <optional>
#include <string>
#include <vector>

#include "toepmg/operators.hpp"
#include "toepmg/smoothers.hpp"

namespace toepmg {

struct SingularMatrix : Error {
  using Error::Error;
};

enum class CycleType { tgm, v, w };

struct HierarchyOptions {
  /// Coarsening stops once every dimension is at most this size.
  int coarsest_size = 7;
  /// Upper bound on the number of levels, 0 for none. A TGM uses 2.
  int max_levels = 0;
  /// Matrix family of T(r), T(p); defaults to the structure of the level matrix.
  std::optional<Structure> transfer_structure;
};

struct Level {
  LevelMatrix a;
  /// Transfer to the next level; empty at the coarsest level.
  std::optional<TransferPair> transfer;
  SparseMatrix restriction;
  SparseMatrix prolongation;

  const std::optional<Symbol>& tracked_symbol() const { return a.symbol(); }
};

/// The multigrid ladder. Immutable after build_hierarchy().
class Hierarchy {
 public:
  const std::vector<Level>& levels() const { return levels_; }
  const Level& level(std::size_t i) const { return levels_.at(i); }
  std::size_t size() const { return levels_.size(); }
  const Level& finest() const { return levels_.front(); }
  const Level& coarsest() const { return levels_.back(); }

  /// Direct solve with the coarsest matrix.
  Vector coarse_solve(const Vector& b) const { return lu_.solve(b); }

 private:
  friend Hierarchy build_hierarchy(LevelMatrix, const TransferPlan&, const HierarchyOptions&);

  std::vector<Level> levels_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Galerkin coarsening of `a0` until the coarsest size is reached. Symbols
/// are tracked through coarsen_symbol whenever `a0` carries one.
Hierarchy build_hierarchy(LevelMatrix a0, const TransferPlan& plan, const HierarchyOptions& opts = {});

struct CycleConfig {
  CycleType cycle = CycleType::v;
  int pre_steps = 1;
  int post_steps = 1;
  /// Relative residual threshold ||b - A x|| / ||b||.
  double tol = 1e-9;
  int max_iter = 2000;
  SmootherSpec smoother;
  /// Abort when the residual exceeds this multiple of the initial one.
  double divergence_factor = 1e6;

  void validate() const;
};

struct LevelDiagnostics {
  int size = 0;
  int bandwidth = 0;
  std::optional<std::string> symbol;
  std::optional<double> zero_location;
  std::optional<int> zero_order;
  double damping_scale = 0.0;
  /// "symbol" or "matrix".
  std::string damping_source;
  double pre_damping = 0.0;
  double post_damping = 0.0;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  std::string diagnosis;
  std::vector<double> residuals;
  std::vector<LevelDiagnostics> levels;
  Vector solution;
};

/// Iterates the configured cycle from a zero initial guess.
SolveReport solve(const Hierarchy& h, const Vector& b, const CycleConfig& cfg);

/// Dense LU solve; throws SingularMatrix on a vanishing pivot.
Vector coarsest_solve(const SparseMatrix& a, const Vector& b);

}  // namespace toepmg

#endif  // TOEPMG_CYCLES_HPP
