#ifndef TOEPMG_EXPERIMENTS_HPP
#define TOEPMG_EXPERIMENTS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "toepmg/analysis.hpp"
#include "toepmg/cycles.hpp"

namespace toepmg {

/// A linear system with a manufactured solution x_j = j / n.
struct Experiment {
  LevelMatrix a;
  Vector rhs;
  Vector exact;
  std::vector<std::string> warnings;
};

Vector manufactured_solution(int n);

/// Integral equation with shift-invariant kernel: A = T_n(z).
Experiment assemble_integral(const Symbol& z, int n);

/// Boundary closure of the second-difference operator in d^2/dx^2 (a u'').
enum class Pde4Boundary {
  /// n x n Dirichlet second difference D2; A = D2^T diag(a) D2.
  interior,
  /// (n+2) x n second difference including the two boundary nodes; with
  /// a = 1 this gives exactly T_n((2 - 2cos x)^2).
  extended,
};

struct Pde4Options {
  Pde4Boundary boundary = Pde4Boundary::extended;
};

/// Fourth-order problem (a(x) u'')'' = g on (0,1), u(0) = u(1) = 0, grid
/// x_j = j / (n + 1); the h^{-4} factor is dropped.
Experiment assemble_pde4(const std::function<double(double)>& a, int n, const Pde4Options& opts = {});

/// Named problem + transfer family used by the table runners.
enum class TableId { table2, table3, table4 };

struct TransferOrders {
  int dr = 2;
  int dp = 2;
};

/// Integral-problem transfer plan: (2-2cos)^{d/2} on the finest level,
/// (2+2cos)^{d/2} below.
TransferPlan integral_transfer_plan(TransferOrders orders);

struct NamedPair {
  std::string restriction;
  std::string prolongation;
};

/// Symbols by name: "phi2", "phi4", "gc", "pow(+,s)", "pow(-,s)",
/// "laplace_power(q)", "mu(q)", "(2+2cos)^s", "(2-2cos)^s", "2+2cos",
/// "2-2cos", or a numeric constant.
Symbol named_symbol(const std::string& name);

struct CellResult {
  int n = 0;
  std::string config;
  int iterations = 0;
  bool converged = false;
  std::optional<int> reference;
  /// true when the reference count is "> max_iter".
  bool reference_exceeds = false;
};

struct ColumnResult {
  std::string config;
  ConditionVerdict verdict;
  std::vector<CellResult> cells;
};

struct TableResult {
  TableId id{};
  std::string title;
  std::string cycle;
  std::vector<int> sizes;
  std::vector<ColumnResult> columns;
};

struct TableOptions {
  int max_iter = 2000;
  double tol = 1e-9;
  std::optional<std::vector<int>> sizes;
  Pde4Options pde4;
  /// Fourth-order problem smoother; one forward Gauss-Seidel sweep before and after the
  /// coarse correction by default.
  SmootherSpec pde4_smoother{SmootherKind::gauss_seidel};
};

TableResult run_table2(const TableOptions& opts = {});
TableResult run_table3(const TableOptions& opts = {});
/// `coefficient` is "exp" for a(x) = e^x or "quad" for a(x) = (x - 0.5)^2.
TableResult run_table4(const std::string& coefficient, const TableOptions& opts = {});

/// Integral problem: Richardson smoothing, TGM uses two levels, W-cycle stops at size 15.
SolveReport solve_integral(const Symbol& z, int n, TransferOrders orders, CycleType cycle, const TableOptions& opts = {});
/// Fourth-order problem: V-cycle with Gauss-Seidel, coarsest size 7.
SolveReport solve_pde4(const std::string& coefficient, int n, const NamedPair& pair, const TableOptions& opts = {});

std::string cell_text(const CellResult& c, int max_iter = 2000);

}  // namespace toepmg

#endif  // TOEPMG_EXPERIMENTS_HPP
