#include "toepmg/cycles.hpp"

#include <algorithm>
#include <cmath>

namespace toepmg {

namespace {

bool coarse_enough(const Shape& shape, int coarsest) {
  return std::all_of(shape.begin(), shape.end(), [coarsest](int n) { return n <= coarsest; });
}

double pivot_ratio(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, const Eigen::MatrixXd& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return lu.matrixLU().diagonal().cwiseAbs().minCoeff() / scale;
}

struct LevelSmoother {
  double pre = 0.0;
  double post = 0.0;
};

class CycleRunner {
 public:
  CycleRunner(const Hierarchy& h, const CycleConfig& cfg, std::vector<LevelSmoother> damping)
      : h_(h), cfg_(cfg), damping_(std::move(damping)) {}

  void run(std::size_t i, Vector& x, const Vector& b) const {
    const Level& lv = h_.level(i);
    if (i + 1 == h_.size()) {
      x = h_.coarse_solve(b);
      return;
    }
    const SparseMatrix& a = lv.a.matrix();
    smooth(i, x, b, true);
    const Vector residual = b - a * x;
    const Vector bc = lv.restriction * residual;
    Vector xc = Vector::Zero(bc.size());
    if (i + 2 == h_.size()) {
      xc = h_.coarse_solve(bc);
    } else {
      const int calls = cfg_.cycle == CycleType::w ? 2 : 1;
      for (int c = 0; c < calls; ++c) run(i + 1, xc, bc);
    }
    x += lv.prolongation * xc;
    smooth(i, x, b, false);
  }

 private:
  void smooth(std::size_t i, Vector& x, const Vector& b, bool pre) const {
    const SparseMatrix& a = h_.level(i).a.matrix();
    const SmootherSpec& s = cfg_.smoother;
    const int reps = pre ? cfg_.pre_steps : cfg_.post_steps;
    for (int r = 0; r < reps; ++r) {
      if (s.kind == SmootherKind::richardson) {
        richardson(a, x, b, pre ? damping_[i].pre : damping_[i].post, s.steps);
      } else {
        gauss_seidel(a, x, b, pre ? s.pre_sweep : s.post_sweep, s.steps);
      }
    }
  }

  const Hierarchy& h_;
  const CycleConfig& cfg_;
  std::vector<LevelSmoother> damping_;
};

LevelDiagnostics diagnose(const Level& lv, const SmootherSpec& s) {
  LevelDiagnostics d;
  d.size = static_cast<int>(lv.a.rows());
  d.bandwidth = lv.a.bandwidth();
  const auto& f = lv.tracked_symbol();
  if (f) {
    d.symbol = f->to_string();
    if (f->dim() == 1) {
      const auto zeros = find_zeros(*f);
      if (zeros.size() == 1) {
        d.zero_location = zeros.front()[0];
        d.zero_order = zero_order_at(*f, zeros.front());
      }
    }
  }
  if (s.damping_norm == DampingNorm::symbol && f) {
    d.damping_scale = symbol_sup_norm(*f);
    d.damping_source = "symbol";
  } else {
    d.damping_scale = lv.a.inf_norm();
    d.damping_source = "matrix";
  }
  if (s.kind == SmootherKind::richardson) {
    d.pre_damping = s.pre_factor / d.damping_scale;
    d.post_damping = s.post_factor / d.damping_scale;
  }
  return d;
}

}  // namespace

Hierarchy build_hierarchy(LevelMatrix a0, const TransferPlan& plan, const HierarchyOptions& opts) {
  if (!a0.square()) throw SizeError("hierarchy needs a square finest matrix");
  if (opts.coarsest_size < 1) throw std::invalid_argument("coarsest size must be positive");
  Hierarchy h;
  h.levels_.push_back(Level{std::move(a0), std::nullopt, {}, {}});
  while (!coarse_enough(h.levels_.back().a.shape(), opts.coarsest_size) &&
         (opts.max_levels == 0 || static_cast<int>(h.levels_.size()) < opts.max_levels)) {
    const std::size_t i = h.levels_.size() - 1;
    Level& lv = h.levels_.back();
    const TransferPair& tp = plan.at(i);
    GalerkinOptions g;
    g.transfer_structure = opts.transfer_structure;
    const Structure st = opts.transfer_structure.value_or(lv.a.structure() == Structure::circulant
                                                              ? Structure::circulant
                                                              : Structure::toeplitz);
    lv.transfer = tp;
    lv.restriction = restriction_matrix(tp.restriction, lv.a.shape(), st).matrix();
    lv.prolongation = prolongation_matrix(tp.prolongation, lv.a.shape(), st).matrix();
    LevelMatrix next = galerkin_product(lv.a, tp, g);
    h.levels_.push_back(Level{std::move(next), std::nullopt, {}, {}});
  }
  const Eigen::MatrixXd coarse = h.levels_.back().a.dense();
  h.lu_.compute(coarse);
  if (pivot_ratio(h.lu_, coarse) < 1e-14)
    throw SingularMatrix("coarse matrix at level " + std::to_string(h.levels_.size() - 1) +
                         " is numerically singular");
  return h;
}

void CycleConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (pre_steps < 0 || post_steps < 0) throw std::invalid_argument("smoothing counts must be nonnegative");
  smoother.validate();
}

SolveReport solve(const Hierarchy& h, const Vector& b, const CycleConfig& cfg) {
  cfg.validate();
  const SparseMatrix& a = h.finest().a.matrix();
  if (b.size() != a.rows()) throw SizeError("right-hand side length does not match the finest level");
  if (cfg.cycle == CycleType::tgm && h.size() > 2)
    throw std::invalid_argument("a two-grid cycle needs a two-level hierarchy");

  SolveReport report;
  std::vector<LevelSmoother> damping;
  for (const auto& lv : h.levels()) {
    report.levels.push_back(diagnose(lv, cfg.smoother));
    damping.push_back({report.levels.back().pre_damping, report.levels.back().post_damping});
  }

  Vector x = Vector::Zero(b.size());
  const double r0 = b.norm();
  report.residuals.push_back(r0);
  if (r0 == 0.0) {
    report.converged = true;
    report.solution = x;
    return report;
  }

  const CycleRunner runner(h, cfg, std::move(damping));
  for (int it = 1; it <= cfg.max_iter; ++it) {
    if (h.size() == 1) {
      x = h.coarse_solve(b);
    } else {
      runner.run(0, x, b);
    }
    const double r = (b - a * x).norm();
    report.residuals.push_back(r);
    report.iterations = it;
    if (!std::isfinite(r) || r > cfg.divergence_factor * r0) {
      report.diverged = true;
      report.diagnosis = "residual grew beyond " + std::to_string(cfg.divergence_factor) +
                         " times the initial residual at iteration " + std::to_string(it);
      break;
    }
    if (r / r0 < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  if (!report.converged && !report.diverged)
    report.diagnosis = "reached max_iter=" + std::to_string(cfg.max_iter);
  report.solution = std::move(x);
  return report;
}

Vector coarsest_solve(const SparseMatrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw SizeError("coarsest solve size mismatch");
  const Eigen::MatrixXd dense(a);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
  if (pivot_ratio(lu, dense) < 1e-14) throw SingularMatrix("coarsest matrix is numerically singular");
  return lu.solve(b);
}

}  // namespace toepmg
