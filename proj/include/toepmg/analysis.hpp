#ifndef TOEPMG_ANALYSIS_HPP
#define TOEPMG_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "toepmg/symbol.hpp"

namespace toepmg {

/// Which optimality condition a verdict certifies.
///   order_eq6   gamma_r + gamma_p >= m (HF orders vs. PDE order)
///   tgm_eq8     TGM with r = alpha p: |p(y)^2 / f(x)| bounded, sum p(y)^2 > 0
///   tgm_eq9     TGM with r != alpha p: |r(y)p(y) / f(x)| bounded, sum r(y)p(y) != 0
///   vcycle_eq10 V-cycle: |p(y) / f(x)| bounded, sum p(y)^2 > 0
enum class ConditionId { order_eq6, tgm_eq8, tgm_eq9, vcycle_eq10 };

std::string to_string(ConditionId id);

/// One mirror-point inequality: `lhs >= rhs`.
struct MirrorEntry {
  Point y;
  int order_r = 0;
  int order_p = 0;
  int order_f = 0;
  int lhs = 0;
  int rhs = 0;
  bool holds() const { return lhs >= rhs; }
  bool strict() const { return lhs > rhs; }
};

struct ConditionVerdict {
  ConditionId id = ConditionId::order_eq6;
  bool satisfied = false;
  /// Every order inequality holds strictly (the c = 0 case).
  bool strict = false;
  /// Nondegeneracy part (the sum over mirror points); true for order_eq6.
  bool nondegenerate = true;
  std::optional<Point> zero;
  std::vector<MirrorEntry> details;
  std::string note;
};

ConditionVerdict check_order_condition(int gamma_r, int gamma_p, int m);

/// TGM optimality conditions at the unique zero of f. Uses the r = alpha p
/// form when the two symbols are proportional.
ConditionVerdict check_tgm(const Symbol& f, const Symbol& r, const Symbol& p);

/// V-cycle condition ord(p, y) >= ord(f, x0). When r is not proportional to p
/// the orders are combined as ord(r, y) + ord(p, y) >= 2 ord(f, x0).
ConditionVerdict check_vcycle(const Symbol& f, const Symbol& r, const Symbol& p);
ConditionVerdict check_vcycle(const Symbol& f, const Symbol& p);

struct EquivalenceAudit {
  ConditionVerdict order;
  ConditionVerdict tgm;
  bool agree = false;
};

/// Compares the HF-order condition with the zero-order TGM condition for a
/// constant-coefficient symbol with its unique zero at the origin.
EquivalenceAudit equivalence_audit(const Symbol& f, const Symbol& r, const Symbol& p);

/// r = alpha p for some alpha != 0.
bool proportional(const Symbol& r, const Symbol& p, double tol = 1e-12);

/// Quadratic rational Bezier curve
///   C(t) = sum w_i b_i B_i(t) / sum w_i B_i(t),  B_i(t) = C(2,i) t^i (1-t)^{2-i}.
double rational_bezier_quadratic(double b0, double b1, double b2, double w0, double w1, double w2, double t);

}  // namespace toepmg

#endif  // TOEPMG_ANALYSIS_HPP
