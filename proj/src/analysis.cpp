#include "toepmg/analysis.hpp"

#include <cmath>

namespace toepmg {

namespace {

constexpr int nondegeneracy_samples = 1024;

Point unique_zero(const Symbol& f) {
  const auto zeros = find_zeros(f);
  if (zeros.empty()) throw UnsupportedAnalysis("symbol has no detectable zero: " + f.to_string());
  if (zeros.size() > 1) throw UnsupportedAnalysis("symbol has more than one zero: " + f.to_string());
  return zeros.front();
}

// Sample points for the nondegeneracy sums: a uniform grid plus x0 and the
// lattice corners, evaluated exactly.
std::vector<Point> sample_points(const Point& x0) {
  std::vector<Point> pts;
  if (x0.size() == 1) {
    for (int i = 0; i < nondegeneracy_samples; ++i) pts.push_back({-pi + 2.0 * pi * i / nondegeneracy_samples});
  }
  pts.push_back(x0);
  const Point origin(x0.size(), 0.0);
  for (const auto& c : corner_points(origin)) pts.push_back(c);
  return pts;
}

template <class Term>
bool sums_nonzero(const Point& x0, double scale, Term term) {
  for (const auto& x : sample_points(x0)) {
    Complex s{};
    for (const auto& y : corner_points(x)) s += term(y);
    if (std::abs(s) <= zero_tolerance * scale) return false;
  }
  return true;
}

template <class Term>
bool sums_positive(const Point& x0, double scale, Term term) {
  for (const auto& x : sample_points(x0)) {
    Complex s{};
    for (const auto& y : corner_points(x)) s += term(y);
    if (std::abs(s.imag()) > zero_tolerance * scale || s.real() <= zero_tolerance * scale) return false;
  }
  return true;
}

void finish(ConditionVerdict& v) {
  v.satisfied = v.nondegenerate;
  v.strict = v.nondegenerate;
  for (const auto& e : v.details) {
    v.satisfied = v.satisfied && e.holds();
    v.strict = v.strict && e.strict();
  }
}

}  // namespace

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::order_eq6:
      return "order_eq6";
    case ConditionId::tgm_eq8:
      return "tgm_eq8";
    case ConditionId::tgm_eq9:
      return "tgm_eq9";
    case ConditionId::vcycle_eq10:
      return "vcycle_eq10";
  }
  return "unknown";
}

bool proportional(const Symbol& r, const Symbol& p, double tol) {
  if (r.dim() != p.dim() || r.empty() || p.empty()) return false;
  if (r.coefficients().size() != p.coefficients().size()) return false;
  const auto& [j0, p0] = *p.coefficients().begin();
  const Complex alpha = r.coefficient(j0) / p0;
  if (std::abs(alpha) == 0.0) return false;
  for (const auto& [j, a] : p.coefficients())
    if (std::abs(r.coefficient(j) - alpha * a) > tol * std::max(1.0, std::abs(r.coefficient(j)))) return false;
  return true;
}

ConditionVerdict check_order_condition(int gamma_r, int gamma_p, int m) {
  if (gamma_r < 0 || gamma_p < 0 || m < 0) throw std::invalid_argument("orders must be nonnegative");
  ConditionVerdict v;
  v.id = ConditionId::order_eq6;
  MirrorEntry e;
  e.order_r = gamma_r;
  e.order_p = gamma_p;
  e.order_f = m;
  e.lhs = gamma_r + gamma_p;
  e.rhs = m;
  v.details.push_back(e);
  finish(v);
  return v;
}

ConditionVerdict check_tgm(const Symbol& f, const Symbol& r, const Symbol& p) {
  if (f.dim() != r.dim() || f.dim() != p.dim()) throw DimensionMismatch("check_tgm: dimensions differ");
  ConditionVerdict v;
  const bool same = proportional(r, p);
  v.id = same ? ConditionId::tgm_eq8 : ConditionId::tgm_eq9;
  const Point x0 = unique_zero(f);
  v.zero = x0;
  const int m = zero_order_at(f, x0);
  for (const auto& y : mirror_points(x0)) {
    MirrorEntry e;
    e.y = y;
    e.order_r = zero_order_at(r, y);
    e.order_p = zero_order_at(p, y);
    e.order_f = m;
    // with r = alpha p the bound on p^2 / f is the same inequality
    e.lhs = same ? 2 * e.order_p : e.order_r + e.order_p;
    e.rhs = m;
    v.details.push_back(e);
  }
  if (same) {
    v.nondegenerate = sums_positive(x0, p.norm1() * p.norm1(), [&](const Point& y) { return p(y) * p(y); });
  } else {
    v.nondegenerate = sums_nonzero(x0, r.norm1() * p.norm1(), [&](const Point& y) { return r(y) * p(y); });
  }
  finish(v);
  return v;
}

ConditionVerdict check_vcycle(const Symbol& f, const Symbol& r, const Symbol& p) {
  if (f.dim() != r.dim() || f.dim() != p.dim()) throw DimensionMismatch("check_vcycle: dimensions differ");
  ConditionVerdict v;
  v.id = ConditionId::vcycle_eq10;
  const bool same = proportional(r, p);
  if (!same) v.note = "r is not proportional to p: orders combined as ord(r) + ord(p) >= 2 ord(f)";
  const Point x0 = unique_zero(f);
  v.zero = x0;
  const int m = zero_order_at(f, x0);
  for (const auto& y : mirror_points(x0)) {
    MirrorEntry e;
    e.y = y;
    e.order_r = zero_order_at(r, y);
    e.order_p = zero_order_at(p, y);
    e.order_f = m;
    e.lhs = same ? e.order_p : e.order_r + e.order_p;
    e.rhs = same ? m : 2 * m;
    v.details.push_back(e);
  }
  v.nondegenerate = sums_positive(x0, p.norm1() * p.norm1(), [&](const Point& y) { return p(y) * p(y); });
  finish(v);
  return v;
}

ConditionVerdict check_vcycle(const Symbol& f, const Symbol& p) { return check_vcycle(f, p, p); }

EquivalenceAudit equivalence_audit(const Symbol& f, const Symbol& r, const Symbol& p) {
  EquivalenceAudit out;
  const Point origin(static_cast<std::size_t>(f.dim()), 0.0);
  if (!vanishes_at(f, origin)) throw UnsupportedAnalysis("equivalence audit needs the zero of f at the origin");
  const int m = zero_order_at(f, origin);
  out.order = check_order_condition(hf_order(r, TransferRole::restriction), hf_order(p, TransferRole::prolongation), m);
  out.tgm = check_tgm(f, r, p);
  out.agree = out.order.satisfied == out.tgm.satisfied && out.order.strict == out.tgm.strict;
  return out;
}

double rational_bezier_quadratic(double b0, double b1, double b2, double w0, double w1, double w2, double t) {
  if (w0 <= 0.0 || w1 <= 0.0 || w2 <= 0.0) throw std::invalid_argument("Bezier weights must be positive");
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("Bezier parameter must lie in [0, 1]");
  const double s = 1.0 - t;
  const double basis[] = {s * s, 2.0 * s * t, t * t};
  const double num = w0 * b0 * basis[0] + w1 * b1 * basis[1] + w2 * b2 * basis[2];
  const double den = w0 * basis[0] + w1 * basis[1] + w2 * basis[2];
  return num / den;
}

}  // namespace toepmg
