// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "toepmg/analysis.hpp"
#include "toepmg/experiments.hpp"

using namespace toepmg;
using Eigen::MatrixXd;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    failed += (failed.empty() ? "" : "; ") + what;
    pass = false;
  }
};

int failures = 0;

void report(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!out.pass) ++failures;
  std::string text = out.detail.str();
  if (!out.failed.empty()) text += " | " + out.failed;
  std::printf("%s  %-36s %6.2fs  %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), secs, text.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Symbol random_even_symbol(std::mt19937& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Symbol::Coefficients c;
  for (int j = 0; j <= degree; ++j) {
    const double v = u(rng);
    c[{j}] = v;
    if (j > 0) c[{-j}] = v;
  }
  return Symbol(1, std::move(c));
}

// Fine node j (1-based) only sees coarse nodes inside 1..nc.
bool interior_node(const Symbol& p, int j, int nc) {
  for (const auto& [idx, a] : p.coefficients()) {
    const int offset = j - idx[0];
    if (offset % 2 != 0) continue;
    if (offset / 2 < 1 || offset / 2 > nc) return false;
  }
  return true;
}

// Iteration count, with capped runs counted at the cap.
int count_of(const CellResult& c, int max_iter) { return c.converged ? c.iterations : max_iter + 1; }

bool within(int ours, int reference, double rel, int abs) {
  return std::abs(ours - reference) <= std::max(static_cast<double>(abs), rel * reference);
}

const ColumnResult& column(const TableResult& t, const std::string& config) {
  for (const auto& c : t.columns)
    if (c.config == config) return c;
  throw std::runtime_error("missing column " + config);
}

std::string row_text(const ColumnResult& c) {
  std::string s = c.config + " [";
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    if (i) s += ' ';
    s += cell_text(c.cells[i]);
    s += '/';
    s += c.cells[i].reference ? std::to_string(*c.cells[i].reference) : ">2000";
  }
  return s + "]";
}

void galerkin_oracle(Outcome& out) {
  const auto t0 = Clock::now();
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<int> deg(0, 4);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Symbol f = random_even_symbol(rng, deg(rng));
    const Symbol r = random_even_symbol(rng, deg(rng));
    const Symbol p = random_even_symbol(rng, deg(rng));
    const LevelMatrix coarse = galerkin_product(circulant_from_symbol(f, 16), TransferPair(r, p));
    const LevelMatrix oracle = circulant_from_symbol(coarsen_symbol(f, r, p), 8);
    worst = std::max(worst, (coarse.dense() - oracle.dense()).cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  out.detail << "max entry error " << worst << ", " << secs << "s";
  out.require(worst <= 1e-11, "entry error above 1e-11");
  out.require(secs < 1.0, "runtime above 1 s");
}

void zero_relocation(Outcome& out) {
  for (int q = 1; q <= 3; ++q) {
    const Symbol f = power_symbol(1, q);
    const Symbol t = power_symbol(-1, (q + 1) / 2);
    const Symbol c = coarsen_symbol(f, t, t);
    const auto zeros = find_zeros(c);
    const bool unique_origin = zeros.size() == 1 && std::abs(zeros[0][0]) < 1e-9;
    const int order = zero_order_at(c, 0.0);
    const ZeroInfo tracked = track_zero(f, ZeroInfo{{pi}, {2 * q}}, t, t);
    out.detail << "q=" << q << ": zeros=" << zeros.size() << " order=" << order << "  ";
    out.require(unique_origin, "q=" + std::to_string(q) + " zero not unique at 0");
    out.require(order == 2 * q, "q=" + std::to_string(q) + " order != 2q");
    out.require(std::abs(tracked.location[0]) < 1e-12 && tracked.order() == 2 * q, "tracked zero mismatch");
  }
}

void order_table(Outcome& out) {
  const struct {
    const char* name;
    Symbol g;
    int hf, lf;
  } rows[] = {{"phi2", bspline_symbol(2), 2, 2}, {"phi4", bspline_symbol(4), 4, 2}, {"gc", cubic_interp_symbol(), 4, 4}};
  for (const auto& r : rows) {
    const int hf = hf_order(r.g), lf = lf_order(r.g);
    out.detail << r.name << " hf=" << hf << " lf=" << lf << "  ";
    out.require(hf == r.hf && lf == r.lf, std::string(r.name) + " orders differ");
  }
}

void table2(Outcome& out) {
  const auto t0 = Clock::now();
  const TableResult t = run_table2();
  const double secs = seconds_since(t0);
  for (const char* cfg : {"dr=2,dp=4", "dr=4,dp=4"}) {
    const auto& col = column(t, cfg);
    for (const auto& c : col.cells)
      out.require(c.converged && within(c.iterations, *c.reference, 0.10, 3),
                  std::string(cfg) + " n=" + std::to_string(c.n) + " outside tolerance");
    out.detail << row_text(col) << " ";
  }
  const auto& bad = column(t, "dr=2,dp=2");
  out.detail << row_text(bad) << " " << secs << "s";
  for (const auto& c : bad.cells) {
    if (c.n == 15) out.require(count_of(c, 2000) > 200, "dr=2,dp=2 n=15 not above 200");
    if (c.n >= 127) out.require(count_of(c, 2000) > 2000, "dr=2,dp=2 n=" + std::to_string(c.n) + " not above 2000");
  }
  out.require(secs < 30.0, "runtime above 30 s");
}

void table3(Outcome& out) {
  const TableResult t = run_table3();
  for (const auto& col : t.columns) {
    for (const auto& c : col.cells)
      out.require(c.converged && within(c.iterations, *c.reference, 0.0, 3),
                  col.config + " n=" + std::to_string(c.n) + " outside +-3");
    out.detail << row_text(col) << " ";
  }
  for (const auto& c : column(t, "dr=2,dp=4").cells)
    if (c.n >= 63) out.require(c.converged && std::abs(c.iterations - 23) <= 2, "dr=2,dp=4 not constant 23");
}

void table4(Outcome& out) {
  const auto t0 = Clock::now();
  int cells = 0, inside = 0;
  for (const char* coefficient : {"exp", "quad"}) {
    const TableResult t = run_table4(coefficient);
    for (const auto& col : t.columns) {
      out.detail << coefficient << " " << row_text(col) << " ";
      for (const auto& c : col.cells) {
        ++cells;
        if (c.converged && within(c.iterations, *c.reference, 0.20, 4)) ++inside;
      }
    }
    // column ordering at the largest size, ours against the reference
    std::vector<std::pair<int, std::string>> ours, ref;
    for (const auto& col : t.columns) {
      const auto& last = col.cells.back();
      ours.emplace_back(count_of(last, 2000), col.config);
      ref.emplace_back(*last.reference, col.config);
    }
    std::sort(ours.begin(), ours.end());
    std::sort(ref.begin(), ref.end());
    bool same = true;
    for (std::size_t i = 0; i < ours.size(); ++i) same = same && ours[i].second == ref[i].second;
    out.detail << coefficient << " ordering at n=" << t.sizes.back() << (same ? " matches" : " differs") << "; ";
    out.require(same, std::string(coefficient) + " column ordering at n=1023 differs");
  }
  const double secs = seconds_since(t0);
  out.detail << inside << "/" << cells << " cells within tolerance, " << secs << "s";
  out.require(inside == cells, std::to_string(cells - inside) + " cells outside +-20%/+-4");
  out.require(secs < 60.0, "runtime above 60 s");
}

// Galerkin hierarchy for the integral problem z = (2 + 2cos x)^2.
Hierarchy integral_hierarchy(int n, TransferOrders orders) {
  return build_hierarchy(toeplitz_from_symbol(power_symbol(1, 2), n), integral_transfer_plan(orders));
}

void structure_claims(Outcome& out) {
  for (int n : {63, 255}) {
    const Hierarchy h = integral_hierarchy(n, {2, 4});
    for (std::size_t i = 1; i < h.size(); ++i) {
      const MatrixXd a = h.level(i).a.dense();
      const int m = static_cast<int>(a.rows());
      const MatrixXd diff = a - std::ldexp(1.0, static_cast<int>(i)) * toeplitz_from_symbol(power_symbol(-1, 2), m).dense();
      bool corners_only = true;
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
          const bool corner = (r == 0 && c == 0) || (r == m - 1 && c == m - 1);
          if (!corner && diff(r, c) != 0.0) corners_only = false;
        }
      out.require(corners_only, "(2,4) n=" + std::to_string(n) + " level " + std::to_string(i) +
                                    " differs off the corners");
    }
  }
  out.detail << "(2,4): corners only; ";

  int worst_rank = 0;
  for (int n : {63, 255}) {
    const Hierarchy h = integral_hierarchy(n, {4, 4});
    for (std::size_t i = 1; i < h.size(); ++i) {
      const auto& lv = h.level(i).a;
      if (!lv.symbol()) {
        out.require(false, "no tracked symbol at level " + std::to_string(i));
        continue;
      }
      const int bw = lv.symbol()->bandwidth();
      out.require(bw == 7, "(4,4) level " + std::to_string(i) + " bandwidth " + std::to_string(bw));
      const MatrixXd corr = lv.dense() - toeplitz_from_symbol(*lv.symbol(), static_cast<int>(lv.rows())).dense();
      Eigen::JacobiSVD<MatrixXd> svd(corr);
      const auto& s = svd.singularValues();
      const double tol = 1e-10 * std::max(1.0, lv.dense().cwiseAbs().maxCoeff());
      int rank = 0;
      for (Eigen::Index k = 0; k < s.size(); ++k) rank += s[k] > tol;
      worst_rank = std::max(worst_rank, rank);
    }
  }
  out.detail << "(4,4): bandwidth 7, max correction rank " << worst_rank;
  out.require(worst_rank <= 4, "(4,4) correction rank above 4");
}

bool grows(const ColumnResult& c) {
  return count_of(c.cells.back(), 2000) >= 2 * count_of(c.cells.front(), 2000);
}

bool bounded(const ColumnResult& c) {
  int lo = 1 << 30, hi = 0;
  for (const auto& cell : c.cells) {
    if (!cell.converged) return false;
    lo = std::min(lo, cell.iterations);
    hi = std::max(hi, cell.iterations);
  }
  return hi <= 1.5 * lo;
}

void checker_consistency(Outcome& out) {
  std::vector<std::pair<std::string, TableResult>> tables{
      {"table2", run_table2()}, {"table3", run_table3()}, {"table4/exp", run_table4("exp")}, {"table4/quad", run_table4("quad")}};
  int strict = 0, violated = 0;
  for (const auto& [name, t] : tables)
    for (const auto& col : t.columns) {
      out.require(!col.verdict.details.empty(), name + " " + col.config + " has no verdict");
      if (col.verdict.strict) {
        ++strict;
        out.require(bounded(col), name + " " + col.config + " strict but unbounded");
      }
      if (!col.verdict.satisfied) {
        ++violated;
        out.require(grows(col), name + " " + col.config + " violated but no 2x growth");
      }
    }
  out.detail << strict << " strict columns bounded, " << violated << " violated columns grow";
}

void quadratic_prolongation(Outcome& out) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> u(-4096, 4096);
  const Symbol p = bspline_symbol(4) * 2.0;
  bool exact = true;
  double bezier = 0.0;
  for (int n : {15, 31, 63, 127}) {
    const int nc = (n - 1) / 2;
    for (int t = 0; t < 100; ++t) {
      Vector x = Vector::Zero(nc + 2);
      for (int k = 1; k <= nc; ++k) x[k] = u(rng) / 256.0;
      const Vector y = apply_prolongation(p, n, Vector(x.segment(1, nc)));
      for (int k = 1; k <= nc; ++k) {
        exact = exact && y[2 * k - 1] == (x[k - 1] + 6 * x[k] + x[k + 1]) / 8;
        const double c = rational_bezier_quadratic(x[k - 1], x[k], x[k + 1], 0.5, 1.5, 0.5, 0.5);
        bezier = std::max(bezier, std::abs(c - y[2 * k - 1]));
      }
      for (int k = 0; k <= nc; ++k) exact = exact && y[2 * k] == (x[k] + x[k + 1]) / 2;
    }
  }
  out.detail << "componentwise " << (exact ? "exact" : "mismatch") << ", Bezier max diff " << bezier;
  out.require(exact, "prolongation differs from the quadratic rule");
  out.require(bezier <= 1e-14, "Bezier comparison above 1e-14");
}

void adjoint_and_reproduction(Outcome& out) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double adjoint = 0.0, repro = 0.0;
  const struct {
    Symbol p;
    int degree;
  } transfers[] = {{bspline_symbol(2) * 2.0, 1}, {bspline_symbol(4) * 2.0, 1}, {cubic_interp_symbol() * 2.0, 3}};
  for (const auto& tr : transfers) {
    for (int n : {15, 31, 63}) {
      const int nc = (n - 1) / 2;
      const double h = 1.0 / (n + 1);
      for (int t = 0; t < 100; ++t) {
        const Vector v = Vector::NullaryExpr(n, [&] { return u(rng); });
        const Vector w = Vector::NullaryExpr(nc, [&] { return u(rng); });
        const double lhs = v.dot(apply_prolongation(tr.p, n, w));
        const double rhs = w.dot(apply_restriction(tr.p, n, v));
        adjoint = std::max(adjoint, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));

        std::vector<double> coef(static_cast<std::size_t>(tr.degree) + 1);
        for (auto& c : coef) c = u(rng);
        const auto poly = [&](double x) {
          double acc = 0.0;
          for (std::size_t i = coef.size(); i-- > 0;) acc = acc * x + coef[i];
          return acc;
        };
        Vector xc(nc);
        for (int k = 1; k <= nc; ++k) xc[k - 1] = poly(2 * k * h);
        const Vector y = apply_prolongation(tr.p, n, xc);
        for (int j = 1; j <= n; ++j)
          if (interior_node(tr.p, j, nc)) repro = std::max(repro, std::abs(y[j - 1] - poly(j * h)));
      }
    }
  }
  out.detail << "adjoint rel err " << adjoint << ", reproduction err " << repro;
  out.require(adjoint <= 1e-13, "adjoint identity violated");
  out.require(repro <= 1e-12, "polynomial reproduction violated");
}

}  // namespace

int main() {
  report("galerkin symbol oracle", galerkin_oracle);
  report("zero relocation", zero_relocation);
  report("order table", order_table);
  report("table 2 reproduction", table2);
  report("table 3 reproduction", table3);
  report("table 4 reproduction", table4);
  report("coarse structure claims", structure_claims);
  report("checker-behavior consistency", checker_consistency);
  report("quadratic prolongation / Bezier", quadratic_prolongation);
  report("adjoint and polynomial reproduction", adjoint_and_reproduction);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
