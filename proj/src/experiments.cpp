#include "toepmg/experiments.hpp"

#include <cmath>
#include <regex>
#include <sstream>

namespace toepmg {

namespace {

struct ReferenceColumn {
  TransferOrders orders;
  std::vector<int> counts;  // -1 for "> 2000"
};

const std::vector<int> table2_sizes{15, 31, 63, 127, 255};
const std::vector<int> table3_sizes{31, 63, 127, 255, 511};
const std::vector<int> table4_sizes{15, 31, 63, 127, 255, 511, 1023};

const std::vector<ReferenceColumn> table2_reference{
    {{2, 2}, {219, 607, 1501, -1, -1}},
    {{2, 4}, {65, 72, 76, 77, 78}},
    {{4, 4}, {51, 52, 51, 50, 49}},
};

const std::vector<ReferenceColumn> table3_reference{
    {{2, 2}, {25, 32, 35, 37, 37}},
    {{2, 4}, {23, 23, 23, 23, 23}},
    {{4, 4}, {22, 21, 21, 20, 20}},
};

struct ReferencePde4Column {
  NamedPair pair;
  std::vector<int> exp_counts;
  std::vector<int> quad_counts;
};

const std::vector<ReferencePde4Column> table4_reference{
    {{"phi2", "phi2"}, {14, 32, 60, 98, 151, 215, 276}, {15, 33, 61, 101, 155, 221, 284}},
    {{"phi2", "phi4"}, {9, 11, 17, 27, 38, 48, 57}, {10, 13, 17, 26, 35, 44, 53}},
    {{"phi2", "gc"}, {9, 13, 15, 20, 27, 34, 44}, {10, 17, 24, 27, 29, 36, 46}},
    {{"phi4", "phi4"}, {7, 10, 14, 18, 22, 26, 29}, {9, 10, 13, 17, 20, 24, 27}},
    {{"phi4", "gc"}, {7, 9, 9, 12, 16, 20, 22}, {9, 11, 11, 13, 16, 19, 22}},
};

// Coarsest level of the W-cycle runs; see README.
constexpr int w_cycle_coarsest = 15;
constexpr int default_coarsest = 7;

std::string orders_label(TransferOrders o) {
  return "dr=" + std::to_string(o.dr) + ",dp=" + std::to_string(o.dp);
}

std::string pair_label(const NamedPair& p) { return "r=" + p.restriction + ",p=" + p.prolongation; }

std::function<double(double)> coefficient_function(const std::string& name) {
  if (name == "exp") return [](double x) { return std::exp(x); };
  if (name == "quad") return [](double x) { return (x - 0.5) * (x - 0.5); };
  throw std::invalid_argument("unknown coefficient '" + name + "' (expected exp or quad)");
}

CellResult make_cell(int n, const std::string& config, const SolveReport& rep, std::optional<int> reference) {
  CellResult c;
  c.n = n;
  c.config = config;
  c.iterations = rep.iterations;
  c.converged = rep.converged;
  if (reference) {
    if (*reference < 0) {
      c.reference_exceeds = true;
    } else {
      c.reference = *reference;
    }
  }
  return c;
}

std::vector<int> pick_sizes(const TableOptions& opts, const std::vector<int>& defaults) {
  return opts.sizes ? *opts.sizes : defaults;
}

std::optional<int> reference_value(const std::vector<int>& sizes, const std::vector<int>& counts, int n) {
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (sizes[i] == n) return counts[i];
  return std::nullopt;
}

int parse_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad " + what + ": " + s);
  return v;
}

}  // namespace

Vector manufactured_solution(int n) {
  if (n < 1) throw std::invalid_argument("problem size must be positive");
  Vector x(n);
  for (int j = 0; j < n; ++j) x[j] = static_cast<double>(j + 1) / n;
  return x;
}

Experiment assemble_integral(const Symbol& z, int n) {
  Experiment e;
  e.a = toeplitz_from_symbol(z, n);
  e.exact = manufactured_solution(n);
  e.rhs = e.a * e.exact;
  return e;
}

Experiment assemble_pde4(const std::function<double(double)>& a, int n, const Pde4Options& opts) {
  if (n < 3) throw std::invalid_argument("pde4 needs n >= 3");
  const double h = 1.0 / (n + 1);
  // second-difference rows: interior rows 1..n, extended rows 0..n+1
  const int first = opts.boundary == Pde4Boundary::extended ? 0 : 1;
  const int last = opts.boundary == Pde4Boundary::extended ? n + 1 : n;
  Experiment e;
  std::vector<Eigen::Triplet<double>> trips;
  bool nonpositive = false;
  for (int row = first; row <= last; ++row) {
    const double w = a(row * h);
    if (!(w > 0.0)) nonpositive = true;
    // D2 row `row` touches unknowns row-1, row, row+1 (1-based, 1..n)
    const int cols[] = {row - 1, row, row + 1};
    const double vals[] = {1.0, -2.0, 1.0};
    for (int s = 0; s < 3; ++s) {
      if (cols[s] < 1 || cols[s] > n) continue;
      for (int t = 0; t < 3; ++t) {
        if (cols[t] < 1 || cols[t] > n) continue;
        trips.emplace_back(cols[s] - 1, cols[t] - 1, w * vals[s] * vals[t]);
      }
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune(0.0);
  e.a = LevelMatrix({n}, std::move(m));
  if (nonpositive) e.warnings.push_back("coefficient a(x) is not positive at some grid node: ellipticity is lost");
  e.exact = manufactured_solution(n);
  e.rhs = e.a * e.exact;
  return e;
}

TransferPlan integral_transfer_plan(TransferOrders orders) {
  if (orders.dr < 2 || orders.dp < 2 || orders.dr % 2 || orders.dp % 2)
    throw std::invalid_argument("transfer orders must be even and at least 2");
  return TransferPlan(TransferPair(power_symbol(-1, orders.dr / 2), power_symbol(-1, orders.dp / 2)),
                      TransferPair(power_symbol(1, orders.dr / 2), power_symbol(1, orders.dp / 2)));
}

Symbol named_symbol(const std::string& raw) {
  std::string name;
  for (char c : raw)
    if (c != ' ') name += c;
  std::smatch m;
  if (std::regex_match(name, m, std::regex(R"(phi(\d+))"))) return bspline_symbol(parse_int(m[1], "order"));
  if (name == "gc") return cubic_interp_symbol();
  if (std::regex_match(name, m, std::regex(R"(pow\(([+-]),(\d+)\))")))
    return power_symbol(m[1] == "+" ? 1 : -1, parse_int(m[2], "exponent"));
  if (std::regex_match(name, m, std::regex(R"(laplace_power\((\d+)\))")))
    return power_symbol(-1, parse_int(m[1], "exponent"));
  if (std::regex_match(name, m, std::regex(R"(mu\((\d+)\))"))) return high_pass_symbol(parse_int(m[1], "order"));
  if (std::regex_match(name, m, std::regex(R"(\(?2([+-])2cos\)?(\^(\d+))?)"))) {
    const int s = m[3].matched ? parse_int(m[3], "exponent") : 1;
    return power_symbol(m[1] == "+" ? 1 : -1, s);
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(name, &pos);
    if (pos == name.size()) return Symbol::constant(v);
  } catch (const std::logic_error&) {
  }
  throw std::invalid_argument("unknown symbol name '" + raw + "'");
}

SolveReport solve_integral(const Symbol& z, int n, TransferOrders orders, CycleType cycle, const TableOptions& opts) {
  const Experiment e = assemble_integral(z, n);
  HierarchyOptions h;
  if (cycle == CycleType::tgm) h.max_levels = 2;
  h.coarsest_size = cycle == CycleType::w ? w_cycle_coarsest : default_coarsest;
  const Hierarchy hier = build_hierarchy(e.a, integral_transfer_plan(orders), h);
  CycleConfig cfg;
  cfg.cycle = cycle;
  cfg.tol = opts.tol;
  cfg.max_iter = opts.max_iter;
  cfg.smoother.kind = SmootherKind::richardson;
  return solve(hier, e.rhs, cfg);
}

SolveReport solve_pde4(const std::string& coefficient, int n, const NamedPair& pair, const TableOptions& opts) {
  const Experiment e = assemble_pde4(coefficient_function(coefficient), n, opts.pde4);
  const TransferPlan plan(TransferPair(named_symbol(pair.restriction), named_symbol(pair.prolongation)));
  HierarchyOptions h;
  h.coarsest_size = default_coarsest;
  const Hierarchy hier = build_hierarchy(e.a, plan, h);
  CycleConfig cfg;
  cfg.cycle = CycleType::v;
  cfg.tol = opts.tol;
  cfg.max_iter = opts.max_iter;
  cfg.smoother = opts.pde4_smoother;
  SolveReport rep = solve(hier, e.rhs, cfg);
  for (const auto& w : e.warnings) rep.diagnosis += (rep.diagnosis.empty() ? "" : "; ") + w;
  return rep;
}

namespace {

TableResult run_integral_table(TableId id, const Symbol& z, CycleType cycle, const std::vector<ReferenceColumn>& reference,
                               const std::vector<int>& reference_sizes, const TableOptions& opts) {
  TableResult t;
  t.id = id;
  t.cycle = cycle == CycleType::tgm ? "tgm" : "w";
  t.sizes = pick_sizes(opts, reference_sizes);
  for (const auto& col : reference) {
    ColumnResult c;
    c.config = orders_label(col.orders);
    const TransferPlan plan = integral_transfer_plan(col.orders);
    c.verdict = check_tgm(z, plan.finest.restriction, plan.finest.prolongation);
    for (int n : t.sizes) {
      const SolveReport rep = solve_integral(z, n, col.orders, cycle, opts);
      c.cells.push_back(make_cell(n, c.config, rep, reference_value(reference_sizes, col.counts, n)));
    }
    t.columns.push_back(std::move(c));
  }
  return t;
}

}  // namespace

TableResult run_table2(const TableOptions& opts) {
  TableResult t = run_integral_table(TableId::table2, power_symbol(1, 3), CycleType::tgm, table2_reference, table2_sizes, opts);
  t.title = "TGM iterations, integral problem z = (2+2cos x)^3";
  return t;
}

TableResult run_table3(const TableOptions& opts) {
  TableResult t = run_integral_table(TableId::table3, power_symbol(1, 2), CycleType::w, table3_reference, table3_sizes, opts);
  t.title = "W-cycle iterations, integral problem z = (2+2cos x)^2";
  return t;
}

TableResult run_table4(const std::string& coefficient, const TableOptions& opts) {
  const bool exp = coefficient == "exp";
  if (!exp && coefficient != "quad") throw std::invalid_argument("table4 coefficient must be exp or quad");
  TableResult t;
  t.id = TableId::table4;
  t.title = exp ? "V-cycle iterations, (a u'')'' = g with a(x) = e^x"
                : "V-cycle iterations, (a u'')'' = g with a(x) = (x - 0.5)^2";
  t.cycle = "v";
  t.sizes = pick_sizes(opts, table4_sizes);
  // constant-coefficient part of the operator: zero of order 4 at the origin
  const Symbol f = power_symbol(-1, 2);
  for (const auto& col : table4_reference) {
    ColumnResult c;
    c.config = pair_label(col.pair);
    c.verdict = check_vcycle(f, named_symbol(col.pair.restriction), named_symbol(col.pair.prolongation));
    for (int n : t.sizes) {
      const SolveReport rep = solve_pde4(coefficient, n, col.pair, opts);
      c.cells.push_back(make_cell(n, c.config, rep, reference_value(table4_sizes, exp ? col.exp_counts : col.quad_counts, n)));
    }
    t.columns.push_back(std::move(c));
  }
  return t;
}

std::string cell_text(const CellResult& c, int max_iter) {
  if (!c.converged && c.iterations >= max_iter) return ">" + std::to_string(max_iter);
  if (!c.converged) return "div";
  return std::to_string(c.iterations);
}

}  // namespace toepmg
