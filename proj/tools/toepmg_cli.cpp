// Command-line front end: table runs, single solves and condition checks.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "toepmg/serialization.hpp"

using namespace toepmg;

namespace {

constexpr int exit_max_iter = 2;

Symbol load_symbol(const std::string& spec) {
  if (std::filesystem::is_regular_file(spec)) {
    std::ifstream in(spec);
    return symbol_from_json(Json::parse(in));
  }
  return named_symbol(spec);
}

std::string verdict_word(const ConditionVerdict& v) {
  if (!v.satisfied) return "violated";
  return v.strict ? "satisfied (strict)" : "satisfied (not strict)";
}

void print_verdict(std::ostream& os, const ConditionVerdict& v) {
  os << "condition " << to_string(v.id) << ": " << verdict_word(v) << '\n';
  if (v.zero) {
    os << "  zero of f at";
    for (double x : *v.zero) os << ' ' << x;
    os << '\n';
  }
  for (const auto& e : v.details) {
    os << "  ";
    if (!e.y.empty()) {
      os << "y =";
      for (double x : e.y) os << ' ' << x;
      os << ": ";
    }
    os << "ord(r)=" << e.order_r << " ord(p)=" << e.order_p << " ord(f)=" << e.order_f << "  " << e.lhs
       << (e.strict() ? " > " : e.holds() ? " = " : " < ") << e.rhs << '\n';
  }
  os << "  nondegeneracy: " << (v.nondegenerate ? "holds" : "fails") << '\n';
  if (!v.note.empty()) os << "  note: " << v.note << '\n';
}

void print_table_text(std::ostream& os, const TableResult& t, int max_iter) {
  os << t.title << " (" << t.cycle << ")\n";
  os << std::setw(6) << "n";
  for (const auto& c : t.columns) os << std::setw(22) << c.config;
  os << '\n';
  for (std::size_t i = 0; i < t.sizes.size(); ++i) {
    os << std::setw(6) << t.sizes[i];
    for (const auto& c : t.columns) {
      const CellResult& cell = c.cells[i];
      std::string ref = "-";
      if (cell.reference) ref = std::to_string(*cell.reference);
      else if (cell.reference_exceeds) ref = ">" + std::to_string(max_iter);
      std::ostringstream s;
      s << cell_text(cell, max_iter) << " [" << ref << "]";
      os << std::setw(22) << s.str();
    }
    os << '\n';
  }
  os << std::setw(6) << "";
  for (const auto& c : t.columns) {
    const char* verdict = c.verdict.satisfied ? (c.verdict.strict ? "strict" : "satisfied") : "violated";
    os << std::setw(22) << verdict;
  }
  os << "\n  cells: ours [reference]\n";
}

bool any_capped(const TableResult& t) {
  for (const auto& c : t.columns)
    for (const auto& cell : c.cells)
      if (!cell.converged) return true;
  return false;
}

Sweep parse_sweep(const std::string& s) {
  if (s == "forward") return Sweep::forward;
  if (s == "backward") return Sweep::backward;
  return Sweep::symmetric;
}

CycleType parse_cycle(const std::string& s) {
  if (s == "tgm") return CycleType::tgm;
  if (s == "w") return CycleType::w;
  return CycleType::v;
}

struct SmootherFlags {
  std::string kind;
  std::string gs_order = "forward";
  int gs_steps = 1;

  SmootherSpec spec(SmootherKind fallback) const {
    SmootherSpec s;
    s.kind = kind.empty() ? fallback : kind == "gs" ? SmootherKind::gauss_seidel : SmootherKind::richardson;
    s.pre_sweep = s.post_sweep = parse_sweep(gs_order);
    s.steps = gs_steps;
    return s;
  }
};

void add_smoother_flags(CLI::App& app, SmootherFlags& f) {
  app.add_option("--smoother", f.kind, "Smoother (richardson or gs)")->check(CLI::IsMember({"richardson", "gs"}));
  app.add_option("--gs-order", f.gs_order, "Gauss-Seidel sweep order")
      ->check(CLI::IsMember({"forward", "backward", "symmetric"}));
  app.add_option("--gs-steps", f.gs_steps, "Gauss-Seidel sweeps per smoothing step")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbol-driven multigrid for banded Toeplitz systems"};
  app.require_subcommand(0, 1);

  std::string experiment;
  std::vector<int> sizes;
  std::string out = "text";
  std::string coefficient = "both";
  std::string boundary = "extended";
  double tol = 1e-9;
  int max_iter = 2000;
  bool analyze_only = false;
  SmootherFlags table_smoother;
  app.add_option("--experiment", experiment, "Reproduce a table")->check(CLI::IsMember({"table2", "table3", "table4"}));
  app.add_option("--n", sizes, "Problem sizes (default: the table's sizes)");
  app.add_option("--out", out, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--coefficient", coefficient, "table4 coefficient a(x)")->check(CLI::IsMember({"exp", "quad", "both"}));
  app.add_option("--boundary", boundary, "table4 boundary closure")->check(CLI::IsMember({"extended", "interior"}));
  app.add_option("--tol", tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  app.add_flag("--analyze-only", analyze_only, "Print condition verdicts without solving");
  add_smoother_flags(app, table_smoother);

  auto* analyze = app.add_subcommand("analyze", "Check optimality conditions for (f, r, p)");
  std::string f_spec, r_spec, p_spec, mode = "tgm";
  std::string analyze_out = "text";
  analyze->add_option("--f", f_spec, "Problem symbol (name or JSON file)")->required();
  analyze->add_option("--r", r_spec, "Restriction symbol (defaults to p)");
  analyze->add_option("--p", p_spec, "Prolongation symbol")->required();
  analyze->add_option("--mode", mode, "Condition family")->check(CLI::IsMember({"tgm", "vcycle", "order", "audit"}));
  analyze->add_option("--out", analyze_out, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem and print a JSON report");
  std::string problem = "integral", z_spec = "(2+2cos)^3", cycle = "tgm", r_name = "phi4", p_name = "phi4";
  std::string solve_coefficient = "exp";
  int n = 63, dr = 2, dp = 4;
  SmootherFlags solve_smoother;
  solve_cmd->add_option("--problem", problem, "integral or pde4")->check(CLI::IsMember({"integral", "pde4"}));
  solve_cmd->add_option("--z", z_spec, "Integral kernel symbol");
  solve_cmd->add_option("--coefficient", solve_coefficient, "pde4 coefficient")->check(CLI::IsMember({"exp", "quad"}));
  solve_cmd->add_option("--n", n, "Problem size")->check(CLI::Range(3, 1 << 20));
  solve_cmd->add_option("--cycle", cycle, "Cycle type")->check(CLI::IsMember({"tgm", "v", "w"}));
  solve_cmd->add_option("--dr", dr, "Restriction order (integral)");
  solve_cmd->add_option("--dp", dp, "Prolongation order (integral)");
  solve_cmd->add_option("--r", r_name, "Restriction symbol (pde4)");
  solve_cmd->add_option("--p", p_name, "Prolongation symbol (pde4)");
  solve_cmd->add_option("--tol", tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--boundary", boundary, "pde4 boundary closure")->check(CLI::IsMember({"extended", "interior"}));
  solve_cmd->add_flag("--analyze-only", analyze_only, "Print the condition verdict without solving");
  add_smoother_flags(*solve_cmd, solve_smoother);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const Symbol f = load_symbol(f_spec);
      const Symbol p = load_symbol(p_spec);
      const Symbol r = r_spec.empty() ? p : load_symbol(r_spec);
      std::vector<ConditionVerdict> verdicts;
      if (mode == "tgm") {
        verdicts.push_back(check_tgm(f, r, p));
      } else if (mode == "vcycle") {
        verdicts.push_back(check_vcycle(f, r, p));
      } else if (mode == "order") {
        const Point origin(static_cast<std::size_t>(f.dim()), 0.0);
        verdicts.push_back(check_order_condition(hf_order(r, TransferRole::restriction),
                                                 hf_order(p, TransferRole::prolongation), zero_order_at(f, origin)));
      } else {
        const EquivalenceAudit a = equivalence_audit(f, r, p);
        verdicts = {a.order, a.tgm};
        if (analyze_out == "text") std::cout << "checkers " << (a.agree ? "agree" : "disagree") << '\n';
      }
      if (analyze_out == "json") {
        Json j = Json::array();
        for (const auto& v : verdicts) j.push_back(to_json(v));
        std::cout << j.dump(2) << '\n';
      } else {
        for (const auto& v : verdicts) print_verdict(std::cout, v);
      }
      return 0;
    }

    if (*solve_cmd) {
      TableOptions opts;
      opts.tol = tol;
      opts.max_iter = max_iter;
      opts.pde4.boundary = boundary == "interior" ? Pde4Boundary::interior : Pde4Boundary::extended;
      RunInfo info;
      info.problem = problem;
      info.n = n;
      std::optional<ConditionVerdict> verdict;
      SolveReport rep;
      if (problem == "integral") {
        const Symbol z = load_symbol(z_spec);
        const TransferOrders orders{dr, dp};
        const TransferPlan plan = integral_transfer_plan(orders);
        info.cycle = cycle;
        info.delta_r = dr;
        info.delta_p = dp;
        verdict = check_tgm(z, plan.finest.restriction, plan.finest.prolongation);
        if (!analyze_only) rep = solve_integral(z, n, orders, parse_cycle(cycle), opts);
      } else {
        info.cycle = "v";
        info.restriction = r_name;
        info.prolongation = p_name;
        opts.pde4_smoother = solve_smoother.spec(SmootherKind::gauss_seidel);
        verdict = check_vcycle(power_symbol(-1, 2), named_symbol(r_name), named_symbol(p_name));
        if (!analyze_only) rep = solve_pde4(solve_coefficient, n, {r_name, p_name}, opts);
      }
      if (analyze_only) {
        print_verdict(std::cout, *verdict);
        return 0;
      }
      std::cout << to_json(rep, info, verdict).dump(2) << '\n';
      return rep.converged ? 0 : exit_max_iter;
    }

    if (!experiment.empty()) {
      TableOptions opts;
      opts.tol = tol;
      opts.max_iter = max_iter;
      if (!sizes.empty()) opts.sizes = sizes;
      opts.pde4.boundary = boundary == "interior" ? Pde4Boundary::interior : Pde4Boundary::extended;
      opts.pde4_smoother = table_smoother.spec(SmootherKind::gauss_seidel);
      if (analyze_only) opts.sizes = std::vector<int>{};

      std::vector<TableResult> tables;
      if (experiment == "table2") tables.push_back(run_table2(opts));
      if (experiment == "table3") tables.push_back(run_table3(opts));
      if (experiment == "table4") {
        if (coefficient != "quad") tables.push_back(run_table4("exp", opts));
        if (coefficient != "exp") tables.push_back(run_table4("quad", opts));
      }

      if (analyze_only) {
        for (const auto& t : tables)
          for (const auto& c : t.columns) {
            std::cout << c.config << ": ";
            print_verdict(std::cout, c.verdict);
          }
        return 0;
      }
      if (out == "json") {
        Json j = Json::array();
        for (const auto& t : tables) j.push_back(to_json(t, max_iter));
        std::cout << j.dump(2) << '\n';
      } else if (out == "csv") {
        for (std::size_t i = 0; i < tables.size(); ++i) {
          std::string csv = to_csv(tables[i], max_iter);
          if (i > 0) csv = csv.substr(csv.find('\n') + 1);
          std::cout << csv;
        }
      } else {
        for (const auto& t : tables) print_table_text(std::cout, t, max_iter);
      }
      for (const auto& t : tables)
        if (any_capped(t)) return exit_max_iter;
      return 0;
    }

    std::cout << app.help() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
