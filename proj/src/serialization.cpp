#include "toepmg/serialization.hpp"

#include <iomanip>
#include <sstream>

namespace toepmg {

namespace {

std::string table_name(TableId id) {
  switch (id) {
    case TableId::table2:
      return "table2";
    case TableId::table3:
      return "table3";
    case TableId::table4:
      return "table4";
  }
  return "unknown";
}

Json reference_json(const CellResult& c, int max_iter) {
  if (c.reference) return *c.reference;
  if (c.reference_exceeds) return ">" + std::to_string(max_iter);
  return nullptr;
}

std::string reference_text(const CellResult& c, int max_iter) {
  if (c.reference) return std::to_string(*c.reference);
  if (c.reference_exceeds) return ">" + std::to_string(max_iter);
  return "";
}

std::string number_text(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

Json to_json(const Symbol& s) {
  Json entries = Json::array();
  // std::map keys are already in lexicographic order
  for (const auto& [j, a] : s.coefficients()) entries.push_back(Json::array({j, a.real(), a.imag()}));
  return Json{{"dim", s.dim()}, {"entries", entries}};
}

Symbol symbol_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw std::invalid_argument("symbol JSON needs 'dim' and 'entries'");
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw std::invalid_argument("symbol dimension must be positive");
  Symbol::Coefficients c;
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("symbol entry must be [[j...], re, im]");
    auto idx = e[0].get<MultiIndex>();
    if (static_cast<int>(idx.size()) != dim) throw DimensionMismatch("symbol entry index has the wrong length");
    c[idx] += Complex(e[1].get<double>(), e[2].get<double>());
  }
  return Symbol(dim, std::move(c));
}

Json to_json(const ConditionVerdict& v) {
  Json details = Json::array();
  for (const auto& e : v.details) {
    Json d = Json::object();
    if (!e.y.empty()) d["y"] = e.y;
    d["order_r"] = e.order_r;
    d["order_p"] = e.order_p;
    d["order_f"] = e.order_f;
    d["lhs"] = e.lhs;
    d["rhs"] = e.rhs;
    d["holds"] = e.holds();
    d["strict"] = e.strict();
    details.push_back(d);
  }
  Json out{{"condition_id", to_string(v.id)},
           {"satisfied", v.satisfied},
           {"strict", v.strict},
           {"nondegenerate", v.nondegenerate}};
  if (v.zero) out["zero"] = *v.zero;
  out["details"] = details;
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

Json to_json(const SolveReport& rep, const RunInfo& info, const std::optional<ConditionVerdict>& verdict) {
  Json out{{"problem", info.problem}, {"n", info.n}, {"cycle", info.cycle}};
  out["delta_r"] = info.delta_r ? Json(*info.delta_r) : Json(nullptr);
  out["delta_p"] = info.delta_p ? Json(*info.delta_p) : Json(nullptr);
  if (info.restriction) out["restriction"] = *info.restriction;
  if (info.prolongation) out["prolongation"] = *info.prolongation;
  out["iterations"] = rep.iterations;
  out["converged"] = rep.converged;
  out["diverged"] = rep.diverged;
  if (!rep.diagnosis.empty()) out["diagnosis"] = rep.diagnosis;
  out["residuals"] = rep.residuals;
  Json levels = Json::array();
  for (const auto& lv : rep.levels) {
    Json l{{"size", lv.size}, {"bandwidth", lv.bandwidth}};
    l["symbol"] = lv.symbol ? Json(*lv.symbol) : Json(nullptr);
    l["zero_location"] = lv.zero_location ? Json(*lv.zero_location) : Json(nullptr);
    l["zero_order"] = lv.zero_order ? Json(*lv.zero_order) : Json(nullptr);
    l["damping_scale"] = lv.damping_scale;
    l["damping_source"] = lv.damping_source;
    l["pre_damping"] = lv.pre_damping;
    l["post_damping"] = lv.post_damping;
    levels.push_back(l);
  }
  out["levels"] = levels;
  out["analysis"] = verdict ? to_json(*verdict) : Json(nullptr);
  return out;
}

std::optional<double> relative_deviation(const CellResult& c) {
  if (!c.reference || *c.reference == 0) return std::nullopt;
  return static_cast<double>(c.iterations - *c.reference) / *c.reference;
}

Json to_json(const TableResult& t, int max_iter) {
  Json cols = Json::array();
  for (const auto& col : t.columns) {
    Json cells = Json::array();
    for (const auto& c : col.cells) {
      const auto dev = relative_deviation(c);
      cells.push_back(Json{{"n", c.n},
                           {"iterations", cell_text(c, max_iter)},
                           {"converged", c.converged},
                           {"reference", reference_json(c, max_iter)},
                           {"deviation", dev ? Json(*dev) : Json(nullptr)}});
    }
    cols.push_back(Json{{"config", col.config}, {"analysis", to_json(col.verdict)}, {"cells", cells}});
  }
  return Json{{"table", table_name(t.id)}, {"title", t.title}, {"cycle", t.cycle}, {"sizes", t.sizes}, {"columns", cols}};
}

std::string to_csv(const TableResult& t, int max_iter) {
  std::ostringstream os;
  os << "table,config,n,iterations,converged,reference,deviation,verdict\n";
  for (const auto& col : t.columns) {
    const std::string verdict = col.verdict.satisfied ? (col.verdict.strict ? "strict" : "satisfied") : "violated";
    for (const auto& c : col.cells) {
      const auto dev = relative_deviation(c);
      os << table_name(t.id) << ",\"" << col.config << "\"," << c.n << ',' << cell_text(c, max_iter) << ','
         << (c.converged ? "true" : "false") << ',' << reference_text(c, max_iter) << ',' << (dev ? number_text(*dev) : "")
         << ',' << verdict << '\n';
    }
  }
  return os.str();
}

}  // namespace toepmg
