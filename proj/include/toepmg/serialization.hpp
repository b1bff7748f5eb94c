#ifndef TOEPMG_SERIALIZATION_HPP
#define TOEPMG_SERIALIZATION_HPP

#include <json.hpp>

#include <optional>
#include <string>

#include "toepmg/analysis.hpp"
#include "toepmg/cycles.hpp"
#include "toepmg/experiments.hpp"

namespace toepmg {

using Json = nlohmann::ordered_json;

/// {"dim": d, "entries": [[[j...], re, im], ...]} in lexicographic index order.
Json to_json(const Symbol& s);
Symbol symbol_from_json(const Json& j);

Json to_json(const ConditionVerdict& v);

struct RunInfo {
  std::string problem;
  int n = 0;
  std::string cycle;
  std::optional<int> delta_r;
  std::optional<int> delta_p;
  std::optional<std::string> restriction;
  std::optional<std::string> prolongation;
};

Json to_json(const SolveReport& rep, const RunInfo& info, const std::optional<ConditionVerdict>& verdict = {});

Json to_json(const TableResult& t, int max_iter = 2000);
/// One row per cell: table,config,n,iterations,converged,reference,deviation.
std::string to_csv(const TableResult& t, int max_iter = 2000);

/// Relative deviation (ours - reference) / reference, when a reference count exists.
std::optional<double> relative_deviation(const CellResult& c);

}  // namespace toepmg

#endif  // TOEPMG_SERIALIZATION_HPP
