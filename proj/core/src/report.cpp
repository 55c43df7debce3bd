#include "coreflow/report.hpp"

#include <sstream>

#include <json.hpp>

namespace coreflow {

using nlohmann::json;

namespace {

json allocation_json(const Allocation& alloc) {
  json obj = json::object();
  for (const auto& [name, value] : alloc.values) obj[name] = rat_to_string(value);
  return obj;
}

json rational_map_json(const std::map<std::string, Rational>& m) {
  json obj = json::object();
  for (const auto& [name, value] : m) obj[name] = rat_to_string(value);
  return obj;
}

json diagnostics_json(const SolveDiagnostics& diag) {
  json obj;
  obj["epsilon"] = rat_to_string(diag.eps);
  obj["scale"] = diag.scale.str();
  obj["flow_value"] = diag.flow_value.str();
  obj["dual_objective"] = rat_to_string(diag.dual_objective);
  obj["nodes"] = diag.nodes;
  obj["arcs"] = diag.arcs;
  obj["cut_source_nodes"] = diag.cut_source_nodes;
  obj["cut_arcs"] = diag.cut_arcs;
  obj["degenerate"] = diag.degenerate;
  json nu = json::object();
  for (const auto& [label, value] : diag.nu) nu[label] = value;
  obj["nu"] = std::move(nu);
  return obj;
}

}  // namespace

std::string solve_report_json(const SolveResult& result, const std::string& kind) {
  json root;
  root["kind"] = kind;
  root["mode"] = to_string(result.mode);
  root["objective"] = rat_to_string(result.objective);
  json stages = json::array();
  for (std::size_t p = 0; p < result.allocations.size(); ++p) {
    json st;
    st["label"] = result.labels[p];
    st["y"] = allocation_json(result.allocations[p]);
    stages.push_back(std::move(st));
  }
  root["stages"] = std::move(stages);
  json transitions = json::array();
  for (std::size_t l = 0; l < result.delta.size(); ++l) {
    json tr;
    tr["delta"] = rational_map_json(result.delta[l]);
    tr["d"] = rational_map_json(result.d[l]);
    transitions.push_back(std::move(tr));
  }
  root["transitions"] = std::move(transitions);
  root["diagnostics"] = diagnostics_json(result.diag);
  return root.dump(2) + "\n";
}

std::string mvc_report_json(const MvcResult& result) {
  json root;
  root["cost"] = result.cost;
  json covers = json::array();
  for (const auto& cover : result.covers) covers.push_back(cover);
  root["covers"] = std::move(covers);
  return root.dump(2) + "\n";
}

std::string saa_report_json(const SaaResult& result, const std::optional<Rational>& exact_value) {
  json root;
  root["samples"] = result.samples;
  root["seed"] = result.seed;
  root["y_hat"] = allocation_json(result.y_hat);
  root["empirical_objective"] = rat_to_string(result.empirical_objective);
  if (exact_value) root["exact_value"] = rat_to_string(*exact_value);
  return root.dump(2) + "\n";
}

std::string eval_report_json(const Rational& value) {
  json root;
  root["value"] = rat_to_string(value);
  return root.dump(2) + "\n";
}

std::string solve_summary(const SolveResult& result) {
  std::ostringstream out;
  out << "objective " << rat_to_string(result.objective) << ", " << result.allocations.size()
      << " stage allocations, epsilon " << rat_to_string(result.diag.eps) << ", scale "
      << result.diag.scale.str();
  return out.str();
}

}  // namespace coreflow
