#pragma once

#include <optional>
#include <string>

#include "coreflow/saa.hpp"
#include "coreflow/solver.hpp"

namespace coreflow {

// Machine-first JSON reports, byte-stable for identical inputs: keys are
// emitted in sorted order and all numbers are fraction strings.
std::string solve_report_json(const SolveResult& result, const std::string& kind);
std::string mvc_report_json(const MvcResult& result);
std::string saa_report_json(const SaaResult& result, const std::optional<Rational>& exact_value);
std::string eval_report_json(const Rational& value);

// One-line human summary (for stderr).
std::string solve_summary(const SolveResult& result);

}  // namespace coreflow
