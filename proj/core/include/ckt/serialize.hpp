#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ckt/box.hpp"
#include "ckt/covariance.hpp"
#include "ckt/estimators.hpp"
#include "ckt/hypothesis.hpp"
#include "ckt/simulation.hpp"
#include "ckt/tree.hpp"

namespace ckt {

using nlohmann::json;

inline constexpr const char* kVersion = CKT_VERSION_STRING;

// Box family config. Accepts an array of boxes or {"boxes": [...]}. A box is
// an array of constraints {column, lower, upper, lower_open, upper_open} or
// {column, codes: [...]}; `column` is a conditioning column name or its
// 0-based position among conditioning columns. Missing bounds (or null) are
// infinite; default openness is (lower, upper]. Unlisted columns are free.
BoxFamily parse_boxes(const json& j, const Sample& s);
BoxFamily parse_boxes(const json& j, const std::vector<std::string>& conditioning_names);
json boxes_to_json(const BoxFamily& family, const std::vector<std::string>& conditioning_names);
json box_to_json(const Box& box, const std::vector<std::string>& conditioning_names);

json to_json(const TestResult& r);
json to_json(const TauEstimates& t);
json to_json(const CovarianceEstimate& c);
json to_json(const DependenceTree& tree, const std::vector<std::string>& conditioned_names,
             const std::vector<std::string>& conditioning_names);
json to_json(const MonteCarloReport& report, bool include_timing = true);
json to_json(const std::vector<ClaimResult>& claims);
json to_json(const TreeConfig& c);
json to_json(const Scenario& sc);

// Graphviz rendering of the tree: one node per box with its taus and count;
// edges carry the split condition.
std::string to_dot(const DependenceTree& tree, const std::vector<std::string>& conditioned_names,
                   const std::vector<std::string>& conditioning_names);

// Rows (n, m) and one column per method, the rejection frequencies.
std::string report_csv(const std::vector<MonteCarloReport>& reports);

std::uint64_t fnv1a64(const std::string& bytes);
// Hex FNV-1a of the compact dump of the resolved configuration.
std::string config_hash(const json& config);

}  // namespace ckt
