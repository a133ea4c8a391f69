// report.hpp — JSON report objects and plot-ready CSV emission for the
// inference results.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tvpa/changepoint.hpp"
#include "tvpa/estimate.hpp"
#include "tvpa/experiments.hpp"

namespace tvpa {

nlohmann::json to_json(const EstimateResult& est);
nlohmann::json to_json(const ScanResult& scan);
nlohmann::json to_json(const RefineResult& refine);
nlohmann::json to_json(const LocateResult& locate);
nlohmann::json to_json(const SummaryStats& stats);

// One CSV per table in the summary: rows are cells, columns the union of the
// table's metric names. Returns the written file paths.
std::vector<std::string> save_summary_tables(const SummaryStats& stats,
                                             const std::string& dir,
                                             const std::string& prefix = "");

// Two-column series, e.g. (i, L_i) or (t, |xhat - x|).
void save_series_csv(const std::string& path, const std::string& key_header,
                     const std::string& value_header,
                     const std::vector<std::pair<double, double>>& rows);

void save_json(const nlohmann::json& doc, const std::string& path);

} // namespace tvpa
