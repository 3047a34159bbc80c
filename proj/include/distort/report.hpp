#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "distort/experiment.hpp"

namespace distort {

struct Bar {
  std::string label;
  std::string series;
  double value = 0.0;
};

// Grouped vertical bar chart. Every bar carries a
// <text class="value" data-label=".." data-series="..">value</text> element
// holding the exact number shown in the CSV files.
std::string render_bar_chart(const std::string& title, const std::vector<Bar>& bars);

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

std::string per_query_csv(const ExperimentReport& report);
std::string attack_csv(const ExperimentReport& report);
std::string exposure_csv(const ExperimentReport& report);

// Writes report.json, per_query.csv, attack.csv, exposure.csv,
// retrieved_vs_relevant.svg, classifier_accuracy.svg and ad_categories.svg.
// Returns the written paths. Throws kIo when out_dir cannot be written.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir);

}  // namespace distort
