#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "distort/attack.hpp"
#include "distort/obfuscator.hpp"
#include "distort/session.hpp"
#include "distort/textmine.hpp"
#include "json.hpp"

namespace distort {

inline constexpr std::string_view kVersion = "1.0.0";

// DISTORT_DATA_DIR when set, otherwise the data directory of the source tree.
std::filesystem::path default_data_dir();

struct ExperimentConfig {
  std::string intent = "buy a toyota 2014";
  // Verb driving verb substitution; empty picks the intent's first word when
  // it is a graph verb.
  std::string root_verb;
  // Phrase a snippet must match to count as relevant; empty means `intent`.
  std::string relevance_phrase = "buy toyota";
  RelevanceMode relevance_mode = RelevanceMode::kTokensAll;
  std::string relevance_term;  // single-token mode key, optional

  std::string patterns = std::string(kReferencePatternSet);
  std::size_t per_pattern = 8;
  bool include_original = true;
  bool verb_substitution = true;
  std::size_t top_k = 100;

  ClickPolicy policy{2, 0.5, true};
  int days = 7;
  int ads_per_day = 42;

  int folds = 10;
  int knn_k = 3;
  std::vector<std::string> classifiers = {"knn", "naive_bayes"};

  std::uint64_t seed = 2017;

  std::filesystem::path lexicon;
  std::filesystem::path corpus;
  std::filesystem::path ads;
  std::filesystem::path stopwords;
  std::filesystem::path real_log;  // AOL-layout TSV, label 1

  // Paths resolved against `data_dir`.
  static ExperimentConfig with_data_dir(const std::filesystem::path& data_dir);

  // Throws kInvalidArgument / kIo naming the offending field.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);

struct QueryRow {
  std::string query_id;
  std::string pattern;
  std::string rendered;
  std::size_t retrieved = 0;
  std::size_t relevant = 0;
  std::optional<double> precision;
  std::optional<double> recall;
};

struct ExperimentReport {
  nlohmann::json metadata;  // seed, version, config echo
  std::vector<QueryRow> queries;
  std::size_t total_retrieved = 0;
  std::size_t total_relevant_in_corpus = 0;
  std::size_t distinct_relevant_retrieved = 0;
  std::optional<double> batch_recall;
  std::size_t attack_obfuscated = 0;
  std::size_t attack_real = 0;
  std::vector<AccuracyReport> attack;
  ExposureReport exposure;
  PseudoProfile profile;
  std::size_t result_clicks = 0;
  std::size_t ad_clicks = 0;
  std::size_t impressions = 0;
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);
// Canonical serialization written to report.json.
std::string dump_report(const ExperimentReport& report);

struct ExperimentArtifacts {
  ExperimentReport report;
  std::vector<ObfuscatedQuery> queries;
  SessionResult session;
};

// generate -> search -> relevance -> precision/recall -> session -> attack.
// A failing stage throws an Error whose message starts with the stage name.
ExperimentArtifacts run_experiment_full(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace distort
