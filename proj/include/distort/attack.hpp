#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distort/textmine.hpp"

namespace distort {

inline constexpr int kDummyLabel = 0;
inline constexpr int kRealLabel = 1;

struct LabeledQueryVector {
  std::string query_id;
  std::vector<double> vector;
  int label = kDummyLabel;
};

struct AttackDataset {
  std::vector<std::string> vocabulary;
  std::vector<LabeledQueryVector> items;

  // Throws on duplicate ids, vector/vocabulary length mismatch or labels
  // outside {0, 1}.
  void validate() const;
};

struct LabeledText {
  std::string query_id;
  std::string text;
  int label = kDummyLabel;
};

// Queries become micro-documents of one shared TF-IDF matrix.
AttackDataset build_attack_dataset(const std::vector<LabeledText>& texts,
                                   const PipelineConfig& config);

// Throws kInvalidArgument on length mismatch.
double euclidean(std::span<const double> x, std::span<const double> y);

// Majority label of the k nearest training vectors; distance ties are broken
// by query_id ascending. k must be odd and <= |train|.
int knn_classify(std::span<const LabeledQueryVector> train, std::span<const double> probe, int k);

// Multinomial naive Bayes with add-one smoothing over the vocabulary, using
// the vector weights as term counts. Requires both labels in `train`.
int nb_classify(std::span<const LabeledQueryVector> train, std::span<const double> probe);

// Fit-then-predict interface used by cross-validation.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string name() const = 0;
  virtual void fit(std::span<const LabeledQueryVector> train) = 0;
  virtual int predict(std::span<const double> probe) const = 0;
};

enum class ClassifierKind { kKnn, kNaiveBayes, kRandomForest, kLogisticRegression };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kKnn;
  int k = 3;  // KNN only
};

std::string classifier_name(const ClassifierSpec& spec);
ClassifierSpec parse_classifier(std::string_view name, int k = 3);
// Throws kUnimplemented for the reserved random-forest and
// logistic-regression identifiers.
std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

struct FoldPlan {
  int folds = 10;
  std::uint64_t seed = 0;
  std::vector<int> assignment;  // item index -> fold
};

// Stratified assignment: within each label, items are ordered by a hash of
// (seed, query_id) and dealt round-robin, continuing the deal across labels.
// Independent of input order; fold sizes differ by at most one.
FoldPlan make_fold_plan(const AttackDataset& dataset, int folds, std::uint64_t seed);

struct Confusion {
  std::size_t tp = 0;  // real predicted real
  std::size_t tn = 0;  // dummy predicted dummy
  std::size_t fp = 0;  // dummy predicted real
  std::size_t fn = 0;  // real predicted dummy
};

struct AccuracyReport {
  std::string classifier;
  int folds = 0;
  double overall_accuracy = 0.0;
  std::vector<double> per_fold;
  Confusion confusion;
};

AccuracyReport cross_validate(const AttackDataset& dataset, const ClassifierSpec& spec,
                              const FoldPlan& plan);
AccuracyReport cross_validate(const AttackDataset& dataset, Classifier& classifier,
                              const FoldPlan& plan);

enum class LogFormat { kTsvQueries, kJsonlObfuscated };
LogFormat parse_log_format(std::string_view name);

struct IngestResult {
  std::vector<LabeledText> records;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;  // one per skipped line, with its number
};

// TSV: AnonID \t Query \t QueryTime ..., header optional; ids are
// "<prefix><line>". JSONL: obfuscator output; text is the rendered segments.
IngestResult ingest_query_log(const std::filesystem::path& path, int label, LogFormat format,
                              std::string_view id_prefix = "");
IngestResult parse_query_log(std::string_view content, int label, LogFormat format,
                             std::string_view id_prefix = "");

}  // namespace distort
