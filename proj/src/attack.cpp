#include "distort/attack.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_set>

#include "distort/error.hpp"
#include "distort/rng.hpp"
#include "distort/strings.hpp"
#include "json.hpp"

namespace distort {

void AttackDataset::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto& item : items) {
    if (!ids.insert(item.query_id).second) {
      throw invalid_argument("duplicate query id '" + item.query_id + "' in attack dataset");
    }
    if (item.vector.size() != vocabulary.size()) {
      throw invalid_argument("vector of '" + item.query_id + "' has length " +
                             std::to_string(item.vector.size()) + ", vocabulary has " +
                             std::to_string(vocabulary.size()));
    }
    if (item.label != kDummyLabel && item.label != kRealLabel) {
      throw invalid_argument("label of '" + item.query_id + "' must be 0 or 1");
    }
  }
}

AttackDataset build_attack_dataset(const std::vector<LabeledText>& texts,
                                   const PipelineConfig& config) {
  std::vector<TextDoc> docs;
  docs.reserve(texts.size());
  for (const auto& t : texts) docs.emplace_back(t.query_id, t.text);
  WordVectorMatrix m = build_matrix(docs, config);

  AttackDataset ds;
  ds.vocabulary = std::move(m.terms);
  ds.items.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    ds.items.push_back({texts[i].query_id, std::move(m.rows[i]), texts[i].label});
  }
  ds.validate();
  return ds;
}

double euclidean(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw invalid_argument("vector length mismatch: " + std::to_string(x.size()) + " vs " +
                           std::to_string(y.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

int knn_classify(std::span<const LabeledQueryVector> train, std::span<const double> probe, int k) {
  if (train.empty()) throw invalid_argument("KNN needs a non-empty training set");
  if (k < 1 || k % 2 == 0) throw invalid_argument("KNN k must be a positive odd integer");
  if (static_cast<std::size_t>(k) > train.size()) {
    throw invalid_argument("KNN k = " + std::to_string(k) + " exceeds training size " +
                           std::to_string(train.size()));
  }
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) dist.emplace_back(euclidean(train[i].vector, probe), i);
  auto closer = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return train[a.second].query_id < train[b.second].query_id;
  };
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end(), closer);
  int real_votes = 0;
  for (int i = 0; i < k; ++i) real_votes += train[dist[static_cast<std::size_t>(i)].second].label;
  return 2 * real_votes > k ? kRealLabel : kDummyLabel;
}

namespace {

class NaiveBayesModel {
 public:
  explicit NaiveBayesModel(std::span<const LabeledQueryVector> train) {
    if (train.empty()) throw invalid_argument("naive Bayes needs a non-empty training set");
    const std::size_t vocab = train.front().vector.size();
    std::array<std::size_t, 2> n{0, 0};
    std::array<std::vector<double>, 2> term_mass{std::vector<double>(vocab, 0.0),
                                                 std::vector<double>(vocab, 0.0)};
    for (const auto& item : train) {
      if (item.vector.size() != vocab) throw invalid_argument("inconsistent vector lengths");
      const auto c = static_cast<std::size_t>(item.label);
      ++n.at(c);
      for (std::size_t j = 0; j < vocab; ++j) term_mass[c][j] += item.vector[j];
    }
    if (n[0] == 0 || n[1] == 0) {
      throw invalid_argument("naive Bayes requires both labels in the training set");
    }
    for (std::size_t c = 0; c < 2; ++c) {
      log_prior_[c] = std::log(static_cast<double>(n[c]) / static_cast<double>(train.size()));
      const double total =
          std::accumulate(term_mass[c].begin(), term_mass[c].end(), 0.0) +
          static_cast<double>(vocab);
      log_cond_[c].resize(vocab);
      for (std::size_t j = 0; j < vocab; ++j) {
        log_cond_[c][j] = std::log((term_mass[c][j] + 1.0) / total);
      }
    }
  }

  int predict(std::span<const double> probe) const {
    if (probe.size() != log_cond_[0].size()) throw invalid_argument("probe length mismatch");
    std::array<double, 2> score = log_prior_;
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t j = 0; j < probe.size(); ++j) {
        if (probe[j] != 0.0) score[c] += probe[j] * log_cond_[c][j];
      }
    }
    return score[1] > score[0] ? kRealLabel : kDummyLabel;
  }

 private:
  std::array<double, 2> log_prior_{};
  std::array<std::vector<double>, 2> log_cond_;
};

class KnnClassifier final : public Classifier {
 public:
  explicit KnnClassifier(int k) : k_(k) {}
  std::string name() const override { return "knn(k=" + std::to_string(k_) + ")"; }
  void fit(std::span<const LabeledQueryVector> train) override {
    train_.assign(train.begin(), train.end());
  }
  int predict(std::span<const double> probe) const override {
    return knn_classify(train_, probe, k_);
  }

 private:
  int k_;
  std::vector<LabeledQueryVector> train_;
};

class NaiveBayesClassifier final : public Classifier {
 public:
  std::string name() const override { return "naive_bayes"; }
  void fit(std::span<const LabeledQueryVector> train) override { model_.emplace(train); }
  int predict(std::span<const double> probe) const override {
    if (!model_) throw invalid_argument("naive Bayes used before fit");
    return model_->predict(probe);
  }

 private:
  std::optional<NaiveBayesModel> model_;
};

}  // namespace

int nb_classify(std::span<const LabeledQueryVector> train, std::span<const double> probe) {
  return NaiveBayesModel(train).predict(probe);
}

std::string classifier_name(const ClassifierSpec& spec) {
  switch (spec.kind) {
    case ClassifierKind::kKnn:
      return "knn";
    case ClassifierKind::kNaiveBayes:
      return "naive_bayes";
    case ClassifierKind::kRandomForest:
      return "random_forest";
    case ClassifierKind::kLogisticRegression:
      return "logistic_regression";
  }
  return "?";
}

ClassifierSpec parse_classifier(std::string_view name, int k) {
  if (name == "knn") return {ClassifierKind::kKnn, k};
  if (name == "nb" || name == "naive_bayes") return {ClassifierKind::kNaiveBayes, k};
  if (name == "rf" || name == "random_forest") return {ClassifierKind::kRandomForest, k};
  if (name == "lr" || name == "logistic_regression") return {ClassifierKind::kLogisticRegression, k};
  throw invalid_argument("unknown classifier '" + std::string(name) + "'");
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
  switch (spec.kind) {
    case ClassifierKind::kKnn:
      if (spec.k < 1 || spec.k % 2 == 0) {
        throw invalid_argument("KNN k must be a positive odd integer");
      }
      return std::make_unique<KnnClassifier>(spec.k);
    case ClassifierKind::kNaiveBayes:
      return std::make_unique<NaiveBayesClassifier>();
    case ClassifierKind::kRandomForest:
    case ClassifierKind::kLogisticRegression:
      break;
  }
  throw Error(ErrorKind::kUnimplemented,
              "classifier '" + classifier_name(spec) + "' is reserved but not built in");
}

FoldPlan make_fold_plan(const AttackDataset& dataset, int folds, std::uint64_t seed) {
  if (folds < 2) throw invalid_argument("fold count must be >= 2");
  if (static_cast<std::size_t>(folds) > dataset.items.size()) {
    throw invalid_argument("fold count " + std::to_string(folds) + " exceeds dataset size " +
                           std::to_string(dataset.items.size()));
  }
  FoldPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.assignment.assign(dataset.items.size(), 0);

  const std::uint64_t salt = mix64(seed);
  std::size_t dealt = 0;
  for (int label : {kDummyLabel, kRealLabel}) {
    std::vector<std::pair<std::uint64_t, std::size_t>> order;
    for (std::size_t i = 0; i < dataset.items.size(); ++i) {
      if (dataset.items[i].label == label) {
        order.emplace_back(mix64(fnv1a64(dataset.items[i].query_id) ^ salt), i);
      }
    }
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return dataset.items[a.second].query_id < dataset.items[b.second].query_id;
    });
    for (const auto& [_, i] : order) {
      plan.assignment[i] = static_cast<int>(dealt++ % static_cast<std::size_t>(folds));
    }
  }
  return plan;
}

AccuracyReport cross_validate(const AttackDataset& dataset, Classifier& classifier,
                              const FoldPlan& plan) {
  dataset.validate();
  if (plan.assignment.size() != dataset.items.size()) {
    throw invalid_argument("fold plan does not match the dataset");
  }
  AccuracyReport report;
  report.classifier = classifier.name();
  report.folds = plan.folds;
  std::size_t correct_total = 0;

  for (int f = 0; f < plan.folds; ++f) {
    std::vector<LabeledQueryVector> train;
    std::vector<std::size_t> test;
    std::array<bool, 2> seen{false, false};
    for (std::size_t i = 0; i < dataset.items.size(); ++i) {
      if (plan.assignment[i] == f) {
        test.push_back(i);
      } else {
        train.push_back(dataset.items[i]);
        seen.at(static_cast<std::size_t>(dataset.items[i].label)) = true;
      }
    }
    if (!seen[0] || !seen[1]) {
      throw invalid_argument("training split for fold " + std::to_string(f) +
                             " lacks a class; dataset too small for stratification");
    }
    classifier.fit(train);
    std::size_t correct = 0;
    for (auto i : test) {
      const auto& item = dataset.items[i];
      const int predicted = classifier.predict(item.vector);
      if (predicted == item.label) ++correct;
      if (item.label == kRealLabel) {
        ++(predicted == kRealLabel ? report.confusion.tp : report.confusion.fn);
      } else {
        ++(predicted == kRealLabel ? report.confusion.fp : report.confusion.tn);
      }
    }
    correct_total += correct;
    report.per_fold.push_back(test.empty() ? 0.0
                                           : static_cast<double>(correct) /
                                                 static_cast<double>(test.size()));
  }
  report.overall_accuracy =
      static_cast<double>(correct_total) / static_cast<double>(dataset.items.size());
  return report;
}

AccuracyReport cross_validate(const AttackDataset& dataset, const ClassifierSpec& spec,
                              const FoldPlan& plan) {
  auto classifier = make_classifier(spec);
  auto report = cross_validate(dataset, *classifier, plan);
  report.classifier = classifier_name(spec);
  return report;
}

LogFormat parse_log_format(std::string_view name) {
  if (name == "tsv-queries" || name == "tsv") return LogFormat::kTsvQueries;
  if (name == "jsonl-obfuscated" || name == "jsonl") return LogFormat::kJsonlObfuscated;
  throw invalid_argument("unknown query-log format '" + std::string(name) + "'");
}

IngestResult parse_query_log(std::string_view content, int label, LogFormat format,
                             std::string_view id_prefix) {
  if (label != kDummyLabel && label != kRealLabel) throw invalid_argument("label must be 0 or 1");
  std::string prefix(id_prefix);
  if (prefix.empty() && format == LogFormat::kTsvQueries) {
    prefix = label == kRealLabel ? "real-" : "dummy-";
  }
  IngestResult result;
  auto skip = [&](std::size_t line, const std::string& why) {
    ++result.skipped;
    result.warnings.push_back("line " + std::to_string(line) + ": " + why);
  };

  const auto lines = split(content, '\n');
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string line = lines[n];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    if (format == LogFormat::kTsvQueries) {
      const auto cols = split(line, '\t');
      if (line_no == 1 && iequals(trim(cols[0]), "AnonID")) continue;
      if (cols.size() < 2 || trim(cols[1]).empty()) {
        skip(line_no, "missing query column");
        continue;
      }
      result.records.push_back({prefix + std::to_string(line_no), std::string(trim(cols[1])), label});
    } else {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        skip(line_no, "malformed JSON");
        continue;
      }
      if (!obj.is_object() || !obj.contains("segments") || !obj["segments"].is_array()) {
        skip(line_no, "missing segments array");
        continue;
      }
      std::vector<std::string> segments;
      bool ok = true;
      for (const auto& s : obj["segments"]) {
        if (!s.is_string()) {
          ok = false;
          break;
        }
        segments.push_back(s.get<std::string>());
      }
      if (!ok || segments.empty()) {
        skip(line_no, "segments must be a non-empty string array");
        continue;
      }
      std::string id = obj.contains("id") && obj["id"].is_string()
                           ? obj["id"].get<std::string>()
                           : "line-" + std::to_string(line_no);
      result.records.push_back({prefix + id, join(segments, ", "), label});
    }
  }
  return result;
}

IngestResult ingest_query_log(const std::filesystem::path& path, int label, LogFormat format,
                              std::string_view id_prefix) {
  if (!std::filesystem::exists(path)) throw io_error("query log not found: " + path.string());
  return parse_query_log(read_file(path.string()), label, format, id_prefix);
}

}  // namespace distort
