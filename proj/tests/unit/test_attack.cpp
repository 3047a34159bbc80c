#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "distort/attack.hpp"
#include "distort/error.hpp"
#include "distort/rng.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace distort;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform_unit() * 10.0 - 5.0;
  return v;
}

// Two well separated vocabularies.
std::vector<LabeledText> separable_texts(std::size_t per_label) {
  const std::vector<std::string> a = {"toyota", "honda", "dealer", "sedan", "engine", "tyres"};
  const std::vector<std::string> b = {"lottery", "weather", "recipe", "lyrics", "movie", "zoo"};
  std::vector<LabeledText> out;
  for (std::size_t i = 0; i < per_label; ++i) {
    out.push_back({"d" + std::to_string(i), a[i % a.size()] + " " + a[(i / a.size() + i + 1) % a.size()], 0});
    out.push_back({"r" + std::to_string(i), b[i % b.size()] + " " + b[(i / b.size() + i + 1) % b.size()], 1});
  }
  return out;
}

}  // namespace

TEST(Euclidean, Examples) {
  EXPECT_DOUBLE_EQ(euclidean(std::vector<double>{0, 0}, std::vector<double>{3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(euclidean(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean(std::vector<double>{-1, -1}, std::vector<double>{2, 3}), 5.0);
  EXPECT_THROW(euclidean(std::vector<double>{1}, std::vector<double>{1, 2}), Error);
}

TEST(Euclidean, MetricAxioms) {
  Rng rng(31);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const auto x = random_vector(rng, n), y = random_vector(rng, n), z = random_vector(rng, n);
    const double xy = euclidean(x, y);
    EXPECT_GE(xy, 0.0);
    EXPECT_EQ(xy, euclidean(y, x));
    EXPECT_EQ(euclidean(x, x), 0.0);
    EXPECT_LE(euclidean(x, z), xy + euclidean(y, z) + 1e-12);
  }
}

TEST(Knn, MajorityOfNearest) {
  const std::vector<LabeledQueryVector> train = {
      {"a", {0, 0}, 0}, {"b", {0, 1}, 0}, {"c", {5, 5}, 1}, {"d", {5, 6}, 1}, {"e", {6, 5}, 1}};
  EXPECT_EQ(knn_classify(train, std::vector<double>{0.2, 0.3}, 1), 0);
  EXPECT_EQ(knn_classify(train, std::vector<double>{0.2, 0.3}, 3), 0);
  EXPECT_EQ(knn_classify(train, std::vector<double>{5, 5.5}, 3), 1);
  EXPECT_EQ(knn_classify(train, std::vector<double>{0, 0}, 5), 1);
}

TEST(Knn, DistanceTiesBrokenById) {
  const std::vector<LabeledQueryVector> train = {{"b", {1, 0}, 1}, {"a", {-1, 0}, 0}};
  EXPECT_EQ(knn_classify(train, std::vector<double>{0, 0}, 1), 0);
  const std::vector<LabeledQueryVector> swapped = {{"a", {1, 0}, 1}, {"b", {-1, 0}, 0}};
  EXPECT_EQ(knn_classify(swapped, std::vector<double>{0, 0}, 1), 1);
}

TEST(Knn, Validation) {
  const std::vector<LabeledQueryVector> train = {{"a", {0}, 0}, {"b", {1}, 1}};
  EXPECT_THROW(knn_classify(train, std::vector<double>{0}, 2), Error);
  EXPECT_THROW(knn_classify(train, std::vector<double>{0}, 3), Error);
  EXPECT_THROW(knn_classify({}, std::vector<double>{0}, 1), Error);
}

TEST(NaiveBayes, Examples) {
  const std::vector<LabeledQueryVector> train = {
      {"a", {3, 0, 1}, 0}, {"b", {2, 0, 0}, 0}, {"c", {0, 3, 1}, 1}, {"d", {0, 2, 0}, 1}};
  EXPECT_EQ(nb_classify(train, std::vector<double>{1, 0, 0}), 0);
  EXPECT_EQ(nb_classify(train, std::vector<double>{0, 1, 0}), 1);
  // Symmetric evidence and equal priors: ties go to the dummy label.
  EXPECT_EQ(nb_classify(train, std::vector<double>{0, 0, 1}), 0);
  const std::vector<LabeledQueryVector> one_class = {{"a", {1}, 0}, {"b", {2}, 0}};
  EXPECT_THROW(nb_classify(one_class, std::vector<double>{1}), Error);
}

TEST(NaiveBayes, MatchesHandComputedPosterior) {
  // Class masses: 0 -> {4, 1}, 1 -> {1, 2}; smoothed totals 7 and 5.
  const std::vector<LabeledQueryVector> train = {
      {"a", {4, 1}, 0}, {"b", {1, 2}, 1}, {"c", {0, 0}, 1}};
  const double s0 = std::log(1.0 / 3) + 2 * std::log(5.0 / 7) + 3 * std::log(2.0 / 7);
  const double s1 = std::log(2.0 / 3) + 2 * std::log(2.0 / 5) + 3 * std::log(3.0 / 5);
  EXPECT_EQ(nb_classify(train, std::vector<double>{2, 3}), s1 > s0 ? 1 : 0);
  EXPECT_GT(s1, s0);
}

TEST(Classifiers, ReservedNamesAreUnimplemented) {
  for (const std::string name : {"rf", "lr", "random_forest", "logistic_regression"}) {
    try {
      make_classifier(parse_classifier(name));
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kUnimplemented);
    }
  }
  EXPECT_EQ(classifier_name(parse_classifier("nb")), "naive_bayes");
  EXPECT_THROW(parse_classifier("svm"), Error);
}

TEST(Folds, PartitionIsStratifiedAndBalanced) {
  const auto ds = build_attack_dataset(separable_texts(37), {});
  const auto plan = make_fold_plan(ds, 10, 5);
  std::map<int, std::array<int, 2>> sizes;
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    ASSERT_GE(plan.assignment[i], 0);
    ASSERT_LT(plan.assignment[i], 10);
    ++sizes[plan.assignment[i]][static_cast<std::size_t>(ds.items[i].label)];
  }
  int min_total = 1000, max_total = 0;
  for (const auto& [f, s] : sizes) {
    min_total = std::min(min_total, s[0] + s[1]);
    max_total = std::max(max_total, s[0] + s[1]);
    EXPECT_GE(s[0], 3);
    EXPECT_GE(s[1], 3);
  }
  EXPECT_LE(max_total - min_total, 1);
  EXPECT_THROW(make_fold_plan(ds, 1, 0), Error);
  EXPECT_THROW(make_fold_plan(ds, 1000, 0), Error);
}

TEST(Folds, MatchOracleAndIgnoreInputOrder) {
  auto texts = separable_texts(25);
  const auto ds = build_attack_dataset(texts, {});
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (const auto& item : ds.items) {
    ids.push_back(item.query_id);
    labels.push_back(item.label);
  }
  EXPECT_EQ(make_fold_plan(ds, 10, 42).assignment, oracle::folds_of(ids, labels, 10, 42));

  std::reverse(texts.begin(), texts.end());
  const auto rev = build_attack_dataset(texts, {});
  const auto a = make_fold_plan(ds, 10, 42);
  const auto b = make_fold_plan(rev, 10, 42);
  std::map<std::string, int> by_id;
  for (std::size_t i = 0; i < ds.items.size(); ++i) by_id[ds.items[i].query_id] = a.assignment[i];
  for (std::size_t i = 0; i < rev.items.size(); ++i) {
    EXPECT_EQ(by_id.at(rev.items[i].query_id), b.assignment[i]);
  }
}

TEST(CrossValidate, SeparableDataIsLearned) {
  const auto ds = build_attack_dataset(separable_texts(40), {});
  const auto plan = make_fold_plan(ds, 10, 1);
  const auto knn = cross_validate(ds, ClassifierSpec{ClassifierKind::kKnn, 3}, plan);
  EXPECT_GE(knn.overall_accuracy, 0.95);
  EXPECT_EQ(knn.per_fold.size(), 10u);
  const auto& c = knn.confusion;
  EXPECT_EQ(c.tp + c.tn + c.fp + c.fn, ds.items.size());
  EXPECT_DOUBLE_EQ(knn.overall_accuracy, double(c.tp + c.tn) / double(ds.items.size()));
  const auto nb = cross_validate(ds, ClassifierSpec{ClassifierKind::kNaiveBayes, 3}, plan);
  EXPECT_GE(nb.overall_accuracy, 0.95);
}

TEST(Ingest, TsvWithHeader) {
  const auto r = parse_query_log(
      "AnonID\tQuery\tQueryTime\n1\tflorida lottery\t2006\n2\tweather\t2006\n3\tzoo hours\t2006\n",
      kRealLabel, LogFormat::kTsvQueries);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.records[0].query_id, "real-2");
  EXPECT_EQ(r.records[0].text, "florida lottery");
  EXPECT_EQ(r.records[2].label, kRealLabel);
  EXPECT_EQ(r.skipped, 0u);
}

TEST(Ingest, MissingColumnIsSkippedWithWarning) {
  const auto r = parse_query_log("1\tok query\n2\n3\tanother\n", kRealLabel, LogFormat::kTsvQueries);
  EXPECT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.skipped, 1u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("line 2"), std::string::npos);
}

TEST(Ingest, ShippedFixtureFiles) {
  const auto dir = testing_support::data_dir() / "fixtures" / "distortion-vs-real-v1";
  const auto obf = ingest_query_log(dir / "obfuscated.jsonl", kDummyLabel, LogFormat::kJsonlObfuscated);
  EXPECT_EQ(obf.records.size(), 122u);
  EXPECT_EQ(obf.skipped, 0u);
  EXPECT_EQ(obf.records[0].text, "buy a toyota 2014");
  const auto real = ingest_query_log(dir / "real.tsv", kRealLabel, LogFormat::kTsvQueries);
  EXPECT_EQ(real.records.size(), 248u);
  EXPECT_THROW(ingest_query_log(dir / "missing.tsv", 1, LogFormat::kTsvQueries), Error);
}

TEST(Ingest, MalformedJsonlLinesAreSkipped) {
  const auto r = parse_query_log(
      R"({"id":"Q1","segments":["a","b"]}
not json
{"id":"Q3"}
{"segments":[]}
)",
      kDummyLabel, LogFormat::kJsonlObfuscated, "obf-");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].query_id, "obf-Q1");
  EXPECT_EQ(r.records[0].text, "a, b");
  EXPECT_EQ(r.skipped, 3u);
}

TEST(CrossValidate, ShippedFixtureMatchesOracle) {
  const auto dir = testing_support::data_dir() / "fixtures" / "distortion-vs-real-v1";
  auto texts = ingest_query_log(dir / "obfuscated.jsonl", kDummyLabel, LogFormat::kJsonlObfuscated).records;
  const auto real = ingest_query_log(dir / "real.tsv", kRealLabel, LogFormat::kTsvQueries).records;
  texts.insert(texts.end(), real.begin(), real.end());
  const auto config = testing_support::shipped_pipeline();

  std::vector<std::string> raw, ids;
  std::vector<int> labels;
  for (const auto& t : texts) {
    raw.push_back(t.text);
    ids.push_back(t.query_id);
    labels.push_back(t.label);
  }
  const auto m = oracle::tfidf(raw, config);
  const auto ds = build_attack_dataset(texts, config);
  ASSERT_EQ(ds.vocabulary, m.terms);
  for (const std::uint64_t seed : {0ULL, 7ULL, 2017ULL}) {
    const auto report = cross_validate(ds, ClassifierSpec{ClassifierKind::kKnn, 3},
                                       make_fold_plan(ds, 10, seed));
    EXPECT_NEAR(report.overall_accuracy, oracle::knn_cv_accuracy(m.rows, ids, labels, 10, seed, 3),
                1e-9);
  }
}
