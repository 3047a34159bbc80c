// Acceptance gate. Each TEST is one criterion; the listener below prints one
// PASS/FAIL line per criterion together with the measured values.

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "distort/attack.hpp"
#include "distort/experiment.hpp"
#include "distort/json_io.hpp"
#include "distort/metrics.hpp"
#include "distort/obfuscator.hpp"
#include "distort/relevance.hpp"
#include "distort/report.hpp"
#include "distort/searchsim.hpp"
#include "distort/session.hpp"
#include "distort/strings.hpp"
#include "distort/synth.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace distort;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr double kFastLimitSeconds = 1.0;
constexpr double kTensionLimitSeconds = 30.0;
constexpr double kExposureLimitSeconds = 60.0;
constexpr int kSeedCount = 10;
constexpr int kRequiredSeeds = 8;
constexpr double kOracleTolerance = 1e-9;
constexpr double kSeparableAccuracy = 0.95;
constexpr double kChanceAccuracy = 0.5;
constexpr double kChanceTolerance = 0.1;
constexpr int kShuffleSeeds = 20;
constexpr double kExposureCeiling = 0.15;
// KNN k=3, 10 folds, fold seed 0 on distortion-vs-real-v1.
constexpr double kFrozenFixtureAccuracy = 334.0 / 370.0;

std::map<std::string, std::string>& details() {
  static std::map<std::string, std::string> d;
  return d;
}

void note(const std::string& text) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto& slot = details()[info->name()];
  if (!slot.empty()) slot += "; ";
  slot += text;
}

std::string fmt(double v) { return format_number(v); }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

IntentQuery toyota_intent(const Lexicon& lex) {
  IntentQuery intent{"buy a toyota 2014", std::string("buy"), QueryCategory::kTransactional};
  intent.category = categorize(intent.phrase, lex);
  return intent;
}

class CriterionPrinter : public ::testing::EmptyTestEventListener {
 public:
  void OnTestEnd(const ::testing::TestInfo& info) override {
    const bool ok = info.result()->Passed();
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", info.name(), details()[info.name()].c_str());
    std::fflush(stdout);
  }
};

struct Shared {
  PipelineConfig pipeline = testing_support::shipped_pipeline();
  Lexicon lexicon = testing_support::shipped_lexicon();
  Corpus corpus =
      load_corpus(testing_support::data_dir() / "corpus" / "standard.jsonl", pipeline);
  AdInventory inventory =
      load_ad_inventory(testing_support::data_dir() / "ads" / "inventory.jsonl");
};

const Shared& shared() {
  static const Shared s;
  return s;
}

// Equal-sized labels over two disjoint vocabularies; every ordered word pair
// once, 182 items per label.
std::vector<LabeledText> separable_set() {
  const std::vector<std::string> cars = {"toyota", "honda",   "sedan",  "dealer", "engine",
                                         "tyres",  "hybrid",  "mileage", "coupe", "brakes",
                                         "diesel", "gearbox", "wagon",  "lease"};
  const std::vector<std::string> misc = {"lottery", "weather", "recipe", "lyrics",  "movie",
                                         "zoo",     "museum",  "horoscope", "poetry", "garden",
                                         "chess",   "opera",   "bakery", "knitting"};
  std::vector<LabeledText> out;
  std::size_t n = 0;
  for (std::size_t i = 0; i < cars.size(); ++i) {
    for (std::size_t j = 0; j < cars.size(); ++j) {
      if (i == j) continue;
      out.push_back({"d" + std::to_string(n), cars[i] + " " + cars[j], kDummyLabel});
      out.push_back({"r" + std::to_string(n), misc[i] + " " + misc[j], kRealLabel});
      ++n;
    }
  }
  return out;
}

}  // namespace

TEST(Acceptance, PermutationIdentity) {
  const auto start = Clock::now();
  EXPECT_EQ(count_permutations({5, 5}), 120u);
  const std::set<QueryCategory> all(kAllCategories.begin(), kAllCategories.end());
  const auto patterns = enumerate_arrangements(all, 5);
  std::set<std::string> distinct;
  for (const auto& p : patterns) distinct.insert(p.format());
  EXPECT_EQ(patterns.size(), 120u);
  EXPECT_EQ(distinct.size(), 120u);
  const double elapsed = seconds_since(start);
  EXPECT_LT(elapsed, kFastLimitSeconds);
  note("P(5,5)=" + std::to_string(count_permutations({5, 5})) + ", distinct=" +
       std::to_string(distinct.size()) + ", " + fmt(elapsed) + " s");
}

TEST(Acceptance, PatternSetFidelity) {
  const auto& s = shared();
  const auto start = Clock::now();
  const auto patterns = parse_pattern_set(kReferencePatternSet);
  EXPECT_EQ(patterns.size(), 15u);
  Rng rng(2017);
  BatchOptions opts;
  opts.include_original = true;
  opts.assemble.verb_substitution = true;
  const auto batch = generate_batch(toyota_intent(s.lexicon), patterns, 8, s.lexicon, rng, opts);
  std::set<std::string> ids;
  for (const auto& q : batch) ids.insert(q.id);
  EXPECT_EQ(batch.size(), 121u);
  EXPECT_EQ(ids.size(), 121u);
  const double elapsed = seconds_since(start);
  EXPECT_LT(elapsed, kFastLimitSeconds);
  note("patterns=" + std::to_string(patterns.size()) + ", queries=" + std::to_string(batch.size()) +
       ", unique ids=" + std::to_string(ids.size()) + ", " + fmt(elapsed) + " s");
}

TEST(Acceptance, Q17Precision) {
  const auto& s = shared();
  const auto dir = testing_support::data_dir() / "fixtures" / "q17";
  const Corpus corpus = load_corpus(dir / "corpus.jsonl", s.pipeline);
  const auto spec = nlohmann::json::parse(read_file((dir / "query.json").string()));
  const auto query = obfuscated_query_from_json(spec);
  const auto page = execute(corpus, query, spec["top_k"].get<std::size_t>());
  const auto counts = relevance_count({page}, corpus, spec["relevance_phrase"].get<std::string>(),
                                      s.pipeline);
  const auto& row = counts.at(query.id);
  const auto p = precision(row.relevant, row.retrieved);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(query.pattern.format(), "NITP");
  EXPECT_EQ(row.retrieved, 106u);
  EXPECT_EQ(row.relevant, 53u);
  EXPECT_EQ(*p, 0.5);
  note(query.id + " " + query.pattern.format() + ": retrieved=" + std::to_string(row.retrieved) +
       ", relevant=" + std::to_string(row.relevant) + ", precision=" + fmt(*p));
}

TEST(Acceptance, PrivacyUsabilityTension) {
  const auto& s = shared();
  const auto start = Clock::now();
  EXPECT_EQ(s.corpus.size(), 1000u);
  const RelevancePredicate predicate("buy toyota", s.pipeline);
  const auto patterns = parse_pattern_set(kReferencePatternSet);
  int holding = 0;
  std::string per_seed;
  for (int seed = 1; seed <= kSeedCount; ++seed) {
    Rng master(static_cast<std::uint64_t>(seed));
    Rng rng = master.fork(1);
    BatchOptions opts;
    opts.include_original = true;
    opts.assemble.verb_substitution = true;
    const auto batch = generate_batch(toyota_intent(s.lexicon), patterns, 8, s.lexicon, rng, opts);
    std::vector<ResultPage> pages;
    for (const auto& q : batch) pages.push_back(execute(s.corpus, q, 100));
    const auto counts = relevance_count(pages, s.corpus, predicate);
    std::vector<double> len2, len5;
    for (const auto& q : batch) {
      const auto& c = counts.at(q.id);
      const auto p = precision(c.relevant, c.retrieved);
      if (!p) continue;
      if (q.pattern.size() == 2) len2.push_back(*p);
      if (q.pattern.size() == 5) len5.push_back(*p);
    }
    ASSERT_FALSE(len2.empty());
    ASSERT_FALSE(len5.empty());
    const double m2 = median(len2), m5 = median(len5);
    if (m5 <= m2) ++holding;
    per_seed += (per_seed.empty() ? "" : " ") + fmt(m5) + "<=" + fmt(m2);
  }
  const double elapsed = seconds_since(start);
  EXPECT_GE(holding, kRequiredSeeds);
  EXPECT_LT(elapsed, kTensionLimitSeconds);
  note("median(len5)<=median(len2) in " + std::to_string(holding) + "/" +
       std::to_string(kSeedCount) + " seeds [" + per_seed + "], " + fmt(elapsed) + " s");
}

TEST(Acceptance, TfidfOracleEquivalence) {
  const auto& s = shared();
  std::vector<std::vector<std::string>> corpora;
  std::vector<std::string> sample;
  for (const auto& d : standard_corpus(kStandardCorpusSeed, 40)) sample.push_back(indexed_text(d));
  corpora.push_back(sample);
  std::vector<std::string> q17;
  for (const auto& d : q17_fixture().docs) q17.push_back(indexed_text(d));
  corpora.push_back(q17);
  std::vector<std::string> queries;
  for (const auto& q : distortion_fixture_queries(s.lexicon)) queries.push_back(q.rendered());
  corpora.push_back(queries);

  double worst = 0.0;
  std::size_t cells = 0;
  for (const auto& texts : corpora) {
    ASSERT_LE(texts.size(), 200u);
    for (int ngram_max : {1, 2}) {
      PipelineConfig config = s.pipeline;
      config.ngram_max = ngram_max;
      std::vector<TextDoc> docs;
      for (std::size_t i = 0; i < texts.size(); ++i) docs.emplace_back("t" + std::to_string(i), texts[i]);
      const auto m = build_matrix(docs, config);
      const auto o = oracle::tfidf(texts, config);
      ASSERT_EQ(m.terms, o.terms);
      for (std::size_t r = 0; r < texts.size(); ++r) {
        for (std::size_t c = 0; c < o.terms.size(); ++c) {
          worst = std::max(worst, std::abs(m.rows[r][c] - o.rows[r][c]));
          ++cells;
        }
      }
    }
  }
  EXPECT_LE(worst, kOracleTolerance);
  note("max |delta|=" + fmt(worst) + " over " + std::to_string(cells) + " cells");
}

TEST(Acceptance, AttackSanity) {
  const auto& s = shared();
  const auto texts = separable_set();
  const auto ds = build_attack_dataset(texts, s.pipeline);
  const ClassifierSpec knn{ClassifierKind::kKnn, 3};
  const double separable = cross_validate(ds, knn, make_fold_plan(ds, 10, 0)).overall_accuracy;
  EXPECT_GE(separable, kSeparableAccuracy);

  std::vector<double> shuffled;
  int within = 0;
  for (int seed = 1; seed <= kShuffleSeeds; ++seed) {
    std::vector<int> labels;
    for (const auto& t : texts) labels.push_back(t.label);
    Rng rng(static_cast<std::uint64_t>(seed));
    for (std::size_t i = labels.size() - 1; i > 0; --i) {
      std::swap(labels[i], labels[rng.uniform_index(i + 1)]);
    }
    auto relabeled = texts;
    for (std::size_t i = 0; i < relabeled.size(); ++i) relabeled[i].label = labels[i];
    const auto shuffled_ds = build_attack_dataset(relabeled, s.pipeline);
    const double acc = cross_validate(shuffled_ds, knn,
                                      make_fold_plan(shuffled_ds, 10, static_cast<std::uint64_t>(seed)))
                           .overall_accuracy;
    shuffled.push_back(acc);
    if (std::abs(acc - kChanceAccuracy) <= kChanceTolerance) ++within;
  }
  EXPECT_EQ(within, kShuffleSeeds);
  const double mean = std::accumulate(shuffled.begin(), shuffled.end(), 0.0) / kShuffleSeeds;
  EXPECT_NEAR(mean, kChanceAccuracy, kChanceTolerance);

  const auto dir = testing_support::data_dir() / "fixtures" / "distortion-vs-real-v1";
  auto fixture = ingest_query_log(dir / "obfuscated.jsonl", kDummyLabel, LogFormat::kJsonlObfuscated).records;
  const auto real = ingest_query_log(dir / "real.tsv", kRealLabel, LogFormat::kTsvQueries).records;
  fixture.insert(fixture.end(), real.begin(), real.end());
  std::vector<std::string> raw, ids;
  std::vector<int> labels;
  for (const auto& t : fixture) {
    raw.push_back(t.text);
    ids.push_back(t.query_id);
    labels.push_back(t.label);
  }
  const auto fixture_ds = build_attack_dataset(fixture, s.pipeline);
  const double library = cross_validate(fixture_ds, knn, make_fold_plan(fixture_ds, 10, 0)).overall_accuracy;
  const double straight = oracle::knn_cv_accuracy(oracle::tfidf(raw, s.pipeline).rows, ids, labels, 10, 0, 3);
  EXPECT_LE(std::abs(library - straight), kOracleTolerance);
  EXPECT_LE(std::abs(library - kFrozenFixtureAccuracy), kOracleTolerance);

  const auto [lo, hi] = std::minmax_element(shuffled.begin(), shuffled.end());
  note("separable=" + fmt(separable) + ", shuffled in [" + fmt(*lo) + ", " + fmt(*hi) +
       "] mean " + fmt(mean) + " (" + std::to_string(within) + "/" + std::to_string(kShuffleSeeds) +
       " within 0.1), fixture library=" + fmt(library) + " oracle=" + fmt(straight) +
       " frozen=" + fmt(kFrozenFixtureAccuracy));
}

TEST(Acceptance, ExposureReduction) {
  const auto& s = shared();
  const auto start = Clock::now();
  const auto intent = toyota_intent(s.lexicon);
  const RelevancePredicate predicate("buy toyota", s.pipeline);
  const auto patterns = parse_pattern_set(kReferencePatternSet);
  const CategoryPattern intent_only({intent.category});
  int below = 0, under_ceiling = 0;
  std::string per_seed;
  for (int seed = 1; seed <= kSeedCount; ++seed) {
    Rng master(static_cast<std::uint64_t>(seed));
    Rng generate_rng = master.fork(1);
    Rng session_rng = master.fork(2);
    Rng baseline_rng = session_rng;

    BatchOptions opts;
    opts.include_original = true;
    opts.assemble.verb_substitution = true;
    const auto obfuscated = generate_batch(intent, patterns, 8, s.lexicon, generate_rng, opts);
    Rng baseline_gen(0);
    const auto plain = generate_batch(intent, {intent_only}, obfuscated.size(), s.lexicon, baseline_gen);

    const auto with = run_session(intent, obfuscated, s.corpus, s.inventory, predicate,
                                  {2, 0.5, true}, 7, 42, session_rng);
    const auto without = run_session(intent, plain, s.corpus, s.inventory, predicate,
                                     {2, 0.0, true}, 7, 42, baseline_rng);
    EXPECT_EQ(with.exposure.total_ads, 294u);
    if (with.exposure.exposure < without.exposure.exposure) ++below;
    if (with.exposure.exposure <= kExposureCeiling) ++under_ceiling;
    per_seed += (per_seed.empty() ? "" : " ") + std::to_string(with.exposure.specific_ads) + "<" +
                std::to_string(without.exposure.specific_ads);
  }
  const double elapsed = seconds_since(start);
  EXPECT_GE(below, kRequiredSeeds);
  EXPECT_EQ(under_ceiling, kSeedCount);
  EXPECT_LT(elapsed, kExposureLimitSeconds);
  note("below baseline in " + std::to_string(below) + "/" + std::to_string(kSeedCount) +
       ", <=0.15 in " + std::to_string(under_ceiling) + "/" + std::to_string(kSeedCount) +
       " (specific of 294: " + per_seed + "), " + fmt(elapsed) + " s");
}

TEST(Acceptance, Determinism) {
  testing_support::TempDir a("acceptance-run-a"), b("acceptance-run-b");
  const auto config = ExperimentConfig::with_data_dir(testing_support::data_dir());
  emit_report(run_experiment(config), a.path());
  emit_report(run_experiment(config), b.path());
  const auto first = read_file((a.path() / "report.json").string());
  const auto second = read_file((b.path() / "report.json").string());
  EXPECT_EQ(first, second);
  EXPECT_FALSE(first.empty());
  note("report.json " + std::to_string(first.size()) + " bytes, identical=" +
       (first == second ? "yes" : "no"));
}

TEST(Acceptance, MetricExamples) {
  EXPECT_EQ(precision(53, 106).value(), 0.5);
  EXPECT_EQ(precision(17, 17).value(), 1.0);
  EXPECT_EQ(precision(0, 9).value(), 0.0);
  EXPECT_FALSE(precision(0, 0).has_value());
  EXPECT_EQ(recall(0, 60).value(), 0.0);
  EXPECT_EQ(recall(60, 60).value(), 1.0);
  EXPECT_FALSE(recall(0, 0).has_value());
  EXPECT_EQ(euclidean(std::vector<double>{0, 0}, std::vector<double>{3, 4}), 5.0);
  EXPECT_EQ(euclidean(std::vector<double>{2, 7, 1}, std::vector<double>{2, 7, 1}), 0.0);
  note("precision(53,106)=" + fmt(*precision(53, 106)) + ", recall(60,60)=" + fmt(*recall(60, 60)) +
       ", euclid((0,0),(3,4))=" + fmt(euclidean(std::vector<double>{0, 0}, std::vector<double>{3, 4})));
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  auto& listeners = ::testing::UnitTest::GetInstance()->listeners();
  listeners.Append(new CriterionPrinter);
  return RUN_ALL_TESTS();
}
