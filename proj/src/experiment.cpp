#include "distort/experiment.hpp"

#include <cstdlib>
#include <set>
#include <utility>

#include "distort/error.hpp"
#include "distort/json_io.hpp"
#include "distort/metrics.hpp"
#include "distort/relevance.hpp"
#include "distort/searchsim.hpp"
#include "distort/strings.hpp"

#ifndef DISTORT_SOURCE_DATA_DIR
#define DISTORT_SOURCE_DATA_DIR "data"
#endif

namespace distort {

using nlohmann::json;

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("DISTORT_DATA_DIR"); env && *env) return env;
  return DISTORT_SOURCE_DATA_DIR;
}

ExperimentConfig ExperimentConfig::with_data_dir(const std::filesystem::path& data_dir) {
  ExperimentConfig c;
  c.lexicon = data_dir / "lexicon.json";
  c.corpus = data_dir / "corpus" / "standard.jsonl";
  c.ads = data_dir / "ads" / "inventory.jsonl";
  c.stopwords = data_dir / "stopwords.txt";
  c.real_log = data_dir / "logs" / "real_style.tsv";
  return c;
}

void ExperimentConfig::validate() const {
  if (trim(intent).empty()) throw invalid_argument("config field 'intent' must be non-empty");
  if (top_k < 1) throw invalid_argument("config field 'top_k' must be >= 1");
  if (per_pattern < 1) throw invalid_argument("config field 'per_pattern' must be >= 1");
  if (days < 1) throw invalid_argument("config field 'days' must be >= 1");
  if (ads_per_day < 1) throw invalid_argument("config field 'ads_per_day' must be >= 1");
  policy.validate();
  const std::pair<const char*, const std::filesystem::path*> paths[] = {
      {"lexicon", &lexicon}, {"corpus", &corpus},       {"ads", &ads},
      {"stopwords", &stopwords}, {"real_log", &real_log}};
  for (const auto& [name, path] : paths) {
    if (path->empty() || !std::filesystem::exists(*path)) {
      throw io_error(std::string("config path '") + name + "' does not exist: " + path->string());
    }
  }
}

json to_json(const ExperimentConfig& c) {
  return {{"intent", c.intent},
          {"root_verb", c.root_verb},
          {"relevance_phrase", c.relevance_phrase},
          {"relevance_mode", relevance_mode_name(c.relevance_mode)},
          {"relevance_term", c.relevance_term},
          {"patterns", c.patterns},
          {"per_pattern", c.per_pattern},
          {"include_original", c.include_original},
          {"verb_substitution", c.verb_substitution},
          {"top_k", c.top_k},
          {"k_clicks", c.policy.k_clicks},
          {"decoy_fraction", c.policy.decoy_fraction},
          {"include_ads", c.policy.include_ads},
          {"days", c.days},
          {"ads_per_day", c.ads_per_day},
          {"folds", c.folds},
          {"knn_k", c.knn_k},
          {"classifiers", c.classifiers},
          {"seed", c.seed},
          {"lexicon", c.lexicon.filename().string()},
          {"corpus", c.corpus.filename().string()},
          {"ads", c.ads.filename().string()},
          {"stopwords", c.stopwords.filename().string()},
          {"real_log", c.real_log.filename().string()}};
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// Runs one pipeline stage, prefixing failures with its name.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage '") + name + "': " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("stage '") + name + "': " + e.what());
  }
}

}  // namespace

json to_json(const ExperimentReport& r) {
  json rows = json::array();
  for (const auto& q : r.queries) {
    rows.push_back({{"query_id", q.query_id},
                    {"pattern", q.pattern},
                    {"rendered", q.rendered},
                    {"retrieved", q.retrieved},
                    {"relevant", q.relevant},
                    {"precision", optional_number(q.precision)},
                    {"recall", optional_number(q.recall)}});
  }
  json attack = json::array();
  for (const auto& a : r.attack) attack.push_back(to_json(a));
  return {{"metadata", r.metadata},
          {"queries", rows},
          {"batch",
           {{"total_retrieved", r.total_retrieved},
            {"total_relevant_in_corpus", r.total_relevant_in_corpus},
            {"distinct_relevant_retrieved", r.distinct_relevant_retrieved},
            {"recall", optional_number(r.batch_recall)}}},
          {"attack",
           {{"obfuscated_queries", r.attack_obfuscated},
            {"real_queries", r.attack_real},
            {"classifiers", attack}}},
          {"session",
           {{"result_clicks", r.result_clicks},
            {"ad_clicks", r.ad_clicks},
            {"impressions", r.impressions},
            {"profile", to_json(r.profile)},
            {"warnings", r.warnings}}},
          {"exposure", to_json(r.exposure)}};
}

ExperimentReport report_from_json(const json& j) {
  try {
    ExperimentReport r;
    r.metadata = j.at("metadata");
    for (const auto& row : j.at("queries")) {
      QueryRow q;
      q.query_id = row.at("query_id").get<std::string>();
      q.pattern = row.at("pattern").get<std::string>();
      q.rendered = row.at("rendered").get<std::string>();
      q.retrieved = row.at("retrieved").get<std::size_t>();
      q.relevant = row.at("relevant").get<std::size_t>();
      q.precision = number_or_null(row.at("precision"));
      q.recall = number_or_null(row.at("recall"));
      r.queries.push_back(std::move(q));
    }
    const auto& batch = j.at("batch");
    r.total_retrieved = batch.at("total_retrieved").get<std::size_t>();
    r.total_relevant_in_corpus = batch.at("total_relevant_in_corpus").get<std::size_t>();
    r.distinct_relevant_retrieved = batch.at("distinct_relevant_retrieved").get<std::size_t>();
    r.batch_recall = number_or_null(batch.at("recall"));
    const auto& attack = j.at("attack");
    r.attack_obfuscated = attack.at("obfuscated_queries").get<std::size_t>();
    r.attack_real = attack.at("real_queries").get<std::size_t>();
    for (const auto& a : attack.at("classifiers")) r.attack.push_back(accuracy_from_json(a));
    const auto& session = j.at("session");
    r.result_clicks = session.at("result_clicks").get<std::size_t>();
    r.ad_clicks = session.at("ad_clicks").get<std::size_t>();
    r.impressions = session.at("impressions").get<std::size_t>();
    r.profile = profile_from_json(session.at("profile"));
    r.warnings = session.at("warnings").get<std::vector<std::string>>();
    r.exposure = exposure_from_json(j.at("exposure"));
    return r;
  } catch (const json::exception& e) {
    throw schema_error(std::string("malformed experiment report: ") + e.what());
  }
}

std::string dump_report(const ExperimentReport& report) { return to_json(report).dump(2) + "\n"; }

ExperimentArtifacts run_experiment_full(const ExperimentConfig& config) {
  stage("config", [&] { config.validate(); });

  PipelineConfig pipeline;
  const Lexicon lexicon = stage("load", [&] {
    pipeline.stopwords = load_stopwords(config.stopwords);
    return load_lexicon(config.lexicon);
  });
  const Corpus corpus = stage("load", [&] { return load_corpus(config.corpus, pipeline); });
  const AdInventory inventory = stage("load", [&] { return load_ad_inventory(config.ads); });

  Rng master(config.seed);
  Rng generate_rng = master.fork(1);
  Rng session_rng = master.fork(2);
  const std::uint64_t fold_seed = derive_seed(config.seed, 3);

  IntentQuery intent;
  intent.phrase = config.intent;
  intent.category = categorize(config.intent, lexicon);
  {
    std::string verb = config.root_verb;
    if (verb.empty()) {
      const auto words = split(to_lower(trim(config.intent)), ' ');
      if (!words.empty() && lexicon.verbs().contains(words.front())) verb = words.front();
    }
    if (!verb.empty()) intent.root_verb = verb;
  }

  ExperimentArtifacts out;
  out.queries = stage("generate", [&] {
    BatchOptions options;
    options.include_original = config.include_original;
    options.assemble.verb_substitution = config.verb_substitution;
    return generate_batch(intent, parse_pattern_set(config.patterns), config.per_pattern, lexicon,
                          generate_rng, options);
  });

  const std::vector<ResultPage> pages = stage("search", [&] {
    std::vector<ResultPage> pages;
    pages.reserve(out.queries.size());
    for (const auto& q : out.queries) pages.push_back(execute(corpus, q, config.top_k));
    return pages;
  });

  const RelevancePredicate predicate = stage("mine", [&] {
    const std::string& phrase =
        config.relevance_phrase.empty() ? config.intent : config.relevance_phrase;
    return RelevancePredicate(phrase, pipeline, config.relevance_mode, config.relevance_term);
  });

  ExperimentReport& report = out.report;
  stage("mine", [&] {
    const auto counts = relevance_count(pages, corpus, predicate);
    for (const auto& doc : corpus.docs()) {
      if (predicate.relevant(doc.snippet)) ++report.total_relevant_in_corpus;
    }
    std::set<std::string> relevant_seen;
    for (std::size_t i = 0; i < out.queries.size(); ++i) {
      const auto& q = out.queries[i];
      const auto& c = counts.at(q.id);
      QueryRow row{q.id, q.pattern.format(), q.rendered(), c.retrieved, c.relevant,
                   precision(c.relevant, c.retrieved),
                   recall(c.relevant, report.total_relevant_in_corpus)};
      report.total_retrieved += c.retrieved;
      for (const auto& hit : pages[i].hits) {
        if (predicate.relevant(corpus.find(hit.doc_id)->snippet)) relevant_seen.insert(hit.doc_id);
      }
      report.queries.push_back(std::move(row));
    }
    report.distinct_relevant_retrieved = relevant_seen.size();
    report.batch_recall = recall(relevant_seen.size(), report.total_relevant_in_corpus);
  });

  out.session = stage("session", [&] {
    SessionOptions options;
    options.top_k = config.top_k;
    return run_session(intent, out.queries, corpus, inventory, predicate, config.policy,
                       config.days, config.ads_per_day, session_rng, options);
  });
  report.profile = out.session.profile;
  report.exposure = out.session.exposure;
  report.warnings = out.session.warnings;
  for (const auto& entry : out.session.log) {
    if (const auto* ev = std::get_if<ClickEvent>(&entry)) {
      ++(ev->target_kind == TargetKind::kResult ? report.result_clicks : report.ad_clicks);
    } else {
      ++report.impressions;
    }
  }

  stage("attack", [&] {
    std::vector<LabeledText> texts;
    for (const auto& q : out.queries) texts.push_back({q.id, q.rendered(), kDummyLabel});
    auto real = ingest_query_log(config.real_log, kRealLabel, LogFormat::kTsvQueries);
    report.attack_obfuscated = texts.size();
    report.attack_real = real.records.size();
    texts.insert(texts.end(), real.records.begin(), real.records.end());
    const AttackDataset dataset = build_attack_dataset(texts, pipeline);
    const FoldPlan plan = make_fold_plan(dataset, config.folds, fold_seed);
    for (const auto& name : config.classifiers) {
      report.attack.push_back(cross_validate(dataset, parse_classifier(name, config.knn_k), plan));
    }
  });

  report.metadata = {{"version", kVersion},
                     {"seed", config.seed},
                     {"intent_category", std::string(1, category_tag(intent.category))},
                     {"root_verb", intent.root_verb.value_or("")},
                     {"query_count", out.queries.size()},
                     {"corpus_size", corpus.size()},
                     {"config", to_json(config)}};
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  return run_experiment_full(config).report;
}

}  // namespace distort
