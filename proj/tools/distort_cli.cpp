// Command-line front end: generate, search, mine, attack, session, run,
// report, serve and synth.

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "distort/attack.hpp"
#include "distort/error.hpp"
#include "distort/experiment.hpp"
#include "distort/json_io.hpp"
#include "distort/report.hpp"
#include "distort/server.hpp"
#include "distort/strings.hpp"
#include "distort/synth.hpp"

using namespace distort;
using nlohmann::json;

namespace {

struct Paths {
  std::string data_dir;
  std::string lexicon, corpus, ads, stopwords, real_log;

  ExperimentConfig resolve() const {
    ExperimentConfig c = ExperimentConfig::with_data_dir(data_dir);
    if (!lexicon.empty()) c.lexicon = lexicon;
    if (!corpus.empty()) c.corpus = corpus;
    if (!ads.empty()) c.ads = ads;
    if (!stopwords.empty()) c.stopwords = stopwords;
    if (!real_log.empty()) c.real_log = real_log;
    return c;
  }
};

void add_paths(CLI::App* cmd, Paths& p) {
  cmd->add_option("--data-dir", p.data_dir, "Data directory (default: $DISTORT_DATA_DIR)");
  cmd->add_option("--lexicon", p.lexicon, "Lexicon JSON");
  cmd->add_option("--corpus", p.corpus, "Corpus JSONL");
  cmd->add_option("--ads", p.ads, "Ad inventory JSONL");
  cmd->add_option("--stopwords", p.stopwords, "Stop word list");
  cmd->add_option("--real-log", p.real_log, "Real-query log (TSV)");
}

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw io_error("cannot write " + path);
}

std::vector<ObfuscatedQuery> read_queries(const std::string& path) {
  std::vector<ObfuscatedQuery> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(obfuscated_query_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw schema_error(path + " line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

IntentQuery make_intent(const std::string& phrase, const std::string& root_verb,
                        const Lexicon& lexicon) {
  IntentQuery intent;
  intent.phrase = phrase;
  intent.category = categorize(phrase, lexicon);
  std::string verb = root_verb;
  if (verb.empty()) {
    const auto words = split(to_lower(trim(phrase)), ' ');
    if (!words.empty() && lexicon.verbs().contains(words.front())) verb = words.front();
  }
  if (!verb.empty()) intent.root_verb = verb;
  return intent;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kSchema: return 2;
    case ErrorKind::kNotFound: return 3;
    case ErrorKind::kIo: return 4;
    case ErrorKind::kUnimplemented: return 5;
  }
  return 1;
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distortion Search: query obfuscation experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Paths paths;
  ExperimentConfig cfg;
  std::string out_path, relevance = "tokens-all";
  std::string queries_path, obfuscated_path, real_path, classifier = "knn", in_path;
  std::string host = "127.0.0.1", log_dir, report_path;
  int port = 8080;
  bool no_original = false, no_verbs = false;

  auto add_intent = [&](CLI::App* cmd) {
    cmd->add_option("--intent", cfg.intent, "Intended query phrase")->capture_default_str();
    cmd->add_option("--root-verb", cfg.root_verb, "Verb for verb substitution");
  };
  auto add_generate = [&](CLI::App* cmd) {
    add_intent(cmd);
    cmd->add_option("--patterns", cfg.patterns, "Comma-separated category patterns")
        ->capture_default_str();
    cmd->add_option("--per-pattern", cfg.per_pattern, "Queries per pattern")->capture_default_str();
    cmd->add_flag("--no-original", no_original, "Omit the intent-only query");
    cmd->add_flag("--no-verb-substitution", no_verbs, "Keep decoy verbs unchanged");
  };
  auto add_policy = [&](CLI::App* cmd) {
    cmd->add_option("--k-clicks", cfg.policy.k_clicks, "Clicks per page (>= 2)")
        ->capture_default_str();
    cmd->add_option("--decoy-fraction", cfg.policy.decoy_fraction, "Share of decoy clicks")
        ->capture_default_str();
    cmd->add_option("--days", cfg.days, "Simulated days")->capture_default_str();
    cmd->add_option("--ads-per-day", cfg.ads_per_day, "Ad impressions per day")
        ->capture_default_str();
  };
  auto add_relevance = [&](CLI::App* cmd) {
    cmd->add_option("--relevance", relevance, "tokens-all | single-token")
        ->check(CLI::IsMember({"tokens-all", "single-token"}))
        ->capture_default_str();
    cmd->add_option("--relevance-phrase", cfg.relevance_phrase, "Phrase defining relevance")
        ->capture_default_str();
    cmd->add_option("--relevance-term", cfg.relevance_term, "Key term in single-token mode");
  };
  auto add_common = [&](CLI::App* cmd) {
    add_paths(cmd, paths);
    cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    cmd->add_option("--top-k", cfg.top_k, "Results per query")->capture_default_str();
    cmd->add_option("--out", out_path, "Output file or directory");
  };

  auto* generate = app.add_subcommand("generate", "Generate an obfuscated query batch (JSONL)");
  add_common(generate);
  add_generate(generate);

  auto* search = app.add_subcommand("search", "Execute queries against the corpus (JSONL)");
  add_common(search);
  search->add_option("--queries", queries_path, "Obfuscated queries JSONL")->required();

  auto* mine = app.add_subcommand("mine", "TF-IDF matrix of corpus snippets (CSV)");
  add_common(mine);
  int ngram_max = 1;
  mine->add_option("--ngram-max", ngram_max, "Largest n-gram")->capture_default_str();

  auto* attack = app.add_subcommand("attack", "Cross-validated distinguishability attack");
  add_common(attack);
  attack->add_option("--obfuscated", obfuscated_path, "Obfuscated queries JSONL (label 0)")
      ->required();
  attack->add_option("--real", real_path, "Real-query TSV (label 1)")->required();
  attack->add_option("--classifier", classifier, "knn | naive_bayes | rf | lr")
      ->capture_default_str();
  attack->add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();
  attack->add_option("--knn-k", cfg.knn_k, "KNN neighbours (odd)")->capture_default_str();

  auto* session = app.add_subcommand("session", "Simulate a click and ad session");
  add_common(session);
  add_intent(session);
  add_policy(session);
  add_relevance(session);
  session->add_option("--queries", queries_path, "Obfuscated queries JSONL")->required();
  std::string log_out;
  session->add_option("--log", log_out, "Session log JSONL");

  auto* run = app.add_subcommand("run", "Full experiment; writes the report set to --out");
  add_common(run);
  add_generate(run);
  add_policy(run);
  add_relevance(run);
  run->add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();
  run->add_option("--knn-k", cfg.knn_k, "KNN neighbours (odd)")->capture_default_str();

  auto* report = app.add_subcommand("report", "Render CSV and SVG files from report.json");
  report->add_option("--in", in_path, "report.json")->required();
  report->add_option("--out", out_path, "Output directory")->required();

  auto* serve = app.add_subcommand("serve", "HTTP service for interactive sessions");
  add_paths(serve, paths);
  serve->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  serve->add_option("--top-k", cfg.top_k, "Results per query")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Bind port")->capture_default_str();
  serve->add_option("--log-dir", log_dir, "Where session logs are flushed on shutdown");
  serve->add_option("--report", report_path, "report.json served by /report/latest");

  auto* synth = app.add_subcommand("synth", "Regenerate the synthetic data sets");
  std::string synth_dir;
  synth->add_option("--data-dir", synth_dir, "Target data directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (paths.data_dir.empty()) paths.data_dir = default_data_dir().string();
    ExperimentConfig base = paths.resolve();
    base.intent = cfg.intent;
    base.root_verb = cfg.root_verb;
    base.patterns = cfg.patterns;
    base.per_pattern = cfg.per_pattern;
    base.include_original = !no_original;
    base.verb_substitution = !no_verbs;
    base.top_k = cfg.top_k;
    base.policy = cfg.policy;
    base.days = cfg.days;
    base.ads_per_day = cfg.ads_per_day;
    base.folds = cfg.folds;
    base.knn_k = cfg.knn_k;
    base.seed = cfg.seed;
    base.relevance_mode = parse_relevance_mode(relevance);
    base.relevance_phrase = cfg.relevance_phrase;
    base.relevance_term = cfg.relevance_term;

    PipelineConfig pipeline;
    auto load_pipeline = [&] { pipeline.stopwords = load_stopwords(base.stopwords); };

    if (*generate) {
      const Lexicon lexicon = load_lexicon(base.lexicon);
      Rng rng(base.seed);
      Rng gen = rng.fork(1);
      BatchOptions options;
      options.include_original = base.include_original;
      options.assemble.verb_substitution = base.verb_substitution;
      const auto queries =
          generate_batch(make_intent(base.intent, base.root_verb, lexicon),
                         parse_pattern_set(base.patterns), base.per_pattern, lexicon, gen, options);
      std::ostringstream out;
      for (const auto& q : queries) out << to_json(q).dump() << '\n';
      emit(out_path, out.str());
    } else if (*search) {
      load_pipeline();
      const Corpus corpus = load_corpus(base.corpus, pipeline);
      std::ostringstream out;
      for (const auto& q : read_queries(queries_path)) {
        out << to_json(execute(corpus, q, base.top_k)).dump() << '\n';
      }
      emit(out_path, out.str());
    } else if (*mine) {
      load_pipeline();
      pipeline.ngram_max = ngram_max;
      const Corpus corpus = load_corpus(base.corpus, pipeline);
      std::vector<TextDoc> docs;
      for (const auto& d : corpus.docs()) docs.emplace_back(d.id, d.snippet);
      std::ostringstream out;
      write_matrix_csv(build_matrix(docs, pipeline), out);
      emit(out_path, out.str());
    } else if (*attack) {
      load_pipeline();
      auto dummy = ingest_query_log(obfuscated_path, kDummyLabel, LogFormat::kJsonlObfuscated);
      auto real = ingest_query_log(real_path, kRealLabel, LogFormat::kTsvQueries);
      for (const auto& w : dummy.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& w : real.warnings) std::cerr << "warning: " << w << '\n';
      auto texts = std::move(dummy.records);
      texts.insert(texts.end(), real.records.begin(), real.records.end());
      const auto dataset = build_attack_dataset(texts, pipeline);
      const auto plan = make_fold_plan(dataset, base.folds, derive_seed(base.seed, 3));
      emit(out_path,
           to_json(cross_validate(dataset, parse_classifier(classifier, base.knn_k), plan)).dump(2) +
               "\n");
    } else if (*session) {
      load_pipeline();
      const Lexicon lexicon = load_lexicon(base.lexicon);
      const Corpus corpus = load_corpus(base.corpus, pipeline);
      const AdInventory inventory = load_ad_inventory(base.ads);
      const RelevancePredicate predicate(
          base.relevance_phrase.empty() ? base.intent : base.relevance_phrase, pipeline,
          base.relevance_mode, base.relevance_term);
      Rng rng(base.seed);
      Rng session_rng = rng.fork(2);
      SessionOptions options;
      options.top_k = base.top_k;
      const auto result = run_session(make_intent(base.intent, base.root_verb, lexicon),
                                      read_queries(queries_path), corpus, inventory, predicate,
                                      base.policy, base.days, base.ads_per_day, session_rng,
                                      options);
      if (!log_out.empty()) {
        std::ostringstream log;
        write_session_log(result.log, log);
        emit(log_out, log.str());
      }
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      emit(out_path, json{{"profile", to_json(result.profile)},
                          {"exposure", to_json(result.exposure)}}
                             .dump(2) +
                         "\n");
    } else if (*run) {
      if (out_path.empty()) throw invalid_argument("--out is required for run");
      const ExperimentReport r = run_experiment(base);
      for (const auto& p : emit_report(r, out_path)) std::cout << p.string() << '\n';
    } else if (*report) {
      json j;
      try {
        j = json::parse(read_file(in_path));
      } catch (const json::parse_error& e) {
        throw schema_error(in_path + ": " + e.what());
      }
      for (const auto& p : emit_report(report_from_json(j), out_path)) {
        std::cout << p.string() << '\n';
      }
    } else if (*serve) {
      ServiceOptions options;
      options.config = base;
      options.log_dir = log_dir;
      options.report_path = report_path;
      SessionService service(std::move(options));
      HttpServer server(service);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << host << ':' << port << '\n';
      server.listen(host, port);
      g_server = nullptr;
    } else if (*synth) {
      write_synthetic_data(synth_dir);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
