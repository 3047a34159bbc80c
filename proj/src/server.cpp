#include "distort/server.hpp"

#include <algorithm>
#include <fstream>

#include "distort/json_io.hpp"
#include "distort/strings.hpp"
#include "httplib.h"

namespace distort {

using nlohmann::json;

struct SessionService::Session {
  std::mutex mutex;
  std::string id;
  Rng rng{0};
  PseudoProfile profile;
  std::vector<LogEntry> log;
  std::vector<Ad> served;
  std::string intent;  // last intent phrase received on a generating request
  std::optional<ResultPage> page;
  std::vector<Ad> ads;  // ads shown with the current page
  std::uint64_t seq = 0;
  std::size_t queries = 0;
};

namespace {

std::string error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kNotFound: return "not_found";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kUnimplemented: return "unimplemented";
  }
  return "unknown";
}

template <typename T>
T field(const json& body, const char* name, T fallback) {
  if (!body.contains(name) || body[name].is_null()) return fallback;
  try {
    return body[name].get<T>();
  } catch (const json::exception&) {
    throw invalid_argument(std::string("field '") + name + "' has the wrong type");
  }
}

json profile_json(const PseudoProfile& p) {
  return {{"categories", to_json(p)}, {"total", p.total}};
}

}  // namespace

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kSchema: return 400;
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kUnimplemented: return 501;
    case ErrorKind::kIo: return 500;
  }
  return 500;
}

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {
  const auto& c = options_.config;
  pipeline_.stopwords = load_stopwords(c.stopwords);
  lexicon_ = load_lexicon(c.lexicon);
  corpus_ = std::make_unique<Corpus>(load_corpus(c.corpus, pipeline_));
  inventory_ = std::make_unique<AdInventory>(load_ad_inventory(c.ads));
}

SessionService::~SessionService() = default;

SessionService::Session& SessionService::session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw not_found("unknown session '" + id + "'");
  return *it->second;
}

json SessionService::create_session(const json& body) {
  std::lock_guard lock(sessions_mutex_);
  const std::uint64_t n = next_session_++;
  auto s = std::make_unique<Session>();
  s->id = "S" + std::to_string(n);
  s->rng = Rng(field<std::uint64_t>(body, "seed", derive_seed(options_.config.seed, n)));
  const std::string id = s->id;
  sessions_.emplace(id, std::move(s));
  return {{"session_id", id}};
}

json SessionService::query(const std::string& session_id, const json& body) {
  Session& s = session(session_id);
  std::lock_guard lock(s.mutex);

  ObfuscatedQuery q;
  const bool preview = field<bool>(body, "preview", false);
  const std::string pattern_text = field<std::string>(body, "pattern", "");
  if (body.contains("segments")) {
    if (preview) throw invalid_argument("a preview request cannot carry segments");
    q.segments = field<std::vector<std::string>>(body, "segments", {});
    if (q.segments.empty()) throw invalid_argument("field 'segments' must be non-empty");
    for (const auto& seg : q.segments) {
      if (trim(seg).empty()) throw invalid_argument("segments must be non-empty strings");
    }
    if (!pattern_text.empty()) q.pattern = CategoryPattern::parse(pattern_text);
  } else {
    const std::string intent = field<std::string>(body, "intent", "");
    if (trim(intent).empty()) throw invalid_argument("field 'intent' must be non-empty");
    if (pattern_text.empty()) throw invalid_argument("field 'pattern' is required");
    IntentQuery iq;
    iq.phrase = intent;
    iq.category = categorize(intent, lexicon_);
    const auto words = split(to_lower(trim(intent)), ' ');
    if (!words.empty() && lexicon_.verbs().contains(words.front())) iq.root_verb = words.front();
    Rng rng(field<std::uint64_t>(body, "seed", s.rng.next()));
    AssembleOptions assemble;
    assemble.verb_substitution = options_.config.verb_substitution;
    q = assemble_query(iq, CategoryPattern::parse(pattern_text), lexicon_, rng, assemble);
    s.intent = intent;
  }

  json out;
  if (preview) {
    q.id = "preview";
    out["query"] = to_json(q);
    out["preview"] = true;
    return out;
  }

  q.id = "Q" + std::to_string(++s.queries);
  const ResultPage page = execute(*corpus_, q, options_.config.top_k);
  AdDraw draw = sample_ads(*inventory_, s.profile, options_.ads_per_query, s.rng);
  for (const auto& ad : draw.ads) {
    s.log.emplace_back(AdImpression{s.id, ad.id, ad.category, 1, s.seq++});
    s.served.push_back(ad);
  }

  json query_json = to_json(q);
  if (body.contains("segments")) query_json.erase("intent_index");
  json hits = json::array();
  for (const auto& h : page.hits) {
    const CorpusDoc* d = corpus_->find(h.doc_id);
    hits.push_back({{"doc_id", d->id},
                    {"score", h.score},
                    {"title", d->title},
                    {"url", d->url},
                    {"snippet", d->snippet},
                    {"categories", d->categories}});
  }
  json ads = json::array();
  for (const auto& ad : draw.ads) ads.push_back(to_json(ad));
  s.page = page;
  s.ads = std::move(draw.ads);

  out["query"] = std::move(query_json);
  out["result_page"] = {{"query_id", page.query_id}, {"top_k", page.top_k}, {"hits", hits}};
  out["ads"] = std::move(ads);
  out["warnings"] = draw.warnings;
  return out;
}

json SessionService::click(const std::string& session_id, const json& body) {
  Session& s = session(session_id);
  std::lock_guard lock(s.mutex);
  const std::string target = field<std::string>(body, "target", "");
  if (target.empty()) throw invalid_argument("field 'target' is required");
  const TargetKind kind = parse_target_kind(field<std::string>(body, "kind", "result"));

  ClickEvent ev;
  ev.session_id = s.id;
  ev.target = target;
  ev.target_kind = kind;
  if (kind == TargetKind::kResult) {
    const bool on_page =
        s.page && std::any_of(s.page->hits.begin(), s.page->hits.end(),
                              [&](const Hit& h) { return h.doc_id == target; });
    if (!on_page) throw invalid_argument("target '" + target + "' is not on the current page");
    ev.query_id = s.page->query_id;
    ev.categories = corpus_->find(target)->categories;
  } else {
    const auto it = std::find_if(s.ads.begin(), s.ads.end(),
                                 [&](const Ad& ad) { return ad.id == target; });
    if (it == s.ads.end()) throw invalid_argument("ad '" + target + "' is not currently shown");
    if (s.page) ev.query_id = s.page->query_id;
    ev.categories = {it->category};
  }
  ev.timestamp = s.seq++;
  s.profile = update_profile(std::move(s.profile), {ev});
  s.log.emplace_back(std::move(ev));
  return {{"profile", profile_json(s.profile)}};
}

json SessionService::profile(const std::string& session_id) {
  Session& s = session(session_id);
  std::lock_guard lock(s.mutex);
  json exposure = nullptr;
  if (!s.served.empty() && !s.intent.empty()) {
    exposure = to_json(exposure_report(s.served, s.intent, pipeline_));
  }
  return {{"session_id", s.id}, {"profile", profile_json(s.profile)}, {"exposure", exposure}};
}

json SessionService::log(const std::string& session_id) {
  Session& s = session(session_id);
  std::lock_guard lock(s.mutex);
  json events = json::array();
  for (const auto& e : s.log) events.push_back(to_json(e));
  return {{"session_id", s.id}, {"events", events}};
}

json SessionService::latest_report() {
  std::lock_guard lock(report_mutex_);
  if (!report_) {
    if (!options_.report_path.empty() && std::filesystem::exists(options_.report_path)) {
      try {
        report_ = json::parse(read_file(options_.report_path));
      } catch (const json::exception& e) {
        throw schema_error("stored report is not valid JSON: " + std::string(e.what()));
      }
    } else {
      report_ = to_json(run_experiment(options_.config));
    }
  }
  return *report_;
}

void SessionService::flush_logs() {
  if (options_.log_dir.empty()) return;
  std::filesystem::create_directories(options_.log_dir);
  std::lock_guard lock(sessions_mutex_);
  for (auto& [id, s] : sessions_) {
    std::lock_guard session_lock(s->mutex);
    std::ofstream out(options_.log_dir / (id + ".jsonl"), std::ios::binary);
    write_session_log(s->log, out);
    if (!out) throw io_error("cannot write log for session " + id);
  }
}

HttpServer::HttpServer(SessionService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::routes() {
  auto respond = [](httplib::Response& res, auto&& fn) {
    try {
      res.set_content(fn().dump(), "application/json");
    } catch (const Error& e) {
      res.status = http_status(e.kind());
      res.set_content(
          json{{"error", {{"kind", error_name(e.kind())}, {"message", e.what()}}}}.dump(),
          "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump(),
                      "application/json");
    }
  };
  auto body_of = [](const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
      json j = json::parse(req.body);
      if (!j.is_object()) throw invalid_argument("request body must be a JSON object");
      return j;
    } catch (const json::parse_error& e) {
      throw invalid_argument(std::string("request body is not valid JSON: ") + e.what());
    }
  };

  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server_->Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  server_->Post("/sessions", [this, respond, body_of](const auto& req, auto& res) {
    respond(res, [&] { return service_.create_session(body_of(req)); });
  });
  server_->Post(R"(/sessions/([^/]+)/query)", [this, respond, body_of](const auto& req, auto& res) {
    respond(res, [&] { return service_.query(req.matches[1], body_of(req)); });
  });
  server_->Post(R"(/sessions/([^/]+)/click)", [this, respond, body_of](const auto& req, auto& res) {
    respond(res, [&] { return service_.click(req.matches[1], body_of(req)); });
  });
  server_->Get(R"(/sessions/([^/]+)/profile)", [this, respond](const auto& req, auto& res) {
    respond(res, [&] { return service_.profile(req.matches[1]); });
  });
  server_->Get(R"(/sessions/([^/]+)/log)", [this, respond](const auto& req, auto& res) {
    respond(res, [&] { return service_.log(req.matches[1]); });
  });
  server_->Get("/report/latest", [this, respond](const auto&, auto& res) {
    respond(res, [&] { return service_.latest_report(); });
  });
}

int HttpServer::start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host.c_str())
                              : (server_->bind_to_port(host.c_str(), port) ? port : -1);
  if (bound < 0) throw io_error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::listen(const std::string& host, int port) {
  if (!server_->bind_to_port(host.c_str(), port)) {
    throw io_error("cannot bind " + host + ":" + std::to_string(port));
  }
  server_->listen_after_bind();
  service_.flush_logs();
}

void HttpServer::stop() {
  if (server_->is_running()) server_->stop();
  if (thread_.joinable()) {
    thread_.join();
    service_.flush_logs();
  }
}

}  // namespace distort
