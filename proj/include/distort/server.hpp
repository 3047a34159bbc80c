#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "distort/error.hpp"
#include "distort/experiment.hpp"
#include "distort/lexicon.hpp"
#include "distort/searchsim.hpp"
#include "distort/session.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace distort {

struct ServiceOptions {
  ExperimentConfig config;
  std::size_t ads_per_query = 3;
  // Session logs are written here as <session_id>.jsonl on flush; empty
  // disables writing.
  std::filesystem::path log_dir;
  // Served by GET /report/latest when it exists; otherwise the report is
  // computed from `config` on first request.
  std::filesystem::path report_path;
};

// Interactive sessions over the shared corpus, ad inventory and lexicon.
// Methods return JSON response bodies and throw Error on failure.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options);
  ~SessionService();

  nlohmann::json create_session(const nlohmann::json& body);
  // {intent, pattern, seed?, preview?} generates a query; {segments,
  // pattern?} executes a client-supplied segment list.
  nlohmann::json query(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json click(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json profile(const std::string& session_id);
  nlohmann::json log(const std::string& session_id);
  nlohmann::json latest_report();

  // Writes every session log to log_dir.
  void flush_logs();

 private:
  struct Session;
  Session& session(const std::string& id);

  ServiceOptions options_;
  PipelineConfig pipeline_;
  Lexicon lexicon_;
  std::unique_ptr<Corpus> corpus_;
  std::unique_ptr<AdInventory> inventory_;

  std::mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;

  std::mutex report_mutex_;
  std::optional<nlohmann::json> report_;
};

// HTTP/JSON front end of SessionService.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port. Throws kIo on bind failure.
  int start(const std::string& host, int port);
  // Stops serving and flushes session logs.
  void stop();
  // Blocks serving on the calling thread.
  void listen(const std::string& host, int port);

 private:
  void routes();

  SessionService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

// HTTP status for an error kind.
int http_status(ErrorKind kind);

}  // namespace distort
