#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "distort/obfuscator.hpp"
#include "distort/rng.hpp"
#include "distort/searchsim.hpp"
#include "distort/textmine.hpp"

namespace distort {

struct ClickPolicy {
  int k_clicks = 2;             // must be >= 2
  double decoy_fraction = 0.5;  // share of clicks on non-intent targets
  bool include_ads = true;

  void validate() const;
};

enum class TargetKind { kResult, kAd };

std::string_view target_kind_name(TargetKind kind);
TargetKind parse_target_kind(std::string_view name);

struct ClickEvent {
  std::string session_id;
  std::string query_id;  // empty for ad clicks made while browsing
  std::string target;
  TargetKind target_kind = TargetKind::kResult;
  std::vector<std::string> categories;
  std::uint64_t timestamp = 0;  // sequence number within the session
};

struct AdImpression {
  std::string session_id;
  std::string ad_id;
  std::string category;
  int day = 0;
  std::uint64_t timestamp = 0;
};

using LogEntry = std::variant<ClickEvent, AdImpression>;

struct ClickPlan {
  std::vector<ClickEvent> events;
  std::size_t decoy_requested = 0;
  std::size_t relevant_requested = 0;
  std::size_t decoy_clicks = 0;
  std::size_t relevant_clicks = 0;
  // True when one pool was too small and its deficit moved to the other.
  bool rebalanced = false;
};

// Picks round(k * decoy_fraction) non-relevant hits and the remainder among
// relevant hits, uniformly without replacement within each pool. Events are
// ordered by rank and stamped first_seq, first_seq + 1, ...
// Throws kInvalidArgument when the page has fewer hits than k_clicks.
ClickPlan plan_clicks(const ResultPage& page, const Corpus& corpus,
                      const RelevancePredicate& predicate, const ClickPolicy& policy, Rng& rng,
                      const std::string& session_id = "S1", std::uint64_t first_seq = 0);

// Every event adds 1 to each of its target's categories.
PseudoProfile update_profile(PseudoProfile profile, const std::vector<ClickEvent>& events);

struct ExposureReport {
  std::size_t total_ads = 0;
  std::size_t specific_ads = 0;
  std::map<std::string, std::size_t> conceptual_breakdown;
  double exposure = 0.0;
};

// An ad is specific when the normalized tokens of any of its specific_tags
// are all contained in the normalized intent tokens.
bool is_specific_ad(const Ad& ad, const std::vector<std::string>& intent_tokens,
                    const PipelineConfig& config);

// Throws kInvalidArgument on an empty ad list.
ExposureReport exposure_report(const std::vector<Ad>& ads_served, const std::string& intent_phrase,
                               const PipelineConfig& config);

struct SessionOptions {
  std::string session_id = "S1";
  std::size_t top_k = 100;
};

struct SessionResult {
  PseudoProfile profile;
  ExposureReport exposure;
  std::vector<LogEntry> log;
  std::vector<ClickPlan> plans;      // one per query, in query order
  std::vector<std::string> warnings;  // ad-serving fallbacks, deduplicated
};

// Executes each query, clicks per policy and folds the clicks into the
// profile; then serves days * ads_per_day impressions against the evolving
// profile. With include_ads the impressions and a daily round of k ad clicks
// also feed the profile.
SessionResult run_session(const IntentQuery& intent, const std::vector<ObfuscatedQuery>& queries,
                          const Corpus& corpus, const AdInventory& inventory,
                          const RelevancePredicate& predicate, const ClickPolicy& policy, int days,
                          int ads_per_day, Rng& rng, const SessionOptions& options = {});

// JSONL: {"type":"click",...} / {"type":"impression",...}
void write_session_log(const std::vector<LogEntry>& log, std::ostream& out);

}  // namespace distort
