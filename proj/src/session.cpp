#include "distort/session.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "distort/error.hpp"
#include "distort/json_io.hpp"

namespace distort {

void ClickPolicy::validate() const {
  if (k_clicks < 2) throw invalid_argument("k_clicks must be >= 2");
  if (!(decoy_fraction >= 0.0 && decoy_fraction <= 1.0)) {
    throw invalid_argument("decoy_fraction must lie in [0, 1]");
  }
}

std::string_view target_kind_name(TargetKind kind) {
  return kind == TargetKind::kResult ? "result" : "ad";
}

TargetKind parse_target_kind(std::string_view name) {
  if (name == "result") return TargetKind::kResult;
  if (name == "ad") return TargetKind::kAd;
  throw invalid_argument("unknown target kind '" + std::string(name) + "'");
}

namespace {

struct Split {
  std::size_t decoy = 0;
  std::size_t relevant = 0;
  bool rebalanced = false;
};

// Moves any deficit of one pool to the other.
Split split_clicks(std::size_t k, double decoy_fraction, std::size_t decoy_pool,
                   std::size_t relevant_pool) {
  Split s;
  s.decoy = static_cast<std::size_t>(std::llround(static_cast<double>(k) * decoy_fraction));
  s.relevant = k - s.decoy;
  if (s.decoy > decoy_pool) {
    s.relevant += s.decoy - decoy_pool;
    s.decoy = decoy_pool;
    s.rebalanced = true;
  }
  if (s.relevant > relevant_pool) {
    s.decoy += s.relevant - relevant_pool;
    s.relevant = relevant_pool;
    s.rebalanced = true;
  }
  return s;
}

// `count` distinct entries of `pool`, uniformly at random.
std::vector<std::size_t> choose(std::vector<std::size_t> pool, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

ClickPlan plan_clicks(const ResultPage& page, const Corpus& corpus,
                      const RelevancePredicate& predicate, const ClickPolicy& policy, Rng& rng,
                      const std::string& session_id, std::uint64_t first_seq) {
  policy.validate();
  const auto k = static_cast<std::size_t>(policy.k_clicks);
  if (page.hits.size() < k) {
    throw invalid_argument("page " + page.query_id + " has " + std::to_string(page.hits.size()) +
                           " hits, fewer than k_clicks = " + std::to_string(k));
  }

  std::vector<std::size_t> relevant, decoy;
  std::vector<const CorpusDoc*> docs;
  for (std::size_t rank = 0; rank < page.hits.size(); ++rank) {
    const CorpusDoc* doc = corpus.find(page.hits[rank].doc_id);
    if (!doc) throw not_found("hit '" + page.hits[rank].doc_id + "' is not in the corpus");
    docs.push_back(doc);
    (predicate.relevant(doc->snippet) ? relevant : decoy).push_back(rank);
  }

  ClickPlan plan;
  plan.decoy_requested =
      static_cast<std::size_t>(std::llround(static_cast<double>(k) * policy.decoy_fraction));
  plan.relevant_requested = k - plan.decoy_requested;
  const Split split = split_clicks(k, policy.decoy_fraction, decoy.size(), relevant.size());
  plan.decoy_clicks = split.decoy;
  plan.relevant_clicks = split.relevant;
  plan.rebalanced = split.rebalanced;

  auto ranks = choose(decoy, split.decoy, rng);
  const auto rel = choose(relevant, split.relevant, rng);
  ranks.insert(ranks.end(), rel.begin(), rel.end());
  std::sort(ranks.begin(), ranks.end());

  std::uint64_t seq = first_seq;
  for (auto rank : ranks) {
    ClickEvent ev;
    ev.session_id = session_id;
    ev.query_id = page.query_id;
    ev.target = docs[rank]->id;
    ev.target_kind = TargetKind::kResult;
    ev.categories = docs[rank]->categories;
    ev.timestamp = seq++;
    plan.events.push_back(std::move(ev));
  }
  return plan;
}

PseudoProfile update_profile(PseudoProfile profile, const std::vector<ClickEvent>& events) {
  for (const auto& ev : events) {
    for (const auto& c : ev.categories) profile.add(c);
  }
  return profile;
}

bool is_specific_ad(const Ad& ad, const std::vector<std::string>& intent_tokens,
                    const PipelineConfig& config) {
  for (const auto& tag : ad.specific_tags) {
    const auto tag_tokens = normalize_tokens(tag, config);
    if (tag_tokens.empty()) continue;
    const bool contained = std::all_of(tag_tokens.begin(), tag_tokens.end(), [&](const auto& t) {
      return std::find(intent_tokens.begin(), intent_tokens.end(), t) != intent_tokens.end();
    });
    if (contained) return true;
  }
  return false;
}

ExposureReport exposure_report(const std::vector<Ad>& ads_served, const std::string& intent_phrase,
                               const PipelineConfig& config) {
  if (ads_served.empty()) throw invalid_argument("exposure report needs at least one ad");
  const auto intent_tokens = normalize_tokens(intent_phrase, config);
  ExposureReport r;
  r.total_ads = ads_served.size();
  for (const auto& ad : ads_served) {
    ++r.conceptual_breakdown[ad.category];
    if (is_specific_ad(ad, intent_tokens, config)) ++r.specific_ads;
  }
  r.exposure = static_cast<double>(r.specific_ads) / static_cast<double>(r.total_ads);
  return r;
}

SessionResult run_session(const IntentQuery& intent, const std::vector<ObfuscatedQuery>& queries,
                          const Corpus& corpus, const AdInventory& inventory,
                          const RelevancePredicate& predicate, const ClickPolicy& policy, int days,
                          int ads_per_day, Rng& rng, const SessionOptions& options) {
  policy.validate();
  if (queries.empty()) throw invalid_argument("session needs at least one query");
  if (days < 1) throw invalid_argument("days must be >= 1");
  if (ads_per_day < 1) throw invalid_argument("ads_per_day must be >= 1");

  SessionResult result;
  std::uint64_t seq = 0;
  const std::uint64_t base = rng.next();
  std::uint64_t stream = 0;

  for (const auto& q : queries) {
    const ResultPage page = execute(corpus, q, options.top_k);
    Rng click_rng(derive_seed(base, stream++));
    auto plan = plan_clicks(page, corpus, predicate, policy, click_rng, options.session_id, seq);
    seq += plan.events.size();
    result.profile = update_profile(std::move(result.profile), plan.events);
    for (const auto& ev : plan.events) result.log.emplace_back(ev);
    result.plans.push_back(std::move(plan));
  }

  const auto intent_tokens = normalize_tokens(intent.phrase, corpus.config());
  std::vector<Ad> served;
  std::set<std::string> warnings;
  for (int day = 1; day <= days; ++day) {
    Rng day_rng(derive_seed(base, stream++));
    auto draw = sample_ads(inventory, result.profile, static_cast<std::size_t>(ads_per_day),
                           day_rng);
    warnings.insert(draw.warnings.begin(), draw.warnings.end());
    for (const auto& ad : draw.ads) {
      result.log.emplace_back(AdImpression{options.session_id, ad.id, ad.category, day, seq++});
      if (policy.include_ads) result.profile.add(ad.category);
    }
    if (policy.include_ads) {
      std::vector<std::size_t> specific, other;
      for (std::size_t i = 0; i < draw.ads.size(); ++i) {
        (is_specific_ad(draw.ads[i], intent_tokens, corpus.config()) ? specific : other)
            .push_back(i);
      }
      const auto k = std::min(static_cast<std::size_t>(policy.k_clicks), draw.ads.size());
      const Split split = split_clicks(k, policy.decoy_fraction, other.size(), specific.size());
      auto picks = choose(other, split.decoy, day_rng);
      const auto spec = choose(specific, split.relevant, day_rng);
      picks.insert(picks.end(), spec.begin(), spec.end());
      std::sort(picks.begin(), picks.end());
      std::vector<ClickEvent> clicks;
      for (auto i : picks) {
        ClickEvent ev;
        ev.session_id = options.session_id;
        ev.target = draw.ads[i].id;
        ev.target_kind = TargetKind::kAd;
        ev.categories = {draw.ads[i].category};
        ev.timestamp = seq++;
        clicks.push_back(ev);
        result.log.emplace_back(std::move(ev));
      }
      result.profile = update_profile(std::move(result.profile), clicks);
    }
    served.insert(served.end(), std::make_move_iterator(draw.ads.begin()),
                  std::make_move_iterator(draw.ads.end()));
  }

  result.exposure = exposure_report(served, intent.phrase, corpus.config());
  result.warnings.assign(warnings.begin(), warnings.end());
  return result;
}

void write_session_log(const std::vector<LogEntry>& log, std::ostream& out) {
  for (const auto& entry : log) out << to_json(entry).dump() << '\n';
}

}  // namespace distort
