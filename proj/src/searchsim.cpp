#include "distort/searchsim.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "distort/error.hpp"
#include "distort/strings.hpp"
#include "json.hpp"

namespace distort {

namespace {

using nlohmann::json;

std::string line_prefix(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string require_string(const json& obj, const char* field, std::size_t line) {
  if (!obj.contains(field) || !obj[field].is_string()) {
    throw schema_error(line_prefix(line) + "field '" + field + "' must be a string");
  }
  return obj[field].get<std::string>();
}

std::vector<std::string> optional_string_list(const json& obj, const char* field,
                                              std::size_t line) {
  std::vector<std::string> out;
  if (!obj.contains(field)) return out;
  if (!obj[field].is_array()) {
    throw schema_error(line_prefix(line) + "field '" + field + "' must be an array");
  }
  for (const auto& v : obj[field]) {
    if (!v.is_string()) {
      throw schema_error(line_prefix(line) + "field '" + field + "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

// Calls fn(json, line_number) for every non-blank line.
template <typename Fn>
void for_each_jsonl(std::string_view text, Fn fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto line = trim(text.substr(start, end - start));
    if (!line.empty()) {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw schema_error(line_prefix(line_no) + "malformed JSON: " + e.what());
      }
      if (!obj.is_object()) throw schema_error(line_prefix(line_no) + "expected a JSON object");
      fn(obj, line_no);
    }
    start = end + 1;
  }
}

}  // namespace

std::string indexed_text(const CorpusDoc& doc) { return doc.title + "\n" + doc.snippet; }

Corpus::Corpus(std::vector<CorpusDoc> docs, PipelineConfig config)
    : docs_(std::move(docs)), config_(std::move(config)) {
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    const auto& d = docs_[i];
    if (d.id.empty()) throw schema_error("document " + std::to_string(i) + " has an empty id");
    if (trim(d.snippet).empty()) throw schema_error("document '" + d.id + "' has an empty snippet");
    if (utf8_length(d.snippet) > kMaxSnippetLength) {
      throw schema_error("document '" + d.id + "' snippet exceeds " +
                         std::to_string(kMaxSnippetLength) + " characters");
    }
    if (!by_id_.emplace(d.id, i).second) throw schema_error("duplicate document id '" + d.id + "'");

    std::unordered_map<std::string, int> tf;
    for (auto& t : normalize_tokens(indexed_text(d), config_)) ++tf[std::move(t)];
    for (auto& [term, count] : tf) index_[term].push_back({i, count});
  }
}

const CorpusDoc* Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const std::vector<Posting>* Corpus::postings(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? nullptr : &it->second;
}

double Corpus::idf(const std::string& term) const {
  const auto* p = postings(term);
  if (!p) return 0.0;
  return std::log(static_cast<double>(docs_.size()) / static_cast<double>(p->size()));
}

Corpus parse_corpus(std::string_view jsonl, PipelineConfig config) {
  std::vector<CorpusDoc> docs;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_jsonl(jsonl, [&](const json& obj, std::size_t line) {
    CorpusDoc d;
    d.id = require_string(obj, "id", line);
    d.url = obj.contains("url") ? require_string(obj, "url", line) : "";
    d.title = obj.contains("title") ? require_string(obj, "title", line) : "";
    d.snippet = require_string(obj, "snippet", line);
    d.categories = optional_string_list(obj, "categories", line);
    if (!seen.emplace(d.id, line).second) {
      throw schema_error(line_prefix(line) + "duplicate id '" + d.id + "' (first seen on line " +
                         std::to_string(seen[d.id]) + ")");
    }
    if (trim(d.snippet).empty()) throw schema_error(line_prefix(line) + "empty snippet");
    if (utf8_length(d.snippet) > kMaxSnippetLength) {
      throw schema_error(line_prefix(line) + "snippet exceeds " +
                         std::to_string(kMaxSnippetLength) + " characters");
    }
    docs.push_back(std::move(d));
  });
  return Corpus(std::move(docs), std::move(config));
}

Corpus load_corpus(const std::filesystem::path& path, PipelineConfig config) {
  return parse_corpus(read_file(path.string()), std::move(config));
}

ResultPage CorpusSearchEngine::search(std::string_view query_id, std::string_view text,
                                      std::size_t top_k) const {
  if (top_k < 1) throw invalid_argument("top_k must be >= 1");
  const Corpus& corpus = *corpus_;
  const auto tokens = normalize_tokens(text, corpus.config());
  if (tokens.empty()) {
    throw invalid_argument("query '" + std::string(query_id) + "' has no normalized tokens");
  }

  std::vector<double> scores(corpus.size(), 0.0);
  for (const auto& t : tokens) {
    const auto* plist = corpus.postings(t);
    if (!plist) continue;
    const double idf = corpus.idf(t);
    for (const auto& p : *plist) scores[p.doc] += static_cast<double>(p.tf) * idf;
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > 0.0) candidates.push_back(i);
  }
  const auto& docs = corpus.docs();
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return docs[a].id < docs[b].id;
  };
  const std::size_t keep = std::min(top_k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), better);

  ResultPage page;
  page.query_id = std::string(query_id);
  page.top_k = top_k;
  page.hits.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    page.hits.push_back({docs[candidates[i]].id, scores[candidates[i]]});
  }
  return page;
}

ResultPage execute(const Corpus& corpus, const ObfuscatedQuery& query, std::size_t top_k) {
  return CorpusSearchEngine(corpus).search(query.id, query.rendered(), top_k);
}

AdInventory::AdInventory(std::vector<Ad> ads) : ads_(std::move(ads)) {
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < ads_.size(); ++i) {
    if (ads_[i].id.empty()) throw schema_error("ad " + std::to_string(i) + " has an empty id");
    if (!seen.emplace(ads_[i].id, i).second) {
      throw schema_error("duplicate ad id '" + ads_[i].id + "'");
    }
    by_category_[ads_[i].category].push_back(i);
  }
}

const Ad* AdInventory::find(std::string_view id) const {
  for (const auto& ad : ads_) {
    if (ad.id == id) return &ad;
  }
  return nullptr;
}

AdInventory parse_ad_inventory(std::string_view jsonl) {
  std::vector<Ad> ads;
  for_each_jsonl(jsonl, [&](const json& obj, std::size_t line) {
    Ad ad;
    ad.id = require_string(obj, "id", line);
    ad.text = require_string(obj, "text", line);
    ad.category = require_string(obj, "category", line);
    ad.specific_tags = optional_string_list(obj, "specific_tags", line);
    for (const auto& existing : ads) {
      if (existing.id == ad.id) throw schema_error(line_prefix(line) + "duplicate ad id '" + ad.id + "'");
    }
    ads.push_back(std::move(ad));
  });
  return AdInventory(std::move(ads));
}

AdInventory load_ad_inventory(const std::filesystem::path& path) {
  return parse_ad_inventory(read_file(path.string()));
}

void PseudoProfile::add(const std::string& category, std::uint64_t amount) {
  category_weights[category] += amount;
  total += amount;
}

AdDraw sample_ads(const AdInventory& inventory, const PseudoProfile& profile, std::size_t n,
                  Rng& rng) {
  if (inventory.ads().empty()) throw invalid_argument("ad inventory is empty");
  if (n < 1) throw invalid_argument("ad count must be >= 1");
  const auto& cats = inventory.by_category();

  AdDraw draw;
  std::uint64_t total = 0;
  for (const auto& [cat, w] : profile.category_weights) {
    total += w;
    if (w > 0 && !cats.count(cat)) draw.warnings.push_back(cat);
  }

  auto uniform_category = [&]() -> const std::vector<std::size_t>& {
    auto it = cats.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng.uniform_index(cats.size())));
    return it->second;
  };

  draw.ads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<std::size_t>* members = nullptr;
    if (total == 0) {
      members = &uniform_category();
    } else {
      std::uint64_t target = rng.uniform_index(total);
      for (const auto& [cat, w] : profile.category_weights) {
        if (target < w) {
          auto it = cats.find(cat);
          members = it == cats.end() ? &uniform_category() : &it->second;
          break;
        }
        target -= w;
      }
    }
    const auto idx = (*members)[rng.uniform_index(members->size())];
    draw.ads.push_back(inventory.ads()[idx]);
  }
  return draw;
}

}  // namespace distort
