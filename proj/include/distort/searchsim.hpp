#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "distort/obfuscator.hpp"
#include "distort/rng.hpp"
#include "distort/textmine.hpp"

namespace distort {

inline constexpr std::size_t kMaxSnippetLength = 400;

struct CorpusDoc {
  std::string id;
  std::string url;
  std::string title;
  std::string snippet;
  std::vector<std::string> categories;
};

struct Posting {
  std::size_t doc;  // index into Corpus::docs()
  int tf;
};

// Immutable document collection with an inverted index over the normalized
// title + snippet tokens.
class Corpus {
 public:
  // Throws kSchema on duplicate ids, empty snippets or over-long snippets.
  Corpus(std::vector<CorpusDoc> docs, PipelineConfig config);

  const std::vector<CorpusDoc>& docs() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  const PipelineConfig& config() const { return config_; }

  const CorpusDoc* find(std::string_view id) const;
  const std::vector<Posting>* postings(const std::string& term) const;
  std::size_t term_count() const { return index_.size(); }
  // ln(N / df), or 0 for unknown terms.
  double idf(const std::string& term) const;

 private:
  std::vector<CorpusDoc> docs_;
  PipelineConfig config_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<Posting>> index_;
};

// Text used for indexing a document.
std::string indexed_text(const CorpusDoc& doc);

// JSONL, one CorpusDoc per line. Errors name the 1-based line number.
Corpus load_corpus(const std::filesystem::path& path, PipelineConfig config);
Corpus parse_corpus(std::string_view jsonl, PipelineConfig config);

struct Hit {
  std::string doc_id;
  double score = 0.0;
};

struct ResultPage {
  std::string query_id;
  std::vector<Hit> hits;
  std::size_t top_k = 0;
};

// Query text in, ranked snippets out. Only the corpus-backed engine ships; a
// live adapter would implement the same interface.
class SearchEngine {
 public:
  virtual ~SearchEngine() = default;
  virtual ResultPage search(std::string_view query_id, std::string_view text,
                            std::size_t top_k) const = 0;
};

class CorpusSearchEngine final : public SearchEngine {
 public:
  explicit CorpusSearchEngine(const Corpus& corpus) : corpus_(&corpus) {}
  ResultPage search(std::string_view query_id, std::string_view text,
                    std::size_t top_k) const override;

 private:
  const Corpus* corpus_;
};

// Scores every document as the sum over query tokens (with multiplicity) of
// tf * ln(N / df); returns the top_k docs with score > 0, ties by doc id.
// Throws kInvalidArgument when the query has no normalized tokens.
ResultPage execute(const Corpus& corpus, const ObfuscatedQuery& query, std::size_t top_k);

struct Ad {
  std::string id;
  std::string text;
  std::string category;
  std::vector<std::string> specific_tags;
};

class AdInventory {
 public:
  explicit AdInventory(std::vector<Ad> ads);

  const std::vector<Ad>& ads() const { return ads_; }
  const Ad* find(std::string_view id) const;
  // Category label -> indices into ads(), sorted by label.
  const std::map<std::string, std::vector<std::size_t>>& by_category() const {
    return by_category_;
  }

 private:
  std::vector<Ad> ads_;
  std::map<std::string, std::vector<std::size_t>> by_category_;
};

AdInventory load_ad_inventory(const std::filesystem::path& path);
AdInventory parse_ad_inventory(std::string_view jsonl);

// Category histogram inferred from clicks and ad impressions.
struct PseudoProfile {
  std::map<std::string, std::uint64_t> category_weights;
  std::uint64_t total = 0;

  void add(const std::string& category, std::uint64_t amount = 1);
  friend bool operator==(const PseudoProfile&, const PseudoProfile&) = default;
};

struct AdDraw {
  std::vector<Ad> ads;
  // Profile categories with no ads in the inventory; draws landing on them
  // fell back to a uniform category.
  std::vector<std::string> warnings;
};

// n draws with replacement: category proportional to the profile (uniform
// over inventory categories when the profile is empty), then uniform within
// the category.
AdDraw sample_ads(const AdInventory& inventory, const PseudoProfile& profile, std::size_t n,
                  Rng& rng);

}  // namespace distort
