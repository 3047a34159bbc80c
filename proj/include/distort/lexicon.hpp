#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "distort/rng.hpp"

namespace distort {

// Web search query types. The enumerator order is the canonical order used
// for storage; lexicographic ordering of patterns uses the tag letters.
enum class QueryCategory {
  kNavigational,     // N
  kInformational,    // I
  kTransactional,    // T
  kNaturalLanguage,  // L
  kTemporal,         // P
};

inline constexpr std::array<QueryCategory, 5> kAllCategories = {
    QueryCategory::kNavigational, QueryCategory::kInformational,
    QueryCategory::kTransactional, QueryCategory::kNaturalLanguage,
    QueryCategory::kTemporal};

char category_tag(QueryCategory c);
// Throws kInvalidArgument on anything outside {N, I, T, L, P}.
QueryCategory category_from_tag(char tag);
std::string_view category_name(QueryCategory c);

struct Keyword {
  std::string text;
  QueryCategory category = QueryCategory::kInformational;
  double visibility = 1.0;
  std::string topic;
};

// Undirected simple graph of verb lemmas linked by synonymy.
class VerbGraph {
 public:
  void add_verb(const std::string& verb);
  // Throws on self-loops and duplicate edges.
  void add_edge(const std::string& a, const std::string& b);

  bool contains(std::string_view verb) const;
  std::size_t verb_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::set<std::string>& neighbors(const std::string& verb) const;

  // Shortest-path distance, or nullopt when unreachable.
  std::optional<int> distance(const std::string& from, const std::string& to) const;

  // Verbs at distance 1..max_degree from root, sorted by (distance, text).
  std::vector<std::string> related(const std::string& root, int max_degree) const;

 private:
  std::map<std::string, std::set<std::string>, std::less<>> adjacency_;
  std::size_t edge_count_ = 0;
};

class Lexicon {
 public:
  Lexicon() = default;

  // Validates and inserts; throws kSchema on empty text, negative or
  // non-finite visibility, text containing the ", " segment separator, or a
  // duplicate (case-insensitive) text within the category.
  void add_keyword(Keyword keyword);

  VerbGraph& verbs() { return verbs_; }
  const VerbGraph& verbs() const { return verbs_; }

  // Throws kNotFound for an empty category.
  const std::vector<Keyword>& keywords(QueryCategory c) const;
  std::size_t size(QueryCategory c) const;
  bool empty(QueryCategory c) const { return size(c) == 0; }

  // Case-insensitive exact lookup over all categories.
  const Keyword* find(std::string_view text) const;

 private:
  std::array<std::vector<Keyword>, 5> by_category_;
  VerbGraph verbs_;
};

// Parses the lexicon JSON file:
//   {"keywords": [{"text", "category", "visibility", "topic"}...],
//    "verbs": [{"a", "b"}...]}
Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon parse_lexicon(std::string_view json_text);

std::vector<std::string> related_verbs(const Lexicon& lexicon, const std::string& root,
                                       int max_degree);

// Draws `count` distinct keywords of `category` without replacement, each
// step choosing among the remaining keywords with probability proportional to
// visibility (uniformly if the remaining weights are all zero). Keywords whose
// text matches any entry of `exclude` (case-insensitive) are never returned.
std::vector<Keyword> decoy_candidates(const Lexicon& lexicon, QueryCategory category,
                                      std::size_t count, Rng& rng,
                                      const std::vector<std::string>& exclude = {});

}  // namespace distort
