#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "distort/lexicon.hpp"
#include "distort/rng.hpp"

namespace distort {

// Ordered, duplicate-free sequence of query categories, e.g. "NITP".
class CategoryPattern {
 public:
  CategoryPattern() = default;
  // Throws kInvalidArgument on a repeated category or length outside 1..5.
  explicit CategoryPattern(std::vector<QueryCategory> categories);

  // Throws kInvalidArgument on an unknown letter or a repeated letter.
  static CategoryPattern parse(std::string_view text);
  std::string format() const;

  const std::vector<QueryCategory>& categories() const { return categories_; }
  std::size_t size() const { return categories_.size(); }
  bool contains(QueryCategory c) const;

  friend bool operator==(const CategoryPattern&, const CategoryPattern&) = default;

 private:
  std::vector<QueryCategory> categories_;
};

struct IntentQuery {
  std::string phrase;
  std::optional<std::string> root_verb;
  QueryCategory category = QueryCategory::kInformational;
};

struct ObfuscatedQuery {
  std::string id;
  CategoryPattern pattern;
  std::vector<std::string> segments;
  std::size_t intent_index = 0;
  // True when the pattern lacked the intent's category and the intent was
  // appended after the decoys.
  bool intent_appended = false;

  // Segments joined with ", ".
  std::string rendered() const;
};

struct PermutationArity {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
};

inline constexpr std::uint64_t kMaxPermutationSetSize = 20;

// n! / (n - k)!. Throws kInvalidArgument when k > n or n > 20.
std::uint64_t count_permutations(PermutationArity arity);

// All ordered duplicate-free arrangements of length k, in lexicographic order
// of their tag strings.
std::vector<CategoryPattern> enumerate_arrangements(const std::set<QueryCategory>& categories,
                                                    std::size_t k);

// Comma-separated pattern list, e.g. "I,IT,IP". Rejects duplicate tokens.
std::vector<CategoryPattern> parse_pattern_set(std::string_view spec);

// The fifteen patterns of the reference experiment.
inline constexpr std::string_view kReferencePatternSet =
    "I,IT,IP,TP,IL,NI,NIT,NIP,IPL,ITP,NITP,ITPL,NIPL,NITL,NITPL";

// Lexicon lookup first; otherwise rules in order: domain suffix -> N,
// leading verb from the verb graph -> T, four-digit year -> P, question word
// or >= 5 tokens -> L, anything else -> I.
QueryCategory categorize(std::string_view phrase, const Lexicon& lexicon);

struct AssembleOptions {
  // Replace the leading verb of decoy segments (when it is a graph verb) by
  // a verb related to the intent's root verb.
  bool verb_substitution = false;
  int verb_max_degree = 2;
};

ObfuscatedQuery assemble_query(const IntentQuery& intent, const CategoryPattern& pattern,
                               const Lexicon& lexicon, Rng& rng,
                               const AssembleOptions& options = {});

struct BatchOptions {
  AssembleOptions assemble;
  // Adds one intent-only query (pattern = the intent's own category) as Q1.
  bool include_original = false;
};

// |patterns| * per_pattern queries (plus the original when requested) with
// ids Q1..Qn. Every query draws from its own seed derived from one value of
// `rng`, so the batch is order-stable and parallelizable.
std::vector<ObfuscatedQuery> generate_batch(const IntentQuery& intent,
                                            const std::vector<CategoryPattern>& patterns,
                                            std::size_t per_pattern, const Lexicon& lexicon,
                                            Rng& rng, const BatchOptions& options = {});

}  // namespace distort
