#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace distort {

struct PipelineConfig {
  bool lowercase = true;
  std::set<std::string, std::less<>> stopwords;
  bool stem = true;
  int ngram_max = 1;
  // IDF always uses the natural logarithm.
};

// Newline-delimited list; blank lines and lines starting with '#' ignored.
std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path);

// Original Porter (1980) suffix stripper. Input is expected lowercase ASCII
// alphabetic; anything else is returned unchanged.
std::string stem(std::string_view word);

// Lowercase (if configured), split on non-alphanumeric ASCII boundaries
// (bytes >= 0x80 count as word characters), drop stop words, stem (if
// configured). Stemming runs to a fixpoint and stop words are filtered again
// afterwards, which makes the function idempotent on its own output.
std::vector<std::string> normalize_tokens(std::string_view text, const PipelineConfig& config);

// Contiguous n-token windows joined by single spaces.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n);

// Normalized tokens followed by every 2..ngram_max gram of them.
std::vector<std::string> terms_of(std::string_view text, const PipelineConfig& config);

struct WordVectorMatrix {
  std::vector<std::string> terms;  // sorted
  std::vector<std::string> doc_ids;
  std::vector<std::vector<double>> rows;

  // Column of `term`, or -1.
  long column(std::string_view term) const;
  double weight(std::size_t row, std::string_view term) const;
};

using TextDoc = std::pair<std::string, std::string>;  // (doc id, text)

// weight(t, d) = tf(t, d) * ln(N / df(t)). Throws kInvalidArgument when no
// document yields any term.
WordVectorMatrix build_matrix(const std::vector<TextDoc>& docs, const PipelineConfig& config);

// Header row of terms (first cell "doc_id"), one row per document.
void write_matrix_csv(const WordVectorMatrix& matrix, std::ostream& out);

enum class RelevanceMode {
  kTokensAll,    // every normalized intent token present
  kSingleToken,  // one key token present
};

// Decides whether a snippet is relevant to an intent phrase.
class RelevancePredicate {
 public:
  // In single-token mode the key is `key_term` when non-empty, otherwise
  // the longest normalized intent token (last one on ties). Throws when the
  // phrase normalizes to nothing.
  RelevancePredicate(std::string_view intent_phrase, PipelineConfig config,
                     RelevanceMode mode = RelevanceMode::kTokensAll,
                     std::string_view key_term = {});

  bool relevant(std::string_view text) const;
  const std::vector<std::string>& required_tokens() const { return required_; }
  RelevanceMode mode() const { return mode_; }
  const PipelineConfig& config() const { return config_; }

 private:
  PipelineConfig config_;
  RelevanceMode mode_;
  std::vector<std::string> required_;
};

std::string_view relevance_mode_name(RelevanceMode mode);
RelevanceMode parse_relevance_mode(std::string_view name);

}  // namespace distort
