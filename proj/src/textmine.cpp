#include "distort/textmine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "distort/error.hpp"
#include "distort/strings.hpp"

namespace distort {

std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open stop-word list " + path.string());
  std::set<std::string, std::less<>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto w = trim(line);
    if (w.empty() || w.front() == '#') continue;
    out.insert(to_lower(w));
  }
  return out;
}

namespace {

bool word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_stop(const PipelineConfig& config, const std::string& token) {
  return !config.stopwords.empty() && config.stopwords.count(to_lower(token)) > 0;
}

std::string stem_fixpoint(std::string token) {
  while (true) {
    std::string next = stem(token);
    if (next == token) return token;
    token = std::move(next);
  }
}

}  // namespace

std::vector<std::string> normalize_tokens(std::string_view text, const PipelineConfig& config) {
  const std::string cased = config.lowercase ? to_lower(text) : std::string(text);
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (!is_stop(config, cur)) {
      if (config.stem) {
        cur = stem_fixpoint(std::move(cur));
        if (cur.empty() || is_stop(config, cur)) {
          cur.clear();
          return;
        }
      }
      out.push_back(std::move(cur));
    }
    cur.clear();
  };
  for (char c : cased) {
    if (word_char(c)) {
      cur += c;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n) {
  if (n < 1) throw invalid_argument("n-gram length must be >= 1");
  const auto len = static_cast<std::size_t>(n);
  std::vector<std::string> out;
  if (tokens.size() < len) return out;
  out.reserve(tokens.size() - len + 1);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (std::size_t j = 1; j < len; ++j) {
      gram += ' ';
      gram += tokens[i + j];
    }
    out.push_back(std::move(gram));
  }
  return out;
}

std::vector<std::string> terms_of(std::string_view text, const PipelineConfig& config) {
  if (config.ngram_max < 1) throw invalid_argument("ngram_max must be >= 1");
  auto tokens = normalize_tokens(text, config);
  std::vector<std::string> terms = tokens;
  for (int n = 2; n <= config.ngram_max; ++n) {
    auto grams = ngrams(tokens, n);
    terms.insert(terms.end(), std::make_move_iterator(grams.begin()),
                 std::make_move_iterator(grams.end()));
  }
  return terms;
}

long WordVectorMatrix::column(std::string_view term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  if (it == terms.end() || *it != term) return -1;
  return static_cast<long>(it - terms.begin());
}

double WordVectorMatrix::weight(std::size_t row, std::string_view term) const {
  const long c = column(term);
  return c < 0 ? 0.0 : rows.at(row)[static_cast<std::size_t>(c)];
}

WordVectorMatrix build_matrix(const std::vector<TextDoc>& docs, const PipelineConfig& config) {
  if (docs.empty()) throw invalid_argument("build_matrix needs at least one document");

  std::vector<std::unordered_map<std::string, int>> counts(docs.size());
  std::unordered_map<std::string, int> df;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto& term : terms_of(docs[d].second, config)) ++counts[d][std::move(term)];
    for (const auto& [term, _] : counts[d]) ++df[term];
  }
  if (df.empty()) throw invalid_argument("all documents normalize to empty token lists");

  WordVectorMatrix m;
  m.terms.reserve(df.size());
  for (const auto& [term, _] : df) m.terms.push_back(term);
  std::sort(m.terms.begin(), m.terms.end());

  std::vector<double> idf(m.terms.size());
  const double n_docs = static_cast<double>(docs.size());
  for (std::size_t j = 0; j < m.terms.size(); ++j) {
    idf[j] = std::log(n_docs / static_cast<double>(df.at(m.terms[j])));
  }

  m.doc_ids.reserve(docs.size());
  m.rows.assign(docs.size(), std::vector<double>(m.terms.size(), 0.0));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    m.doc_ids.push_back(docs[d].first);
    for (const auto& [term, tf] : counts[d]) {
      const auto j = static_cast<std::size_t>(m.column(term));
      m.rows[d][j] = static_cast<double>(tf) * idf[j];
    }
  }
  return m;
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_matrix_csv(const WordVectorMatrix& matrix, std::ostream& out) {
  out << "doc_id";
  for (const auto& t : matrix.terms) out << ',' << csv_cell(t);
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    out << csv_cell(matrix.doc_ids[r]);
    for (double w : matrix.rows[r]) {
      std::snprintf(buf, sizeof buf, "%.17g", w);
      out << ',' << buf;
    }
    out << '\n';
  }
}

RelevancePredicate::RelevancePredicate(std::string_view intent_phrase, PipelineConfig config,
                                       RelevanceMode mode, std::string_view key_term)
    : config_(std::move(config)), mode_(mode) {
  auto tokens = normalize_tokens(intent_phrase, config_);
  if (tokens.empty()) {
    throw invalid_argument("intent phrase '" + std::string(intent_phrase) +
                           "' normalizes to no tokens");
  }
  if (mode_ == RelevanceMode::kTokensAll) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    required_ = std::move(tokens);
    return;
  }
  if (!key_term.empty()) {
    auto key = normalize_tokens(key_term, config_);
    if (key.size() != 1) {
      throw invalid_argument("relevance key term must normalize to exactly one token");
    }
    required_ = std::move(key);
    return;
  }
  std::string longest;
  for (const auto& t : tokens) {
    if (t.size() >= longest.size()) longest = t;
  }
  required_ = {longest};
}

bool RelevancePredicate::relevant(std::string_view text) const {
  auto tokens = normalize_tokens(text, config_);
  std::sort(tokens.begin(), tokens.end());
  return std::all_of(required_.begin(), required_.end(), [&](const std::string& t) {
    return std::binary_search(tokens.begin(), tokens.end(), t);
  });
}

std::string_view relevance_mode_name(RelevanceMode mode) {
  return mode == RelevanceMode::kTokensAll ? "tokens-all" : "single-token";
}

RelevanceMode parse_relevance_mode(std::string_view name) {
  if (name == "tokens-all") return RelevanceMode::kTokensAll;
  if (name == "single-token") return RelevanceMode::kSingleToken;
  throw invalid_argument("unknown relevance mode '" + std::string(name) + "'");
}

}  // namespace distort
