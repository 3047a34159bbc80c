#include "distort/lexicon.hpp"

#include <cmath>
#include <deque>
#include <utility>

#include "distort/error.hpp"
#include "distort/strings.hpp"
#include "json.hpp"

namespace distort {

namespace {

constexpr std::array<char, 5> kTags = {'N', 'I', 'T', 'L', 'P'};

std::size_t index_of(QueryCategory c) { return static_cast<std::size_t>(c); }

}  // namespace

char category_tag(QueryCategory c) { return kTags[index_of(c)]; }

QueryCategory category_from_tag(char tag) {
  for (std::size_t i = 0; i < kTags.size(); ++i) {
    if (kTags[i] == tag) return static_cast<QueryCategory>(i);
  }
  throw invalid_argument(std::string("unknown query category '") + tag + "'");
}

std::string_view category_name(QueryCategory c) {
  switch (c) {
    case QueryCategory::kNavigational:
      return "navigational";
    case QueryCategory::kInformational:
      return "informational";
    case QueryCategory::kTransactional:
      return "transactional";
    case QueryCategory::kNaturalLanguage:
      return "natural-language";
    case QueryCategory::kTemporal:
      return "temporal";
  }
  return "?";
}

// --- VerbGraph ---

void VerbGraph::add_verb(const std::string& verb) {
  if (trim(verb).empty()) throw schema_error("verb lemma must be non-empty");
  adjacency_.try_emplace(verb);
}

void VerbGraph::add_edge(const std::string& a, const std::string& b) {
  if (a == b) throw schema_error("verb graph self-loop on '" + a + "'");
  add_verb(a);
  add_verb(b);
  if (!adjacency_[a].insert(b).second) {
    throw schema_error("duplicate verb edge (" + a + ", " + b + ")");
  }
  adjacency_[b].insert(a);
  ++edge_count_;
}

bool VerbGraph::contains(std::string_view verb) const {
  return adjacency_.find(verb) != adjacency_.end();
}

const std::set<std::string>& VerbGraph::neighbors(const std::string& verb) const {
  auto it = adjacency_.find(verb);
  if (it == adjacency_.end()) throw not_found("unknown verb '" + verb + "'");
  return it->second;
}

std::optional<int> VerbGraph::distance(const std::string& from, const std::string& to) const {
  neighbors(from);
  neighbors(to);
  std::map<std::string, int, std::less<>> dist{{from, 0}};
  std::deque<std::string> frontier{from};
  while (!frontier.empty()) {
    std::string v = std::move(frontier.front());
    frontier.pop_front();
    if (v == to) return dist[v];
    for (const auto& w : adjacency_.at(v)) {
      if (dist.emplace(w, dist[v] + 1).second) frontier.push_back(w);
    }
  }
  return std::nullopt;
}

std::vector<std::string> VerbGraph::related(const std::string& root, int max_degree) const {
  if (max_degree < 1) throw invalid_argument("max_degree must be >= 1");
  neighbors(root);
  std::vector<std::string> out;
  std::set<std::string> seen{root};
  std::set<std::string> level{root};
  for (int d = 1; d <= max_degree && !level.empty(); ++d) {
    std::set<std::string> next;
    for (const auto& v : level) {
      for (const auto& w : adjacency_.at(v)) {
        if (seen.insert(w).second) next.insert(w);
      }
    }
    // std::set iteration gives the lexicographic tie-break within a level.
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

// --- Lexicon ---

void Lexicon::add_keyword(Keyword keyword) {
  const std::string_view text = trim(keyword.text);
  if (text.empty()) throw schema_error("keyword field 'text' must be non-empty");
  if (text.find(", ") != std::string_view::npos) {
    throw schema_error("keyword field 'text' must not contain \", \": '" + keyword.text + "'");
  }
  if (!std::isfinite(keyword.visibility) || keyword.visibility < 0.0) {
    throw schema_error("keyword field 'visibility' must be a finite value >= 0 for '" +
                       keyword.text + "'");
  }
  keyword.text = std::string(text);
  auto& bucket = by_category_[index_of(keyword.category)];
  for (const auto& existing : bucket) {
    if (iequals(existing.text, keyword.text)) {
      throw schema_error("duplicate keyword '" + keyword.text + "' in category " +
                         category_tag(keyword.category));
    }
  }
  bucket.push_back(std::move(keyword));
}

const std::vector<Keyword>& Lexicon::keywords(QueryCategory c) const {
  const auto& bucket = by_category_[index_of(c)];
  if (bucket.empty()) {
    throw not_found(std::string("lexicon has no keywords in category ") + category_tag(c));
  }
  return bucket;
}

std::size_t Lexicon::size(QueryCategory c) const { return by_category_[index_of(c)].size(); }

const Keyword* Lexicon::find(std::string_view text) const {
  const std::string needle = to_lower(trim(text));
  for (const auto& bucket : by_category_) {
    for (const auto& kw : bucket) {
      if (to_lower(kw.text) == needle) return &kw;
    }
  }
  return nullptr;
}

Lexicon parse_lexicon(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw schema_error(std::string("lexicon is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw schema_error("lexicon root must be an object");
  if (!doc.contains("keywords") || !doc["keywords"].is_array()) {
    throw schema_error("lexicon field 'keywords' must be an array");
  }
  if (!doc.contains("verbs") || !doc["verbs"].is_array()) {
    throw schema_error("lexicon field 'verbs' must be an array");
  }

  Lexicon lexicon;
  std::size_t i = 0;
  for (const auto& item : doc["keywords"]) {
    const std::string where = "keywords[" + std::to_string(i++) + "]";
    if (!item.is_object()) throw schema_error(where + " must be an object");
    Keyword kw;
    if (!item.contains("text") || !item["text"].is_string()) {
      throw schema_error(where + ".text must be a string");
    }
    kw.text = item["text"].get<std::string>();
    if (trim(kw.text).empty()) throw schema_error(where + ".text must be non-empty");
    if (!item.contains("category") || !item["category"].is_string() ||
        item["category"].get<std::string>().size() != 1) {
      throw schema_error(where + ".category must be one of N, I, T, L, P");
    }
    try {
      kw.category = category_from_tag(item["category"].get<std::string>()[0]);
    } catch (const Error&) {
      throw schema_error(where + ".category must be one of N, I, T, L, P");
    }
    if (item.contains("visibility")) {
      if (!item["visibility"].is_number()) throw schema_error(where + ".visibility must be a number");
      kw.visibility = item["visibility"].get<double>();
      if (kw.visibility < 0.0) throw schema_error(where + ".visibility must be >= 0");
    }
    if (item.contains("topic")) {
      if (!item["topic"].is_string()) throw schema_error(where + ".topic must be a string");
      kw.topic = item["topic"].get<std::string>();
    }
    lexicon.add_keyword(std::move(kw));
  }

  i = 0;
  for (const auto& edge : doc["verbs"]) {
    const std::string where = "verbs[" + std::to_string(i++) + "]";
    if (!edge.is_object() || !edge.contains("a") || !edge.contains("b") ||
        !edge["a"].is_string() || !edge["b"].is_string()) {
      throw schema_error(where + " must be an object with string fields 'a' and 'b'");
    }
    lexicon.verbs().add_edge(to_lower(edge["a"].get<std::string>()),
                             to_lower(edge["b"].get<std::string>()));
  }
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw io_error("lexicon file not found: " + path.string());
  return parse_lexicon(read_file(path.string()));
}

std::vector<std::string> related_verbs(const Lexicon& lexicon, const std::string& root,
                                       int max_degree) {
  return lexicon.verbs().related(root, max_degree);
}

std::vector<Keyword> decoy_candidates(const Lexicon& lexicon, QueryCategory category,
                                      std::size_t count, Rng& rng,
                                      const std::vector<std::string>& exclude) {
  if (count == 0) throw invalid_argument("decoy count must be positive");
  const auto& all = lexicon.keywords(category);

  std::vector<const Keyword*> pool;
  for (const auto& kw : all) {
    bool excluded = false;
    for (const auto& e : exclude) {
      if (iequals(trim(e), kw.text)) {
        excluded = true;
        break;
      }
    }
    if (!excluded) pool.push_back(&kw);
  }
  if (count > pool.size()) {
    throw invalid_argument("requested " + std::to_string(count) + " decoys but category " +
                           category_tag(category) + " has only " +
                           std::to_string(pool.size()) + " available");
  }

  std::vector<Keyword> out;
  out.reserve(count);
  while (out.size() < count) {
    double total = 0.0;
    for (const auto* kw : pool) total += kw->visibility;
    std::size_t pick = pool.size() - 1;
    if (total > 0.0) {
      const double target = rng.uniform_unit() * total;
      double acc = 0.0;
      for (std::size_t j = 0; j < pool.size(); ++j) {
        acc += pool[j]->visibility;
        if (target < acc) {
          pick = j;
          break;
        }
      }
      // Rounding can leave `pick` on a trailing zero-weight entry.
      while (pool[pick]->visibility == 0.0 && pick > 0) --pick;
    } else {
      pick = static_cast<std::size_t>(rng.uniform_index(pool.size()));
    }
    out.push_back(*pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace distort
