#include "distort/obfuscator.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "distort/error.hpp"
#include "distort/strings.hpp"

namespace distort {

CategoryPattern::CategoryPattern(std::vector<QueryCategory> categories)
    : categories_(std::move(categories)) {
  if (categories_.empty() || categories_.size() > kAllCategories.size()) {
    throw invalid_argument("pattern length must be in 1..5");
  }
  std::set<QueryCategory> seen;
  for (auto c : categories_) {
    if (!seen.insert(c).second) {
      throw invalid_argument(std::string("repeated category '") + category_tag(c) +
                             "' in pattern");
    }
  }
}

CategoryPattern CategoryPattern::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw invalid_argument("empty pattern");
  std::vector<QueryCategory> cats;
  for (char ch : text) {
    const auto c = category_from_tag(ch);
    if (std::find(cats.begin(), cats.end(), c) != cats.end()) {
      throw invalid_argument("repeated letter '" + std::string(1, ch) + "' in pattern '" +
                             std::string(text) + "'");
    }
    cats.push_back(c);
  }
  return CategoryPattern(std::move(cats));
}

std::string CategoryPattern::format() const {
  std::string out;
  for (auto c : categories_) out += category_tag(c);
  return out;
}

bool CategoryPattern::contains(QueryCategory c) const {
  return std::find(categories_.begin(), categories_.end(), c) != categories_.end();
}

std::string ObfuscatedQuery::rendered() const { return join(segments, ", "); }

std::uint64_t count_permutations(PermutationArity arity) {
  if (arity.k > arity.n) {
    throw invalid_argument("k (" + std::to_string(arity.k) + ") exceeds n (" +
                           std::to_string(arity.n) + ")");
  }
  if (arity.n > kMaxPermutationSetSize) {
    throw invalid_argument("n above overflow guard (" + std::to_string(kMaxPermutationSetSize) +
                           ")");
  }
  std::uint64_t result = 1;
  for (std::uint64_t i = arity.n - arity.k + 1; i <= arity.n; ++i) result *= i;
  return result;
}

std::vector<CategoryPattern> enumerate_arrangements(const std::set<QueryCategory>& categories,
                                                    std::size_t k) {
  if (k < 1 || k > categories.size()) {
    throw invalid_argument("arrangement length " + std::to_string(k) + " outside 1.." +
                           std::to_string(categories.size()));
  }
  std::string tags;
  for (auto c : categories) tags += category_tag(c);
  std::sort(tags.begin(), tags.end());

  std::vector<CategoryPattern> out;
  std::string current;
  std::vector<bool> used(tags.size(), false);
  // Depth-first over the sorted alphabet yields lexicographic order.
  auto recurse = [&](auto& self) -> void {
    if (current.size() == k) {
      out.push_back(CategoryPattern::parse(current));
      return;
    }
    for (std::size_t i = 0; i < tags.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      current.push_back(tags[i]);
      self(self);
      current.pop_back();
      used[i] = false;
    }
  };
  recurse(recurse);
  return out;
}

std::vector<CategoryPattern> parse_pattern_set(std::string_view spec) {
  std::vector<CategoryPattern> out;
  std::set<std::string> seen;
  for (const auto& raw : split(spec, ',')) {
    const std::string token(trim(raw));
    if (token.empty()) throw invalid_argument("empty token in pattern set");
    auto pattern = CategoryPattern::parse(token);
    if (!seen.insert(pattern.format()).second) {
      throw invalid_argument("duplicate pattern '" + token + "' in pattern set");
    }
    out.push_back(std::move(pattern));
  }
  return out;
}

namespace {

std::vector<std::string> words_of(std::string_view phrase) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : phrase) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string strip_punct(std::string_view w) {
  std::size_t b = 0, e = w.size();
  while (b < e && std::ispunct(static_cast<unsigned char>(w[b]))) ++b;
  while (e > b && std::ispunct(static_cast<unsigned char>(w[e - 1]))) --e;
  return to_lower(w.substr(b, e - b));
}

bool has_domain_suffix(const std::vector<std::string>& words) {
  static const std::regex kDomain(R"(^[a-z0-9][a-z0-9-]*(\.[a-z0-9-]+)*\.[a-z]{2,6}$)");
  return std::any_of(words.begin(), words.end(), [](const std::string& w) {
    return std::regex_match(strip_punct(w), kDomain);
  });
}

bool has_year(const std::vector<std::string>& words) {
  return std::any_of(words.begin(), words.end(), [](const std::string& w) {
    const std::string t = strip_punct(w);
    const auto digit = [](unsigned char c) { return std::isdigit(c) != 0; };
    if (t.size() != 4 || !std::all_of(t.begin(), t.end(), digit)) return false;
    const int year = std::stoi(t);
    return year >= 1900 && year <= 2099;
  });
}

bool is_question_form(const std::vector<std::string>& words) {
  static const std::set<std::string> kQuestionWords = {"who",   "what", "when",  "where",
                                                       "why",   "how",  "which", "whose",
                                                       "whom"};
  if (words.size() >= 5) return true;
  return std::any_of(words.begin(), words.end(), [](const std::string& w) {
    return kQuestionWords.count(strip_punct(w)) > 0 || w.find('?') != std::string::npos;
  });
}

std::string match_case(const std::string& replacement, const std::string& original) {
  std::string out = replacement;
  if (!original.empty() && !out.empty() &&
      std::isupper(static_cast<unsigned char>(original[0]))) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

}  // namespace

QueryCategory categorize(std::string_view phrase, const Lexicon& lexicon) {
  if (const Keyword* kw = lexicon.find(phrase)) return kw->category;
  const auto words = words_of(phrase);
  if (words.empty()) return QueryCategory::kInformational;
  if (has_domain_suffix(words)) return QueryCategory::kNavigational;
  if (lexicon.verbs().contains(strip_punct(words.front()))) return QueryCategory::kTransactional;
  if (has_year(words)) return QueryCategory::kTemporal;
  if (is_question_form(words)) return QueryCategory::kNaturalLanguage;
  return QueryCategory::kInformational;
}

ObfuscatedQuery assemble_query(const IntentQuery& intent, const CategoryPattern& pattern,
                               const Lexicon& lexicon, Rng& rng,
                               const AssembleOptions& options) {
  if (trim(intent.phrase).empty()) throw invalid_argument("intent phrase must be non-empty");
  if (pattern.size() == 0) throw invalid_argument("empty category pattern");
  for (auto c : pattern.categories()) {
    if (c != intent.category && lexicon.empty(c)) {
      throw not_found(std::string("lexicon category ") + category_tag(c) +
                      " is empty but required by pattern " + pattern.format());
    }
  }

  std::vector<std::string> substitutes;
  if (options.verb_substitution && intent.root_verb &&
      lexicon.verbs().contains(*intent.root_verb)) {
    substitutes = related_verbs(lexicon, *intent.root_verb, options.verb_max_degree);
  }

  ObfuscatedQuery q;
  q.pattern = pattern;
  std::vector<std::string> used{std::string(trim(intent.phrase))};
  bool placed = false;
  for (auto c : pattern.categories()) {
    if (c == intent.category && !placed) {
      q.intent_index = q.segments.size();
      q.segments.emplace_back(trim(intent.phrase));
      placed = true;
      continue;
    }
    std::string decoy = decoy_candidates(lexicon, c, 1, rng, used).front().text;
    used.push_back(decoy);
    if (!substitutes.empty()) {
      auto words = words_of(decoy);
      if (!words.empty() && lexicon.verbs().contains(strip_punct(words.front()))) {
        const auto& verb = substitutes[rng.uniform_index(substitutes.size())];
        words.front() = match_case(verb, words.front());
        std::string candidate = join(words, " ");
        if (!iequals(candidate, trim(intent.phrase))) decoy = std::move(candidate);
      }
    }
    q.segments.push_back(std::move(decoy));
  }
  if (!placed) {
    q.intent_index = q.segments.size();
    q.segments.emplace_back(trim(intent.phrase));
    q.intent_appended = true;
  }
  return q;
}

std::vector<ObfuscatedQuery> generate_batch(const IntentQuery& intent,
                                            const std::vector<CategoryPattern>& patterns,
                                            std::size_t per_pattern, const Lexicon& lexicon,
                                            Rng& rng, const BatchOptions& options) {
  if (per_pattern < 1) throw invalid_argument("per_pattern must be >= 1");
  const std::uint64_t base = rng.next();
  std::vector<ObfuscatedQuery> out;
  out.reserve(patterns.size() * per_pattern + (options.include_original ? 1 : 0));
  std::uint64_t stream = 0;
  auto push = [&](const CategoryPattern& p) {
    Rng child(derive_seed(base, stream++));
    auto q = assemble_query(intent, p, lexicon, child, options.assemble);
    q.id = "Q" + std::to_string(out.size() + 1);
    out.push_back(std::move(q));
  };
  if (options.include_original) push(CategoryPattern({intent.category}));
  for (const auto& p : patterns) {
    for (std::size_t i = 0; i < per_pattern; ++i) push(p);
  }
  return out;
}

}  // namespace distort
