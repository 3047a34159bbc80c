// Porter suffix-stripping algorithm, following the rule tables of the
// original 1980 description (no later departures such as "logi" -> "log").

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include "distort/textmine.hpp"

namespace distort {

namespace {

class PorterWord {
 public:
  explicit PorterWord(std::string_view w) : w_(w) {}

  std::string take() && { return std::move(w_); }
  const std::string& str() const { return w_; }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  // Measure m of the first `len` letters: the number of VC sequences.
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && consonant(i)) ++i;
    while (i < len) {
      while (i < len && !consonant(i)) ++i;
      if (i >= len) break;
      while (i < len && consonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  // *d: ends with a double consonant.
  bool double_consonant(std::size_t len) const {
    return len >= 2 && w_[len - 1] == w_[len - 2] && consonant(len - 1);
  }

  // *o: ends consonant-vowel-consonant, the last consonant not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) return false;
    const char c = w_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  void replace_suffix(std::size_t suffix_len, std::string_view with) {
    w_.resize(w_.size() - suffix_len);
    w_ += with;
  }

  std::size_t size() const { return w_.size(); }
  char back() const { return w_.back(); }

 private:
  bool consonant(std::size_t i) const {
    switch (w_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 || !consonant(i - 1);
      default:
        return true;
    }
  }

  std::string w_;
};

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Longest-match rule application for steps 2-4: the first (longest) rule
// whose suffix matches is the only one considered.
template <std::size_t N, typename Cond>
void apply_rules(PorterWord& w, const std::array<Rule, N>& rules, Cond cond) {
  const Rule* best = nullptr;
  for (const auto& r : rules) {
    if (w.ends_with(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
  }
  if (!best) return;
  const std::size_t stem_len = w.size() - best->suffix.size();
  if (cond(*best, stem_len)) w.replace_suffix(best->suffix.size(), best->replacement);
}

void step1a(PorterWord& w) {
  if (w.ends_with("sses")) {
    w.replace_suffix(4, "ss");
  } else if (w.ends_with("ies")) {
    w.replace_suffix(3, "i");
  } else if (w.ends_with("ss")) {
    // unchanged
  } else if (w.ends_with("s")) {
    w.replace_suffix(1, "");
  }
}

void step1b(PorterWord& w) {
  if (w.ends_with("eed")) {
    if (w.measure(w.size() - 3) > 0) w.replace_suffix(3, "ee");
    return;
  }
  bool stripped = false;
  if (w.ends_with("ed") && w.has_vowel(w.size() - 2)) {
    w.replace_suffix(2, "");
    stripped = true;
  } else if (w.ends_with("ing") && w.has_vowel(w.size() - 3)) {
    w.replace_suffix(3, "");
    stripped = true;
  }
  if (!stripped) return;
  if (w.ends_with("at") || w.ends_with("bl") || w.ends_with("iz")) {
    w.replace_suffix(0, "e");
  } else if (w.double_consonant(w.size())) {
    const char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.replace_suffix(1, "");
  } else if (w.measure(w.size()) == 1 && w.cvc(w.size())) {
    w.replace_suffix(0, "e");
  }
}

void step1c(PorterWord& w) {
  if (w.ends_with("y") && w.has_vowel(w.size() - 1)) w.replace_suffix(1, "i");
}

constexpr std::array<Rule, 20> kStep2 = {{
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
    {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
    {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
    {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
    {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
}};

constexpr std::array<Rule, 7> kStep3 = {{
    {"icate", "ic"},
    {"ative", ""},
    {"alize", "al"},
    {"iciti", "ic"},
    {"ical", "ic"},
    {"ful", ""},
    {"ness", ""},
}};

constexpr std::array<Rule, 19> kStep4 = {{
    {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},    {"ic", ""},
    {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
    {"ent", ""},  {"ion", ""},  {"ou", ""},   {"ism", ""},   {"ate", ""},
    {"iti", ""},  {"ous", ""},  {"ive", ""},  {"ize", ""},
}};

void step5a(PorterWord& w) {
  if (!w.ends_with("e")) return;
  const std::size_t len = w.size() - 1;
  const int m = w.measure(len);
  if (m > 1 || (m == 1 && !w.cvc(len))) w.replace_suffix(1, "");
}

void step5b(PorterWord& w) {
  if (w.measure(w.size()) > 1 && w.double_consonant(w.size()) && w.back() == 'l') {
    w.replace_suffix(1, "");
  }
}

}  // namespace

std::string stem(std::string_view word) {
  if (word.empty() ||
      !std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
    return std::string(word);
  }
  PorterWord w(word);
  step1a(w);
  step1b(w);
  step1c(w);
  apply_rules(w, kStep2, [&](const Rule&, std::size_t len) { return w.measure(len) > 0; });
  apply_rules(w, kStep3, [&](const Rule&, std::size_t len) { return w.measure(len) > 0; });
  apply_rules(w, kStep4, [&](const Rule& r, std::size_t len) {
    if (w.measure(len) <= 1) return false;
    if (r.suffix == "ion") {
      const char c = w.str()[len - 1];
      return c == 's' || c == 't';
    }
    return true;
  });
  step5a(w);
  step5b(w);
  return std::move(w).take();
}

}  // namespace distort
