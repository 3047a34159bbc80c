#pragma once

// Straight-line reference implementations used to cross-check the library.
// They share only tokenization with the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "distort/textmine.hpp"

namespace oracle {

struct Matrix {
  std::vector<std::string> terms;
  std::vector<std::vector<double>> rows;
};

inline std::vector<std::string> doc_terms(const std::string& text,
                                          const distort::PipelineConfig& config) {
  const auto tokens = distort::normalize_tokens(text, config);
  std::vector<std::string> terms = tokens;
  for (int n = 2; n <= config.ngram_max; ++n) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (int j = 1; j < n; ++j) gram += " " + tokens[i + static_cast<std::size_t>(j)];
      terms.push_back(gram);
    }
  }
  return terms;
}

// weight = raw count * ln(N / df), recomputed term by term.
inline Matrix tfidf(const std::vector<std::string>& texts, const distort::PipelineConfig& config) {
  std::vector<std::vector<std::string>> per_doc;
  std::map<std::string, int> vocabulary;
  for (const auto& t : texts) {
    per_doc.push_back(doc_terms(t, config));
    for (const auto& term : per_doc.back()) vocabulary[term] = 0;
  }
  Matrix m;
  for (const auto& [term, _] : vocabulary) m.terms.push_back(term);
  const double n_docs = static_cast<double>(texts.size());
  std::vector<double> idf;
  for (const auto& term : m.terms) {
    int df = 0;
    for (const auto& doc : per_doc) {
      if (std::find(doc.begin(), doc.end(), term) != doc.end()) ++df;
    }
    idf.push_back(std::log(n_docs / df));
  }
  for (const auto& doc : per_doc) {
    std::vector<double> row;
    for (std::size_t j = 0; j < m.terms.size(); ++j) {
      const auto tf = std::count(doc.begin(), doc.end(), m.terms[j]);
      row.push_back(static_cast<double>(tf) * idf[j]);
    }
    m.rows.push_back(row);
  }
  return m;
}

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Stratified deal: label 0 first, each label ordered by the salted id hash,
// one running counter modulo `folds`.
inline std::vector<int> folds_of(const std::vector<std::string>& ids, const std::vector<int>& labels,
                                 int folds, std::uint64_t seed) {
  std::vector<int> fold(ids.size(), -1);
  int counter = 0;
  for (int label = 0; label <= 1; ++label) {
    std::vector<std::pair<std::pair<std::uint64_t, std::string>, std::size_t>> keyed;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (labels[i] == label) keyed.push_back({{splitmix(fnv(ids[i]) ^ splitmix(seed)), ids[i]}, i});
    }
    std::sort(keyed.begin(), keyed.end());
    for (const auto& entry : keyed) fold[entry.second] = counter++ % folds;
  }
  return fold;
}

struct Neighbour {
  double distance;
  std::string id;
  int label;
};

// Fraction of items whose k-nearest-neighbour vote (trained on the other
// folds) equals their label.
inline double knn_cv_accuracy(const std::vector<std::vector<double>>& vectors,
                              const std::vector<std::string>& ids, const std::vector<int>& labels,
                              int folds, std::uint64_t seed, int k) {
  const auto fold = folds_of(ids, labels, folds, seed);
  int correct = 0;
  for (std::size_t t = 0; t < vectors.size(); ++t) {
    std::vector<Neighbour> all;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (fold[i] == fold[t]) continue;
      double sq = 0.0;
      for (std::size_t j = 0; j < vectors[t].size(); ++j) {
        sq += (vectors[i][j] - vectors[t][j]) * (vectors[i][j] - vectors[t][j]);
      }
      all.push_back({std::sqrt(sq), ids[i], labels[i]});
    }
    std::sort(all.begin(), all.end(), [](const Neighbour& a, const Neighbour& b) {
      return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
    });
    int ones = 0;
    for (int n = 0; n < k; ++n) ones += all[static_cast<std::size_t>(n)].label;
    const int predicted = ones * 2 > k ? 1 : 0;
    if (predicted == labels[t]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(vectors.size());
}

}  // namespace oracle
