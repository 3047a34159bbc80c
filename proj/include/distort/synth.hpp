#pragma once

// Generators for the shipped synthetic data sets. Every generator is a pure
// function of its seed, so the files under data/ can be rebuilt and checked.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "distort/lexicon.hpp"
#include "distort/obfuscator.hpp"
#include "distort/searchsim.hpp"

namespace distort {

inline constexpr std::uint64_t kStandardCorpusSeed = 1000;
inline constexpr std::uint64_t kRealStyleSeed = 248;
inline constexpr std::uint64_t kFixtureSeed = 17;

// Topics of the standard corpus, in generation order.
const std::vector<std::string>& standard_topics();

// 200 documents per topic, ids D0001..D1000.
std::vector<CorpusDoc> standard_corpus(std::uint64_t seed = kStandardCorpusSeed,
                                       std::size_t per_topic = 200);

// A corpus on which `query` (pattern NITP) retrieves exactly 106 documents,
// 53 of them containing both "buy" and "toyota".
struct Q17Fixture {
  std::vector<CorpusDoc> docs;
  ObfuscatedQuery query;
  std::size_t top_k = 0;
  std::string relevance_phrase;
};
Q17Fixture q17_fixture();

// Short single-intent queries in the layout of a public query log.
std::vector<std::string> real_style_queries(std::uint64_t seed = kRealStyleSeed,
                                            std::size_t count = 248);

// AnonID \t Query \t QueryTime \t ItemRank \t ClickURL, with header.
void write_real_style_tsv(const std::vector<std::string>& queries, std::ostream& out,
                          std::uint64_t seed = kRealStyleSeed);

void write_corpus_jsonl(const std::vector<CorpusDoc>& docs, std::ostream& out);
void write_queries_jsonl(const std::vector<ObfuscatedQuery>& queries, std::ostream& out);

// The 121-query reference batch for "buy a toyota 2014" plus one extra NITPL
// query, ids Q1..Q122.
std::vector<ObfuscatedQuery> distortion_fixture_queries(const Lexicon& lexicon,
                                                        std::uint64_t seed = kFixtureSeed);

// Writes every generated file below `data_dir`, creating directories.
void write_synthetic_data(const std::filesystem::path& data_dir);

}  // namespace distort
