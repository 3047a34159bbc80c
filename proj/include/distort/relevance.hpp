#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "distort/searchsim.hpp"
#include "distort/textmine.hpp"

namespace distort {

struct RelevanceCount {
  std::size_t retrieved = 0;
  std::size_t relevant = 0;
};

// Per query id: hits on the page, and hits whose snippet satisfies the
// predicate. Throws kNotFound when a hit names a document absent from the
// corpus.
std::map<std::string, RelevanceCount> relevance_count(const std::vector<ResultPage>& pages,
                                                      const Corpus& corpus,
                                                      const RelevancePredicate& predicate);

// Convenience overload building a tokens-all predicate from the phrase.
std::map<std::string, RelevanceCount> relevance_count(const std::vector<ResultPage>& pages,
                                                      const Corpus& corpus,
                                                      const std::string& intent_phrase,
                                                      const PipelineConfig& config);

}  // namespace distort
