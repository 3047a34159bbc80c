#include "distort/relevance.hpp"

#include "distort/error.hpp"

namespace distort {

std::map<std::string, RelevanceCount> relevance_count(const std::vector<ResultPage>& pages,
                                                      const Corpus& corpus,
                                                      const RelevancePredicate& predicate) {
  std::map<std::string, RelevanceCount> out;
  for (const auto& page : pages) {
    auto& row = out[page.query_id];
    for (const auto& hit : page.hits) {
      const CorpusDoc* doc = corpus.find(hit.doc_id);
      if (!doc) throw not_found("retrieved document '" + hit.doc_id + "' is not in the corpus");
      ++row.retrieved;
      if (predicate.relevant(doc->snippet)) ++row.relevant;
    }
  }
  return out;
}

std::map<std::string, RelevanceCount> relevance_count(const std::vector<ResultPage>& pages,
                                                      const Corpus& corpus,
                                                      const std::string& intent_phrase,
                                                      const PipelineConfig& config) {
  return relevance_count(pages, corpus, RelevancePredicate(intent_phrase, config));
}

}  // namespace distort
