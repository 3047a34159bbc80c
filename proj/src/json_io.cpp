#include "distort/json_io.hpp"

#include "distort/error.hpp"

namespace distort {

using nlohmann::json;

json to_json(const ObfuscatedQuery& q) {
  return {{"id", q.id},
          {"pattern", q.pattern.format()},
          {"segments", q.segments},
          {"intent_index", q.intent_index}};
}

ObfuscatedQuery obfuscated_query_from_json(const json& j) {
  try {
    ObfuscatedQuery q;
    q.id = j.at("id").get<std::string>();
    q.pattern = CategoryPattern::parse(j.at("pattern").get<std::string>());
    q.segments = j.at("segments").get<std::vector<std::string>>();
    q.intent_index = j.at("intent_index").get<std::size_t>();
    if (q.intent_index >= q.segments.size()) throw schema_error("intent_index out of range");
    return q;
  } catch (const json::exception& e) {
    throw schema_error(std::string("malformed obfuscated query: ") + e.what());
  }
}

json to_json(const ResultPage& page) {
  json hits = json::array();
  for (const auto& h : page.hits) hits.push_back({{"doc_id", h.doc_id}, {"score", h.score}});
  return {{"query_id", page.query_id}, {"top_k", page.top_k}, {"hits", hits}};
}

json to_json(const Ad& ad) {
  return {{"id", ad.id},
          {"text", ad.text},
          {"category", ad.category},
          {"specific_tags", ad.specific_tags}};
}

json to_json(const PseudoProfile& profile) {
  json weights = json::object();
  for (const auto& [c, w] : profile.category_weights) weights[c] = w;
  return weights;
}

PseudoProfile profile_from_json(const json& j) {
  PseudoProfile p;
  for (const auto& [c, w] : j.items()) p.add(c, w.get<std::uint64_t>());
  return p;
}

json to_json(const ExposureReport& r) {
  json breakdown = json::object();
  for (const auto& [c, n] : r.conceptual_breakdown) breakdown[c] = n;
  return {{"total_ads", r.total_ads},
          {"specific_ads", r.specific_ads},
          {"exposure", r.exposure},
          {"conceptual_breakdown", breakdown}};
}

ExposureReport exposure_from_json(const json& j) {
  ExposureReport r;
  r.total_ads = j.at("total_ads").get<std::size_t>();
  r.specific_ads = j.at("specific_ads").get<std::size_t>();
  r.exposure = j.at("exposure").get<double>();
  for (const auto& [c, n] : j.at("conceptual_breakdown").items()) {
    r.conceptual_breakdown[c] = n.get<std::size_t>();
  }
  return r;
}

json to_json(const AccuracyReport& r) {
  return {{"classifier", r.classifier},
          {"folds", r.folds},
          {"overall_accuracy", r.overall_accuracy},
          {"per_fold", r.per_fold},
          {"confusion",
           {{"tp", r.confusion.tp},
            {"tn", r.confusion.tn},
            {"fp", r.confusion.fp},
            {"fn", r.confusion.fn}}}};
}

AccuracyReport accuracy_from_json(const json& j) {
  AccuracyReport r;
  r.classifier = j.at("classifier").get<std::string>();
  r.folds = j.at("folds").get<int>();
  r.overall_accuracy = j.at("overall_accuracy").get<double>();
  r.per_fold = j.at("per_fold").get<std::vector<double>>();
  const auto& c = j.at("confusion");
  r.confusion = {c.at("tp").get<std::size_t>(), c.at("tn").get<std::size_t>(),
                 c.at("fp").get<std::size_t>(), c.at("fn").get<std::size_t>()};
  return r;
}

json to_json(const ClickEvent& ev) {
  return {{"type", "click"},
          {"timestamp", ev.timestamp},
          {"session_id", ev.session_id},
          {"query_id", ev.query_id},
          {"target", ev.target},
          {"target_kind", target_kind_name(ev.target_kind)},
          {"categories", ev.categories}};
}

json to_json(const LogEntry& entry) {
  if (const auto* ev = std::get_if<ClickEvent>(&entry)) return to_json(*ev);
  const auto& imp = std::get<AdImpression>(entry);
  return {{"type", "impression"}, {"timestamp", imp.timestamp}, {"session_id", imp.session_id},
          {"day", imp.day},       {"ad_id", imp.ad_id},         {"category", imp.category}};
}

}  // namespace distort
