#pragma once

// JSON encodings of the wire and file formats.

#include "distort/attack.hpp"
#include "distort/obfuscator.hpp"
#include "distort/searchsim.hpp"
#include "distort/session.hpp"
#include "json.hpp"

namespace distort {

// {id, pattern, segments, intent_index}
nlohmann::json to_json(const ObfuscatedQuery& q);
ObfuscatedQuery obfuscated_query_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ResultPage& page);
nlohmann::json to_json(const Ad& ad);
nlohmann::json to_json(const PseudoProfile& profile);
PseudoProfile profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExposureReport& r);
ExposureReport exposure_from_json(const nlohmann::json& j);
// {classifier, folds, overall_accuracy, per_fold, confusion:{tp,tn,fp,fn}}
nlohmann::json to_json(const AccuracyReport& r);
AccuracyReport accuracy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClickEvent& ev);
nlohmann::json to_json(const LogEntry& entry);

}  // namespace distort
