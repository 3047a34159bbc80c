#include "distort/metrics.hpp"

#include <string>

#include "distort/error.hpp"

namespace distort {

std::optional<double> precision(std::size_t relevant_retrieved, std::size_t retrieved) {
  if (relevant_retrieved > retrieved) {
    throw invalid_argument("relevant_retrieved (" + std::to_string(relevant_retrieved) +
                           ") exceeds retrieved (" + std::to_string(retrieved) + ")");
  }
  if (retrieved == 0) return std::nullopt;
  return static_cast<double>(relevant_retrieved) / static_cast<double>(retrieved);
}

std::optional<double> recall(std::size_t relevant_retrieved, std::size_t total_relevant) {
  if (relevant_retrieved > total_relevant) {
    throw invalid_argument("relevant_retrieved (" + std::to_string(relevant_retrieved) +
                           ") exceeds total_relevant (" + std::to_string(total_relevant) + ")");
  }
  if (total_relevant == 0) return std::nullopt;
  return static_cast<double>(relevant_retrieved) / static_cast<double>(total_relevant);
}

}  // namespace distort
