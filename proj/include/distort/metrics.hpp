#pragma once

#include <cstddef>
#include <optional>

namespace distort {

// relevant_retrieved / retrieved. nullopt when nothing was retrieved (the
// ratio is undefined, which is not the same as 0). Throws kInvalidArgument
// when relevant_retrieved > retrieved.
std::optional<double> precision(std::size_t relevant_retrieved, std::size_t retrieved);

// relevant_retrieved / total_relevant; nullopt when total_relevant is 0.
std::optional<double> recall(std::size_t relevant_retrieved, std::size_t total_relevant);

}  // namespace distort
