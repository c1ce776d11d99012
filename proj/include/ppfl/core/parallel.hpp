#pragma once
#include <cstddef>
#include <functional>

namespace ppfl {

// Runs fn(i) for i in [0, n), possibly across threads. Callers must write
// only to per-index slots; any reduction over results happens afterwards in
// ascending index order so that thread count never changes the outcome.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace ppfl
