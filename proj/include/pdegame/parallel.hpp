#pragma once

#include <cstddef>
#include <functional>

namespace pdegame {

/// Splits [0, n) into contiguous blocks and runs fn(begin, end) on up to
/// `threads` std::threads. The first exception thrown by a block is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace pdegame
