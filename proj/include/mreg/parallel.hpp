#pragma once

#include <cstddef>
#include <functional>

namespace mreg {

unsigned default_thread_count();

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items must
// write to disjoint outputs, so results do not depend on scheduling. If any
// item throws, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace mreg
