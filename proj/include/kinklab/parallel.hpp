#pragma once

#include <cstddef>
#include <functional>

namespace kinklab {

// Runs body(i) for i in [0, n) on up to `threads` workers with a fixed static
// partition. Bodies must write disjoint outputs; results do not depend on the
// thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

int default_threads();
void set_default_threads(int threads);

}  // namespace kinklab
