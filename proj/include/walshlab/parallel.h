#ifndef WALSHLAB_PARALLEL_H_
#define WALSHLAB_PARALLEL_H_

#include <cstddef>
#include <functional>
#include <span>

namespace walshlab {

// Process-wide cap on worker threads used by grid-sized operations.
// Zero means "hardware concurrency".
void set_max_threads(unsigned count);
unsigned max_threads();

// Runs body(i) for i in [begin, end). Work is split into contiguous chunks;
// callers write to disjoint slots so results do not depend on the split.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

// Fixed-shape pairwise reduction. The tree depends only on the length of the
// input, never on the thread count.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kLeaf = 64;
  if (values.size() <= kLeaf) {
    T s = T(0);
    for (const T& v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace walshlab

#endif  // WALSHLAB_PARALLEL_H_
