#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace sca {

/// Runs fn(i) for i in [0, n). With workers > 1 the index range is split into
/// contiguous chunks, one thread each; callers guarantee fn writes disjoint
/// state per index and reads only frozen inputs.
inline void parallel_for(Eigen::Index n, int workers,
                         const std::function<void(Eigen::Index)>& fn) {
  if (workers <= 1 || n < 2) {
    for (Eigen::Index i = 0; i < n; ++i) fn(i);
    return;
  }
  const int count = std::min<int>(workers, static_cast<int>(n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(count));
  const Eigen::Index chunk = (n + count - 1) / count;
  for (int w = 0; w < count; ++w) {
    const Eigen::Index begin = w * chunk;
    const Eigen::Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (Eigen::Index i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sca
