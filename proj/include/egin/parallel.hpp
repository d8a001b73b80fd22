#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace egin::parallel {

/// Runs fn(i) for i in [0, n_tasks) on up to `threads` workers. Tasks are
/// independent; results must be stored by index so that the outcome does not
/// depend on scheduling. The first exception thrown by any task is rethrown.
void run_tasks(std::size_t n_tasks, int threads, const std::function<void(std::size_t)>& fn);

/// Worker count from an explicit request, else OVERLAPS_THREADS, else the
/// hardware concurrency.
int resolve_threads(int requested);

/// Deterministic pairwise (tree) reduction in index order: ((0,1),(2,3)),...
template <class T, class Merge>
T pairwise_reduce(std::vector<T> items, Merge merge) {
  if (items.empty()) return T{};
  while (items.size() > 1) {
    std::vector<T> next;
    next.reserve((items.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) next.push_back(merge(items[i], items[i + 1]));
    if (items.size() % 2 == 1) next.push_back(std::move(items.back()));
    items = std::move(next);
  }
  return std::move(items.front());
}

}  // namespace egin::parallel
