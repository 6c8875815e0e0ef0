#include "klvq/partition.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "klvq/error.hpp"

namespace klvq {

std::vector<std::size_t> Partition::subset_sizes() const {
  std::vector<std::size_t> sizes(num_subsets, 0);
  for (std::size_t m : assignment) {
    if (m < num_subsets) ++sizes[m];
  }
  return sizes;
}

bool Partition::covers_all_subsets() const {
  for (std::size_t m : assignment) {
    if (m >= num_subsets) return false;
  }
  for (std::size_t s : subset_sizes()) {
    if (s == 0) return false;
  }
  return true;
}

std::size_t repair_empty_subsets(Partition& partition, std::span<const double> cost) {
  if (cost.size() != partition.size()) {
    throw ParameterError("repair: cost vector has " + std::to_string(cost.size()) +
                         " entries for " + std::to_string(partition.size()) + " points");
  }
  if (partition.num_subsets > partition.size()) {
    throw ParameterError("repair: " + std::to_string(partition.num_subsets) +
                         " subsets cannot all be filled from " +
                         std::to_string(partition.size()) + " points");
  }
  auto sizes = partition.subset_sizes();
  std::vector<std::size_t> empty;
  for (std::size_t m = 0; m < sizes.size(); ++m) {
    if (sizes[m] == 0) empty.push_back(m);
  }
  if (empty.empty()) return 0;

  std::vector<std::size_t> order(partition.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cost[a] > cost[b]; });

  std::size_t moved = 0;
  auto next = order.begin();
  for (std::size_t target : empty) {
    while (next != order.end() && sizes[partition.assignment[*next]] <= 1) ++next;
    // M <= N guarantees a donor exists while any subset is empty.
    const std::size_t i = *next++;
    --sizes[partition.assignment[i]];
    partition.assignment[i] = target;
    sizes[target] = 1;
    ++moved;
  }
  return moved;
}

}  // namespace klvq
