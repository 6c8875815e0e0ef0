#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace klvq {

/// Assignment of N points to M disjoint subsets.
struct Partition {
  std::vector<std::size_t> assignment;
  std::size_t num_subsets = 0;

  std::size_t size() const noexcept { return assignment.size(); }
  std::vector<std::size_t> subset_sizes() const;
  /// Every index in range and every subset nonempty.
  bool covers_all_subsets() const;

  bool operator==(const Partition&) const = default;
};

/// Fills empty subsets with the points of largest `cost` (cost[i] is point i's
/// distance to its current subset). Empty subsets are filled in ascending
/// index order, one point each; candidates are taken by descending cost with
/// the lower point index first on ties, and a point is only taken from a
/// subset that keeps at least one other member. Costs are not recomputed
/// between moves. Returns the number of points moved.
std::size_t repair_empty_subsets(Partition& partition, std::span<const double> cost);

}  // namespace klvq
