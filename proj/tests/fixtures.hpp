#pragma once

#include <random>
#include <cstdint>
#include <vector>

#include "klvq/dataset.hpp"

namespace testing {

/// Label compositions of a 6-point cluster over 3 classes. Every class is
/// present in every composition, so no distribution has a zero entry.
inline const std::vector<std::vector<std::size_t>>& cluster_compositions() {
  static const std::vector<std::vector<std::size_t>> comps{
      {4, 1, 1}, {1, 4, 1}, {1, 1, 4}, {2, 2, 2}};
  return comps;
}

struct GroupedData {
  klvq::LabeledDataset dataset;
  /// Index of the composition each row belongs to.
  std::vector<std::size_t> group;
  std::size_t cluster_size = 6;
};

/// Tight 6-point clusters placed far apart, `copies` clusters for each of the
/// first `groups` compositions. With k = 6 and self included, every point's
/// neighborhood is exactly its own cluster, so its kNN label distribution is
/// its cluster's composition: exactly `groups` distinct values.
inline GroupedData grouped_dataset(std::size_t groups, std::size_t copies, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  GroupedData out;
  out.dataset.class_names = {"a", "b", "c"};
  std::size_t cluster = 0;
  for (std::size_t copy = 0; copy < copies; ++copy) {
    for (std::size_t g = 0; g < groups; ++g, ++cluster) {
      const auto& comp = cluster_compositions()[g];
      const double cx = 100.0 * static_cast<double>(cluster % 5);
      const double cy = 100.0 * static_cast<double>(cluster / 5);
      for (std::size_t c = 0; c < comp.size(); ++c) {
        for (std::size_t r = 0; r < comp[c]; ++r) {
          out.dataset.features.append_row(std::vector<double>{cx + jitter(rng), cy + jitter(rng)});
          out.dataset.labels.push_back(c);
          out.group.push_back(g);
        }
      }
    }
  }
  return out;
}

/// True if `assignment` and `group` induce the same partition of the points.
inline bool same_grouping(const std::vector<std::size_t>& assignment,
                          const std::vector<std::size_t>& group) {
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      if ((assignment[i] == assignment[j]) != (group[i] == group[j])) return false;
    }
  }
  return true;
}

}  // namespace testing
