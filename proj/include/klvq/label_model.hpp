#pragma once

// k-nearest-neighbor estimate of the class-label distribution p(y|x).
//
// Neighbor search is exact and brute force over squared Euclidean distance.
// Neighbors are ordered by (distance, row index), so equal distances resolve
// to the lower row index.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "klvq/dataset.hpp"

namespace klvq {

struct KnnConfig {
  std::size_t k = 10;
  /// Whether a training row counts among its own neighbors.
  bool include_self = true;

  /// Largest legal k for a dataset of `n` rows.
  std::size_t max_k(std::size_t n) const noexcept {
    return include_self ? n : (n == 0 ? 0 : n - 1);
  }

  /// Copy with k clipped into [1, max_k(n)].
  KnnConfig clipped(std::size_t n) const;
};

/// Indices of the k rows of `dataset` nearest to `query`, sorted by
/// (distance, index). `exclude_index` removes one row from the candidate set
/// and is only honored when `config.include_self` is false.
std::vector<std::size_t> knn_indices(const LabeledDataset& dataset,
                                     std::span<const double> query,
                                     const KnnConfig& config,
                                     std::optional<std::size_t> exclude_index = std::nullopt);

/// Fraction of the k nearest neighbors carrying each label.
LabelDistribution estimate_label_distribution(
    const LabeledDataset& dataset, std::span<const double> query, const KnnConfig& config,
    std::optional<std::size_t> exclude_index = std::nullopt);

/// p(y|x_i) for every training row i (row i excluded from its own
/// neighborhood when include_self is false).
std::vector<LabelDistribution> estimate_all(const LabeledDataset& dataset,
                                            const KnnConfig& config);

}  // namespace klvq
