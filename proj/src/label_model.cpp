#include "klvq/label_model.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "klvq/error.hpp"

namespace klvq {

KnnConfig KnnConfig::clipped(std::size_t n) const {
  KnnConfig out = *this;
  out.k = std::clamp<std::size_t>(k, 1, std::max<std::size_t>(max_k(n), 1));
  return out;
}

std::vector<std::size_t> knn_indices(const LabeledDataset& dataset,
                                     std::span<const double> query,
                                     const KnnConfig& config,
                                     std::optional<std::size_t> exclude_index) {
  const std::size_t n = dataset.size();
  if (query.size() != dataset.dim()) {
    throw ParameterError("query has dimension " + std::to_string(query.size()) +
                         ", dataset has dimension " + std::to_string(dataset.dim()));
  }
  require_finite(query, "query");
  const bool excluding = !config.include_self && exclude_index.has_value();
  if (excluding && *exclude_index >= n) {
    throw ParameterError("exclude_index " + std::to_string(*exclude_index) +
                         " is not a row of a dataset with " + std::to_string(n) + " rows");
  }
  const std::size_t candidates = excluding ? n - 1 : n;
  if (config.k < 1 || config.k > candidates) {
    throw ParameterError("k = " + std::to_string(config.k) + " must lie in [1, " +
                         std::to_string(candidates) + "] (available neighbor candidates)");
  }

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates);
  for (std::size_t j = 0; j < n; ++j) {
    if (excluding && j == *exclude_index) continue;
    scored.emplace_back(squared_distance(query, dataset.features.row(j)), j);
  }
  const auto kth = scored.begin() + static_cast<std::ptrdiff_t>(config.k);
  std::partial_sort(scored.begin(), kth, scored.end());

  std::vector<std::size_t> out;
  out.reserve(config.k);
  for (auto it = scored.begin(); it != kth; ++it) out.push_back(it->second);
  return out;
}

LabelDistribution estimate_label_distribution(const LabeledDataset& dataset,
                                              std::span<const double> query,
                                              const KnnConfig& config,
                                              std::optional<std::size_t> exclude_index) {
  const auto neighbors = knn_indices(dataset, query, config, exclude_index);
  std::vector<std::size_t> counts(dataset.num_classes(), 0);
  for (std::size_t j : neighbors) ++counts[dataset.labels[j]];

  LabelDistribution dist;
  dist.probs.resize(counts.size());
  const double k = static_cast<double>(neighbors.size());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    dist.probs[c] = static_cast<double>(counts[c]) / k;
  }
  return dist;
}

std::vector<LabelDistribution> estimate_all(const LabeledDataset& dataset,
                                            const KnnConfig& config) {
  dataset.validate();
  std::vector<LabelDistribution> out;
  out.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out.push_back(estimate_label_distribution(dataset, dataset.features.row(i), config, i));
  }
  return out;
}

}  // namespace klvq
