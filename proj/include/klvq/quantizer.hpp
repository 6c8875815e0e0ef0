#pragma once

// Supervised vector quantization by KL-divergence minimization.
//
// Training vectors are partitioned into M subsets so that the summed
// KL(p(y|x_i) || p(y|S_m)) over members is small. Fitting alternates two
// steps: recompute each subset's label distribution from its members, then
// move every point to the subset whose distribution is KL-closest to its own.
// New vectors are quantized with the same KL rule, their p(y|x) estimated by
// kNN voting against the stored training set.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "klvq/dataset.hpp"
#include "klvq/divergence.hpp"
#include "klvq/label_model.hpp"
#include "klvq/partition.hpp"

namespace klvq {

enum class InitMode { random, kmeans };

/// How subset label distributions are recomputed from members.
enum class UpdateMode {
  /// Smoothed label frequency of the members.
  paper,
  /// Smoothed mean of the members' kNN label distributions. This is the
  /// minimizer of the summed KL over q, so the objective never increases.
  centroid,
};

struct QuantizerConfig {
  std::size_t subsets = 8;
  KnnConfig knn;
  SmoothingConfig smoothing;
  std::size_t max_iters = 100;
  std::uint64_t seed = 0;
  InitMode init = InitMode::random;
  UpdateMode update = UpdateMode::paper;
};

struct QuantizerModel {
  std::vector<LabelDistribution> subset_dists;
  QuantizerConfig config;
  /// Features, labels and class names of the training set.
  LabeledDataset training;
  double final_objective = 0.0;
  std::size_t iterations_run = 0;
  bool converged = false;

  std::size_t num_subsets() const noexcept { return subset_dists.size(); }
  std::size_t dim() const noexcept { return training.dim(); }
};

struct FitResult {
  QuantizerModel model;
  Partition partition;
  /// Objective after each iteration.
  std::vector<double> objective_trace;
};

/// Starting partition. Random mode draws every assignment uniformly from a
/// mt19937_64 seeded with config.seed and then fills empty subsets with
/// repair_empty_subsets (cost = KL to the initial subset distribution);
/// kmeans mode takes the baseline k-means partition with K = M.
Partition init_partition(std::size_t n, const QuantizerConfig& config,
                         const LabeledDataset& dataset);

/// Overload reusing already estimated point distributions.
Partition init_partition(std::size_t n, const QuantizerConfig& config,
                         const LabeledDataset& dataset,
                         std::span<const LabelDistribution> point_dists);

std::vector<LabelDistribution> update_subset_distributions(
    const Partition& partition, std::span<const ClassIndex> labels, std::size_t num_classes,
    UpdateMode mode, std::span<const LabelDistribution> point_dists,
    const SmoothingConfig& smoothing);

/// argmin_m KL(point_dists[i] || subset_dists[m]) per point, lowest m on ties.
/// Empty subsets are left empty.
Partition assign_step(std::span<const LabelDistribution> point_dists,
                      std::span<const LabelDistribution> subset_dists);

FitResult fit(const LabeledDataset& dataset, const QuantizerConfig& config);

/// kNN label distribution of `query` against the model's training set.
LabelDistribution query_distribution(const QuantizerModel& model, std::span<const double> query);

std::size_t quantize(const QuantizerModel& model, std::span<const double> query);

const char* to_string(InitMode mode) noexcept;
const char* to_string(UpdateMode mode) noexcept;
InitMode parse_init_mode(const std::string& text);
UpdateMode parse_update_mode(const std::string& text);

}  // namespace klvq
