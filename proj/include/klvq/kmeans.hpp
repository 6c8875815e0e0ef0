#pragma once

// Lloyd's k-means: the unsupervised baseline quantizer.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "klvq/dataset.hpp"
#include "klvq/partition.hpp"

namespace klvq {

struct KmeansConfig {
  std::size_t clusters = 8;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
};

struct KmeansModel {
  Matrix centroids;  // K x d
  double inertia = 0.0;
  std::size_t iterations_run = 0;
  bool converged = false;
  KmeansConfig config;

  std::size_t num_clusters() const noexcept { return centroids.rows(); }
  std::size_t dim() const noexcept { return centroids.cols(); }
};

struct KmeansResult {
  KmeansModel model;
  Partition partition;
  /// Inertia after each iteration's centroid update.
  std::vector<double> inertia_trace;
};

/// Forgy initialization (K distinct rows drawn with a seeded mt19937_64),
/// then nearest-centroid assignment and mean update until the assignment
/// stops changing or max_iters is reached. Empty clusters take the points
/// farthest from their centroids.
KmeansResult kmeans_fit(const Matrix& features, const KmeansConfig& config);

/// Nearest centroid by squared Euclidean distance, lowest index on ties.
std::size_t kmeans_assign(const KmeansModel& model, std::span<const double> query);

}  // namespace klvq
