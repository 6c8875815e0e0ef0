#include "klvq/kmeans.hpp"

#include <numeric>
#include <random>
#include <string>

#include "klvq/error.hpp"

namespace klvq {
namespace {

std::size_t nearest_centroid(const Matrix& centroids, std::span<const double> x,
                             double* best_dist = nullptr) {
  std::size_t best = 0;
  double best_d = squared_distance(x, centroids.row(0));
  for (std::size_t c = 1; c < centroids.rows(); ++c) {
    const double d = squared_distance(x, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_dist) *best_dist = best_d;
  return best;
}

Matrix member_means(const Matrix& features, const Partition& partition) {
  Matrix means(partition.num_subsets, features.cols());
  std::vector<std::size_t> counts(partition.num_subsets, 0);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const std::size_t m = partition.assignment[i];
    auto dst = means.row(m);
    auto src = features.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
    ++counts[m];
  }
  for (std::size_t m = 0; m < means.rows(); ++m) {
    auto dst = means.row(m);
    for (double& v : dst) v /= static_cast<double>(counts[m]);
  }
  return means;
}

double inertia_of(const Matrix& features, const Partition& partition, const Matrix& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    total += squared_distance(features.row(i), centroids.row(partition.assignment[i]));
  }
  return total;
}

}  // namespace

KmeansResult kmeans_fit(const Matrix& features, const KmeansConfig& config) {
  const std::size_t n = features.rows();
  const std::size_t k = config.clusters;
  if (n == 0 || features.cols() == 0) throw ParameterError("k-means needs a nonempty matrix");
  if (k < 1 || k > n) {
    throw ParameterError("k-means cluster count K = " + std::to_string(k) +
                         " must lie in [1, " + std::to_string(n) + "]");
  }
  if (config.max_iters < 1) throw ParameterError("max_iters must be >= 1");
  require_finite(features.data(), "k-means features");

  // Partial Fisher-Yates over row indices.
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  for (std::size_t c = 0; c < k; ++c) {
    std::uniform_int_distribution<std::size_t> pick(c, n - 1);
    std::swap(rows[c], rows[pick(rng)]);
  }
  Matrix centroids(k, features.cols());
  for (std::size_t c = 0; c < k; ++c) {
    auto src = features.row(rows[c]);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
  }

  KmeansResult result;
  Partition current{std::vector<std::size_t>(n, 0), k};
  std::vector<double> cost(n);
  bool have_previous = false;
  bool converged = false;
  std::size_t iter = 0;
  while (iter < config.max_iters) {
    ++iter;
    Partition next{std::vector<std::size_t>(n), k};
    for (std::size_t i = 0; i < n; ++i) {
      next.assignment[i] = nearest_centroid(centroids, features.row(i), &cost[i]);
    }
    const bool unchanged = have_previous && next == current;
    repair_empty_subsets(next, cost);
    current = std::move(next);
    have_previous = true;

    centroids = member_means(features, current);
    result.inertia_trace.push_back(inertia_of(features, current, centroids));
    if (unchanged) {
      converged = true;
      break;
    }
  }

  result.model.centroids = std::move(centroids);
  result.model.inertia = result.inertia_trace.back();
  result.model.iterations_run = iter;
  result.model.converged = converged;
  result.model.config = config;
  result.partition = std::move(current);
  return result;
}

std::size_t kmeans_assign(const KmeansModel& model, std::span<const double> query) {
  if (model.num_clusters() == 0) throw ParameterError("k-means model has no centroids");
  if (query.size() != model.dim()) {
    throw ParameterError("query has dimension " + std::to_string(query.size()) +
                         ", model has dimension " + std::to_string(model.dim()));
  }
  require_finite(query, "query");
  return nearest_centroid(model.centroids, query);
}

}  // namespace klvq
