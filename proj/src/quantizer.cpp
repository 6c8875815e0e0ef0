#include "klvq/quantizer.hpp"

#include <random>
#include <string>

#include "klvq/error.hpp"
#include "klvq/kmeans.hpp"

namespace klvq {
namespace {

void validate_config(std::size_t n, const QuantizerConfig& config) {
  if (config.subsets < 1 || config.subsets > n) {
    throw ParameterError("subset count M = " + std::to_string(config.subsets) +
                         " must lie in [1, " + std::to_string(n) + "]");
  }
  if (config.max_iters < 1) throw ParameterError("max_iters must be >= 1");
  if (!(config.smoothing.epsilon >= 0.0)) {
    throw ParameterError("smoothing epsilon must be >= 0");
  }
}

std::size_t argmin_kl(const LabelDistribution& p, std::span<const LabelDistribution> subsets,
                      double* best_value = nullptr) {
  std::size_t best = 0;
  double best_kl = kl_divergence(p, subsets[0]);
  for (std::size_t m = 1; m < subsets.size(); ++m) {
    const double kl = kl_divergence(p, subsets[m]);
    if (kl < best_kl) {
      best_kl = kl;
      best = m;
    }
  }
  if (best_value) *best_value = best_kl;
  return best;
}

std::vector<double> member_costs(std::span<const LabelDistribution> point_dists,
                                 const Partition& partition,
                                 std::span<const LabelDistribution> subset_dists) {
  std::vector<double> cost(point_dists.size());
  for (std::size_t i = 0; i < point_dists.size(); ++i) {
    cost[i] = kl_divergence(point_dists[i], subset_dists[partition.assignment[i]]);
  }
  return cost;
}

}  // namespace

Partition init_partition(std::size_t n, const QuantizerConfig& config,
                         const LabeledDataset& dataset) {
  if (config.init == InitMode::kmeans) {
    return init_partition(n, config, dataset, {});
  }
  validate_config(n, config);
  const auto point_dists = estimate_all(dataset, config.knn);
  return init_partition(n, config, dataset, point_dists);
}

Partition init_partition(std::size_t n, const QuantizerConfig& config,
                         const LabeledDataset& dataset,
                         std::span<const LabelDistribution> point_dists) {
  validate_config(n, config);
  if (dataset.size() != n) {
    throw ParameterError("init_partition: n = " + std::to_string(n) +
                         " but dataset has " + std::to_string(dataset.size()) + " rows");
  }
  if (config.init == InitMode::kmeans) {
    KmeansConfig km{config.subsets, config.seed, config.max_iters};
    return kmeans_fit(dataset.features, km).partition;
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, config.subsets - 1);
  Partition partition{std::vector<std::size_t>(n), config.subsets};
  for (auto& m : partition.assignment) m = pick(rng);
  if (partition.covers_all_subsets()) return partition;

  if (point_dists.size() != n) {
    throw ParameterError("init_partition: point distributions do not match dataset size");
  }
  const auto subset_dists =
      update_subset_distributions(partition, dataset.labels, dataset.num_classes(),
                                  config.update, point_dists, config.smoothing);
  repair_empty_subsets(partition, member_costs(point_dists, partition, subset_dists));
  return partition;
}

std::vector<LabelDistribution> update_subset_distributions(
    const Partition& partition, std::span<const ClassIndex> labels, std::size_t num_classes,
    UpdateMode mode, std::span<const LabelDistribution> point_dists,
    const SmoothingConfig& smoothing) {
  if (num_classes == 0) throw ParameterError("need at least one class");
  const std::size_t n = partition.size();
  std::vector<std::vector<double>> weights(partition.num_subsets,
                                           std::vector<double>(num_classes, 0.0));
  if (mode == UpdateMode::paper) {
    if (labels.size() != n) throw ParameterError("labels do not match partition size");
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] >= num_classes) {
        throw ParameterError("label " + std::to_string(labels[i]) + " out of range");
      }
      weights.at(partition.assignment[i])[labels[i]] += 1.0;
    }
  } else {
    if (point_dists.size() != n) {
      throw ParameterError("point distributions do not match partition size");
    }
    // Summing member distributions gives soft counts whose normalization is
    // the member mean.
    for (std::size_t i = 0; i < n; ++i) {
      auto& w = weights.at(partition.assignment[i]);
      const auto& p = point_dists[i].probs;
      if (p.size() != num_classes) throw ParameterError("point distribution length mismatch");
      for (std::size_t c = 0; c < num_classes; ++c) w[c] += p[c];
    }
  }

  std::vector<LabelDistribution> out;
  out.reserve(weights.size());
  for (const auto& w : weights) out.push_back(smooth(std::span<const double>(w), smoothing));
  return out;
}

Partition assign_step(std::span<const LabelDistribution> point_dists,
                      std::span<const LabelDistribution> subset_dists) {
  if (subset_dists.empty()) throw ParameterError("assign_step needs at least one subset");
  Partition out{std::vector<std::size_t>(point_dists.size()), subset_dists.size()};
  for (std::size_t i = 0; i < point_dists.size(); ++i) {
    out.assignment[i] = argmin_kl(point_dists[i], subset_dists);
  }
  return out;
}

FitResult fit(const LabeledDataset& dataset, const QuantizerConfig& config) {
  dataset.validate();
  const std::size_t n = dataset.size();
  validate_config(n, config);
  const auto point_dists = estimate_all(dataset, config.knn);

  FitResult result;
  Partition partition = init_partition(n, config, dataset, point_dists);
  auto subset_dists = update_subset_distributions(partition, dataset.labels,
                                                  dataset.num_classes(), config.update,
                                                  point_dists, config.smoothing);
  bool converged = false;
  std::size_t iter = 0;
  while (iter < config.max_iters) {
    ++iter;
    Partition next = assign_step(point_dists, subset_dists);
    const bool unchanged = next == partition;
    if (!unchanged) {
      repair_empty_subsets(next, member_costs(point_dists, next, subset_dists));
      partition = std::move(next);
      subset_dists = update_subset_distributions(partition, dataset.labels,
                                                 dataset.num_classes(), config.update,
                                                 point_dists, config.smoothing);
    }
    result.objective_trace.push_back(objective(point_dists, partition, subset_dists));
    if (unchanged) {
      converged = true;
      break;
    }
  }

  result.model.subset_dists = std::move(subset_dists);
  result.model.config = config;
  result.model.training = dataset;
  result.model.final_objective = result.objective_trace.back();
  result.model.iterations_run = iter;
  result.model.converged = converged;
  result.partition = std::move(partition);
  return result;
}

LabelDistribution query_distribution(const QuantizerModel& model, std::span<const double> query) {
  if (query.size() != model.dim()) {
    throw ParameterError("query has dimension " + std::to_string(query.size()) +
                         ", model expects dimension " + std::to_string(model.dim()));
  }
  // The query is never a training row, so every training row is a candidate.
  KnnConfig knn = model.config.knn;
  knn.include_self = true;
  return estimate_label_distribution(model.training, query, knn);
}

std::size_t quantize(const QuantizerModel& model, std::span<const double> query) {
  if (model.subset_dists.empty()) throw ParameterError("model has no subsets");
  return argmin_kl(query_distribution(model, query), model.subset_dists);
}

const char* to_string(InitMode mode) noexcept {
  return mode == InitMode::random ? "random" : "kmeans";
}

const char* to_string(UpdateMode mode) noexcept {
  return mode == UpdateMode::paper ? "paper" : "centroid";
}

InitMode parse_init_mode(const std::string& text) {
  if (text == "random") return InitMode::random;
  if (text == "kmeans") return InitMode::kmeans;
  throw ParameterError("unknown init mode '" + text + "' (expected random|kmeans)");
}

UpdateMode parse_update_mode(const std::string& text) {
  if (text == "paper") return UpdateMode::paper;
  if (text == "centroid") return UpdateMode::centroid;
  throw ParameterError("unknown update mode '" + text + "' (expected paper|centroid)");
}

}  // namespace klvq
