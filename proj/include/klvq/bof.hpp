#pragma once

// Bag-of-features evaluation: quantize each item's local descriptors into a
// histogram over M subsets, classify items by 1-NN on normalized histograms,
// and tally a confusion matrix.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "klvq/dataset.hpp"

namespace klvq {

struct FeatureBag {
  std::string item_id;
  Matrix descriptors;  // P x d
  std::optional<ClassIndex> label;
};

struct BofHistogram {
  std::vector<std::uint64_t> counts;
  std::vector<double> normalized;

  std::size_t size() const noexcept { return counts.size(); }
};

struct LabeledHistogram {
  BofHistogram histogram;
  ClassIndex label = 0;
};

enum class HistogramDistance { l1, l2 };

struct EvalReport {
  std::string quantizer_tag;
  std::vector<std::string> class_names;
  /// Zero for classes without test items.
  std::vector<double> per_class_accuracy;
  double overall_accuracy = 0.0;
  /// confusion[true_class][predicted_class]
  std::vector<std::vector<std::uint64_t>> confusion;
};

using QuantizeFn = std::function<std::size_t(std::span<const double>)>;

BofHistogram build_histogram(const FeatureBag& bag, const QuantizeFn& quantize_fn,
                             std::size_t num_subsets);

/// Label of the nearest training histogram (normalized vectors), lowest
/// training index on ties.
ClassIndex classify_1nn(std::span<const LabeledHistogram> train, const BofHistogram& query,
                        HistogramDistance distance);

EvalReport evaluate(std::span<const FeatureBag> train_bags, std::span<const FeatureBag> test_bags,
                    const std::string& quantizer_tag, const QuantizeFn& quantize_fn,
                    std::size_t num_subsets, HistogramDistance distance,
                    const std::vector<std::string>& class_names);

/// Parameters of the synthetic bag-of-features benchmark. Each class owns
/// `modes_per_class` Gaussian modes; all classes share `background_modes`
/// modes. A descriptor comes from a background mode with probability
/// `background_weight`, otherwise from one of its class's modes. Class-mode
/// descriptors get isotropic Gaussian noise of standard deviation `noise`;
/// background descriptors get `noise * background_spread`.
struct SyntheticConfig {
  std::uint64_t seed = 42;
  std::size_t classes = 3;
  /// Items per class, in each of the train and test splits.
  std::size_t items_per_class = 40;
  std::size_t descriptors_per_item = 50;
  std::size_t dim = 2;
  double noise = 1.0;
  /// Distance between neighboring class modes (all pairs for C <= 3, d >= 2).
  double mode_separation = 6.0;
  std::size_t modes_per_class = 1;
  std::size_t background_modes = 1;
  double background_weight = 0.6;
  double background_spread = 1.0;
};

struct SyntheticBenchmark {
  std::vector<std::string> class_names;
  std::vector<FeatureBag> train;
  std::vector<FeatureBag> test;
  /// All training descriptors, labeled with their item's class.
  LabeledDataset descriptors;
  /// (classes * modes_per_class) x d, class-major.
  Matrix class_modes;
  Matrix background_modes;
};

SyntheticBenchmark generate_synthetic(const SyntheticConfig& config);

HistogramDistance parse_distance(const std::string& text);
const char* to_string(HistogramDistance distance) noexcept;

}  // namespace klvq
