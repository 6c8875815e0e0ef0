#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace klvq {

/// Dense row-major matrix of doubles. One row per vector.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const noexcept { return data_; }

  void append_row(std::span<const double> values);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Class-label index in [0, C).
using ClassIndex = std::size_t;

/// Probability vector over C classes.
struct LabelDistribution {
  std::vector<double> probs;

  std::size_t size() const noexcept { return probs.size(); }
  double operator[](std::size_t c) const { return probs[c]; }

  /// Entries nonnegative and summing to one within `tol`.
  bool is_valid(double tol = 1e-9) const;

  bool operator==(const LabelDistribution&) const = default;
};

/// N labeled feature vectors.
struct LabeledDataset {
  Matrix features;
  std::vector<ClassIndex> labels;
  std::vector<std::string> class_names;

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t dim() const noexcept { return features.cols(); }
  std::size_t num_classes() const noexcept { return class_names.size(); }

  /// Throws ParameterError when an invariant is violated (empty, label out of
  /// range, non-finite entry, duplicate class name).
  void validate() const;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Throws ParameterError if any entry is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

}  // namespace klvq
