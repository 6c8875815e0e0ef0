#include "klvq/dataset.hpp"

#include <cmath>
#include <set>

#include "klvq/error.hpp"

namespace klvq {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ParameterError("matrix data size " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows_) + "x" +
                         std::to_string(cols_));
  }
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) {
    cols_ = values.size();
  }
  if (values.size() != cols_) {
    throw ParameterError("row has " + std::to_string(values.size()) +
                         " entries, expected " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

bool LabelDistribution::is_valid(double tol) const {
  if (probs.empty()) return false;
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

void LabeledDataset::validate() const {
  if (features.rows() == 0) throw ParameterError("dataset has no rows");
  if (features.cols() == 0) throw ParameterError("dataset has zero feature dimension");
  if (class_names.empty()) throw ParameterError("dataset has no classes");
  if (labels.size() != features.rows()) {
    throw ParameterError("dataset has " + std::to_string(features.rows()) +
                         " rows but " + std::to_string(labels.size()) + " labels");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_names.size()) {
      throw ParameterError("label index " + std::to_string(labels[i]) + " at row " +
                           std::to_string(i) + " is out of range for " +
                           std::to_string(class_names.size()) + " classes");
    }
  }
  std::set<std::string> seen(class_names.begin(), class_names.end());
  if (seen.size() != class_names.size()) {
    throw ParameterError("class names are not distinct");
  }
  require_finite(features.data(), "dataset features");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    acc += diff * diff;
  }
  return acc;
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ParameterError(std::string(what) + " contain a non-finite value");
    }
  }
}

}  // namespace klvq
