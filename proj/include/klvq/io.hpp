#pragma once

// File formats: CSV datasets and bag manifests, JSON model files.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "klvq/bof.hpp"
#include "klvq/dataset.hpp"
#include "klvq/kmeans.hpp"
#include "klvq/quantizer.hpp"

namespace klvq::io {

inline constexpr int kModelFormatVersion = 1;

/// Reals in 17 significant digits ("%.17g").
std::string format_real(double value);

/// Column names from the first nonblank line of a CSV file.
std::vector<std::string> read_header(const std::filesystem::path& path);

/// CSV with header "f1,...,fd,label", label given as a class-name string.
/// Class names are indexed in order of first appearance.
LabeledDataset load_dataset(const std::filesystem::path& path);

/// Feature-only CSV. A trailing column whose header is "label" is dropped.
Matrix load_features(const std::filesystem::path& path);

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path);
void save_features(const Matrix& features, const std::filesystem::path& path);

/// A trained KMeans model plus the class names of its training file, if any.
struct KmeansModelFile {
  KmeansModel model;
  std::vector<std::string> class_names;
};

using ModelFile = std::variant<QuantizerModel, KmeansModelFile>;

nlohmann::json to_json(const QuantizerModel& model);
nlohmann::json to_json(const KmeansModelFile& model);
/// Throws SchemaError or VersionError.
ModelFile model_from_json(const nlohmann::json& doc);

void save_model(const QuantizerModel& model, const std::filesystem::path& path);
void save_model(const KmeansModelFile& model, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

/// Writes `dir/manifest.csv` (item_id,path,label) and one descriptor CSV per
/// bag, named after its item id.
void write_bags(const std::filesystem::path& dir, const std::vector<FeatureBag>& bags,
                const std::vector<std::string>& class_names);

/// Reads a manifest written by write_bags. Labels not yet in `class_names`
/// are appended to it.
std::vector<FeatureBag> read_bags(const std::filesystem::path& dir,
                                  std::vector<std::string>& class_names);

void print_report_table(const EvalReport& report, std::ostream& out);
void print_confusion_csv(const EvalReport& report, std::ostream& out);

}  // namespace klvq::io
