#include "klvq/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "klvq/error.hpp"

namespace klvq::io {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

struct CsvTable {
  std::vector<std::string> header;
  /// (line number, cells)
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError(path.string(), line_no,
                       "row has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(table.header.size()));
    }
    table.rows.emplace_back(line_no, std::move(cells));
  }
  if (!have_header) throw ParseError(path.string(), 1, "file is empty (no header)");
  if (table.rows.empty()) throw ParseError(path.string(), line_no, "file has no data rows");
  return table;
}

double parse_real(const std::string& cell, const fs::path& path, std::size_t line_no) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw ParseError(path.string(), line_no, "cell '" + cell + "' is not a real number");
  }
  if (!std::isfinite(value)) {
    throw ParseError(path.string(), line_no, "cell '" + cell + "' is not finite");
  }
  return value;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string features_header(std::size_t dim) {
  std::string header;
  for (std::size_t j = 0; j < dim; ++j) {
    if (j) header += ',';
    header += "f" + std::to_string(j + 1);
  }
  return header;
}

void append_row(std::string& text, std::span<const double> row) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j) text += ',';
    text += format_real(row[j]);
  }
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, std::size_t cols, const char* what) {
  if (!rows.is_array()) throw SchemaError(std::string(what) + " must be an array of rows");
  Matrix m(0, 0);
  std::vector<double> data;
  for (const auto& row : rows) {
    auto values = row.get<std::vector<double>>();
    if (values.size() != cols) {
      throw SchemaError(std::string(what) + " row has " + std::to_string(values.size()) +
                        " entries, expected " + std::to_string(cols));
    }
    data.insert(data.end(), values.begin(), values.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

void check_version(const json& doc) {
  if (!doc.is_object()) throw SchemaError("model file is not a JSON object");
  if (!doc.contains("format_version")) throw SchemaError("model file lacks format_version");
  const auto& v = doc.at("format_version");
  if (!v.is_number_integer() || v.get<long long>() != kModelFormatVersion) {
    throw VersionError("unsupported model format_version " + v.dump() +
                       " (supported versions: " + std::to_string(kModelFormatVersion) + ")");
  }
}

QuantizerModel quantizer_from_json(const json& doc) {
  QuantizerModel model;
  model.training.class_names = doc.at("class_names").get<std::vector<std::string>>();
  const auto& cfg = doc.at("config");
  model.config.subsets = cfg.at("subsets").get<std::size_t>();
  model.config.knn.k = cfg.at("knn").get<std::size_t>();
  model.config.knn.include_self = cfg.at("include_self").get<bool>();
  model.config.smoothing.epsilon = cfg.at("epsilon").get<double>();
  model.config.max_iters = cfg.at("max_iters").get<std::size_t>();
  model.config.seed = cfg.at("seed").get<std::uint64_t>();
  model.config.init = parse_init_mode(cfg.at("init").get<std::string>());
  model.config.update = parse_update_mode(cfg.at("update").get<std::string>());

  const std::size_t num_classes = model.training.class_names.size();
  for (const auto& d : doc.at("subset_dists")) {
    LabelDistribution dist{d.get<std::vector<double>>()};
    if (dist.size() != num_classes) {
      throw SchemaError("subset distribution length does not match class count");
    }
    if (!dist.is_valid()) throw SchemaError("subset distribution is not a probability vector");
    model.subset_dists.push_back(std::move(dist));
  }
  if (model.subset_dists.size() != model.config.subsets) {
    throw SchemaError("model has " + std::to_string(model.subset_dists.size()) +
                      " subset distributions, config says " +
                      std::to_string(model.config.subsets));
  }

  const auto& training = doc.at("training");
  const auto dim = training.at("dim").get<std::size_t>();
  model.training.features = matrix_from_json(training.at("features"), dim, "training features");
  model.training.labels = training.at("labels").get<std::vector<ClassIndex>>();
  try {
    model.training.validate();
  } catch (const ParameterError& e) {
    throw SchemaError(std::string("invalid training set: ") + e.what());
  }

  model.final_objective = doc.at("final_objective").get<double>();
  model.iterations_run = doc.at("iterations_run").get<std::size_t>();
  model.converged = doc.at("converged").get<bool>();
  return model;
}

KmeansModelFile kmeans_from_json(const json& doc) {
  KmeansModelFile file;
  file.class_names = doc.at("class_names").get<std::vector<std::string>>();
  const auto& cfg = doc.at("config");
  file.model.config.clusters = cfg.at("clusters").get<std::size_t>();
  file.model.config.seed = cfg.at("seed").get<std::uint64_t>();
  file.model.config.max_iters = cfg.at("max_iters").get<std::size_t>();
  const auto dim = doc.at("dim").get<std::size_t>();
  file.model.centroids = matrix_from_json(doc.at("centroids"), dim, "centroids");
  if (file.model.centroids.rows() != file.model.config.clusters || dim == 0) {
    throw SchemaError("centroid matrix does not match the configured cluster count");
  }
  require_finite(file.model.centroids.data(), "centroids");
  file.model.inertia = doc.at("inertia").get<double>();
  file.model.iterations_run = doc.at("iterations_run").get<std::size_t>();
  file.model.converged = doc.at("converged").get<bool>();
  return file;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string> read_header(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) return split_csv(line);
  }
  throw ParseError(path.string(), 1, "file is empty (no header)");
}

LabeledDataset load_dataset(const fs::path& path) {
  const auto table = read_csv(path);
  if (table.header.size() < 2 || table.header.back() != "label") {
    throw ParseError(path.string(), 1,
                     "header must be f1,...,fd,label with at least one feature column");
  }
  const std::size_t dim = table.header.size() - 1;
  LabeledDataset ds;
  std::map<std::string, ClassIndex> index;
  std::vector<double> data;
  data.reserve(table.rows.size() * dim);
  for (const auto& [line_no, cells] : table.rows) {
    for (std::size_t j = 0; j < dim; ++j) data.push_back(parse_real(cells[j], path, line_no));
    const auto& name = cells.back();
    if (name.empty()) throw ParseError(path.string(), line_no, "empty label");
    auto [it, inserted] = index.emplace(name, ds.class_names.size());
    if (inserted) ds.class_names.push_back(name);
    ds.labels.push_back(it->second);
  }
  ds.features = Matrix(table.rows.size(), dim, std::move(data));
  return ds;
}

Matrix load_features(const fs::path& path) {
  const auto table = read_csv(path);
  std::size_t dim = table.header.size();
  if (table.header.back() == "label") --dim;
  if (dim == 0) throw ParseError(path.string(), 1, "no feature columns");
  std::vector<double> data;
  data.reserve(table.rows.size() * dim);
  for (const auto& [line_no, cells] : table.rows) {
    for (std::size_t j = 0; j < dim; ++j) data.push_back(parse_real(cells[j], path, line_no));
  }
  return Matrix(table.rows.size(), dim, std::move(data));
}

void save_dataset(const LabeledDataset& dataset, const fs::path& path) {
  std::string text = features_header(dataset.dim()) + ",label\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    append_row(text, dataset.features.row(i));
    text += ',' + dataset.class_names.at(dataset.labels[i]) + '\n';
  }
  write_text(path, text);
}

void save_features(const Matrix& features, const fs::path& path) {
  std::string text = features_header(features.cols()) + '\n';
  for (std::size_t i = 0; i < features.rows(); ++i) {
    append_row(text, features.row(i));
    text += '\n';
  }
  write_text(path, text);
}

json to_json(const QuantizerModel& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["kind"] = "klvq";
  doc["class_names"] = model.training.class_names;
  doc["config"] = {
      {"subsets", model.config.subsets},
      {"knn", model.config.knn.k},
      {"include_self", model.config.knn.include_self},
      {"epsilon", model.config.smoothing.epsilon},
      {"max_iters", model.config.max_iters},
      {"seed", model.config.seed},
      {"init", to_string(model.config.init)},
      {"update", to_string(model.config.update)},
  };
  json dists = json::array();
  for (const auto& d : model.subset_dists) dists.push_back(d.probs);
  doc["subset_dists"] = std::move(dists);
  doc["training"] = {
      {"dim", model.training.dim()},
      {"features", matrix_to_json(model.training.features)},
      {"labels", model.training.labels},
  };
  doc["final_objective"] = model.final_objective;
  doc["iterations_run"] = model.iterations_run;
  doc["converged"] = model.converged;
  return doc;
}

json to_json(const KmeansModelFile& file) {
  const auto& model = file.model;
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["kind"] = "kmeans";
  doc["class_names"] = file.class_names;
  doc["config"] = {
      {"clusters", model.config.clusters},
      {"seed", model.config.seed},
      {"max_iters", model.config.max_iters},
  };
  doc["dim"] = model.dim();
  doc["centroids"] = matrix_to_json(model.centroids);
  doc["inertia"] = model.inertia;
  doc["iterations_run"] = model.iterations_run;
  doc["converged"] = model.converged;
  return doc;
}

ModelFile model_from_json(const json& doc) {
  check_version(doc);
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "klvq") return quantizer_from_json(doc);
    if (kind == "kmeans") return kmeans_from_json(doc);
    throw SchemaError("unknown model kind '" + kind + "' (expected klvq|kmeans)");
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  } catch (const ParameterError& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const QuantizerModel& model, const fs::path& path) {
  write_text(path, to_json(model).dump(1) + '\n');
}

void save_model(const KmeansModelFile& model, const fs::path& path) {
  write_text(path, to_json(model).dump(1) + '\n');
}

ModelFile load_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw SchemaError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

void write_bags(const fs::path& dir, const std::vector<FeatureBag>& bags,
                const std::vector<std::string>& class_names) {
  fs::create_directories(dir);
  std::string manifest = "item_id,path,label\n";
  for (const auto& bag : bags) {
    const std::string file = bag.item_id + ".csv";
    save_features(bag.descriptors, dir / file);
    manifest += bag.item_id + ',' + file + ',';
    if (bag.label) manifest += class_names.at(*bag.label);
    manifest += '\n';
  }
  write_text(dir / "manifest.csv", manifest);
}

std::vector<FeatureBag> read_bags(const fs::path& dir, std::vector<std::string>& class_names) {
  const fs::path manifest = dir / "manifest.csv";
  const auto table = read_csv(manifest);
  if (table.header != std::vector<std::string>{"item_id", "path", "label"}) {
    throw ParseError(manifest.string(), 1, "manifest header must be item_id,path,label");
  }
  std::vector<FeatureBag> bags;
  for (const auto& [line_no, cells] : table.rows) {
    FeatureBag bag;
    bag.item_id = cells[0];
    fs::path file = cells[1];
    if (file.is_relative()) file = dir / file;
    bag.descriptors = load_features(file);
    if (!cells[2].empty()) {
      auto it = std::find(class_names.begin(), class_names.end(), cells[2]);
      if (it == class_names.end()) {
        class_names.push_back(cells[2]);
        it = class_names.end() - 1;
      }
      bag.label = static_cast<ClassIndex>(it - class_names.begin());
    }
    bags.push_back(std::move(bag));
  }
  return bags;
}

void print_report_table(const EvalReport& report, std::ostream& out) {
  std::size_t width = 5;
  for (const auto& name : report.class_names) width = std::max(width, name.size());
  out << "quantizer: " << report.quantizer_tag << '\n';
  out << std::left << std::setw(static_cast<int>(width)) << "class" << "  accuracy\n";
  for (std::size_t c = 0; c < report.class_names.size(); ++c) {
    out << std::left << std::setw(static_cast<int>(width)) << report.class_names[c] << "  "
        << format_real(report.per_class_accuracy[c]) << '\n';
  }
  out << std::left << std::setw(static_cast<int>(width)) << "all" << "  "
      << format_real(report.overall_accuracy) << '\n';
}

void print_confusion_csv(const EvalReport& report, std::ostream& out) {
  out << "true\\predicted";
  for (const auto& name : report.class_names) out << ',' << name;
  out << '\n';
  for (std::size_t c = 0; c < report.class_names.size(); ++c) {
    out << report.class_names[c];
    for (auto v : report.confusion[c]) out << ',' << v;
    out << '\n';
  }
}

}  // namespace klvq::io
