#include "klvq/cli.hpp"

#include <filesystem>
#include <ostream>
#include <variant>

#include "CLI11.hpp"
#include "klvq/bof.hpp"
#include "klvq/error.hpp"
#include "klvq/io.hpp"
#include "klvq/kmeans.hpp"
#include "klvq/quantizer.hpp"

namespace klvq {
namespace fs = std::filesystem;
using io::format_real;

namespace {

struct FitArgs {
  std::string input;
  std::string output;
  std::size_t subsets = 0;
  std::size_t knn = 10;
  bool exclude_self = false;
  double epsilon = 1e-6;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  std::string init = "random";
  std::string mode = "paper";
};

struct KmeansArgs {
  std::string input;
  std::string output;
  std::size_t clusters = 0;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
};

struct QuantizeArgs {
  std::string model;
  std::string input;
};

struct SynthArgs {
  SyntheticConfig config;
  std::string out_dir;
};

struct EvalArgs {
  std::string train_dir;
  std::string test_dir;
  std::string model;
  std::string distance = "l1";
};

int cmd_fit(const FitArgs& a, bool knn_given, std::ostream& out) {
  const auto dataset = io::load_dataset(a.input);
  QuantizerConfig config;
  config.subsets = a.subsets;
  config.knn.k = a.knn;
  config.knn.include_self = !a.exclude_self;
  if (!knn_given) config.knn = config.knn.clipped(dataset.size());
  config.smoothing.epsilon = a.epsilon;
  config.seed = a.seed;
  config.max_iters = a.max_iters;
  config.init = parse_init_mode(a.init);
  config.update = parse_update_mode(a.mode);

  const auto result = fit(dataset, config);
  io::save_model(result.model, a.output);

  out << "iterations_run," << result.model.iterations_run << '\n';
  out << "converged," << (result.model.converged ? "true" : "false") << '\n';
  out << "final_objective," << format_real(result.model.final_objective) << '\n';
  out << "iteration,objective\n";
  for (std::size_t t = 0; t < result.objective_trace.size(); ++t) {
    out << t + 1 << ',' << format_real(result.objective_trace[t]) << '\n';
  }
  return 0;
}

int cmd_kmeans_fit(const KmeansArgs& a, std::ostream& out) {
  io::KmeansModelFile file;
  Matrix features;
  if (io::read_header(a.input).back() == "label") {
    auto dataset = io::load_dataset(a.input);
    features = std::move(dataset.features);
    file.class_names = std::move(dataset.class_names);
  } else {
    features = io::load_features(a.input);
  }
  const auto result = kmeans_fit(features, {a.clusters, a.seed, a.max_iters});
  file.model = result.model;
  io::save_model(file, a.output);

  out << "iterations_run," << result.model.iterations_run << '\n';
  out << "converged," << (result.model.converged ? "true" : "false") << '\n';
  out << "inertia," << format_real(result.model.inertia) << '\n';
  out << "iteration,inertia\n";
  for (std::size_t t = 0; t < result.inertia_trace.size(); ++t) {
    out << t + 1 << ',' << format_real(result.inertia_trace[t]) << '\n';
  }
  return 0;
}

struct LoadedQuantizer {
  io::ModelFile model;
  std::string tag;
  std::size_t num_subsets = 0;
  std::size_t dim = 0;
  std::vector<std::string> class_names;
  QuantizeFn fn;
};

LoadedQuantizer load_quantizer(const std::string& path) {
  LoadedQuantizer q{io::load_model(path), "", 0, 0, {}, {}};
  if (auto* m = std::get_if<QuantizerModel>(&q.model)) {
    q.tag = "klvq";
    q.num_subsets = m->num_subsets();
    q.dim = m->dim();
    q.class_names = m->training.class_names;
    q.fn = [m](std::span<const double> x) { return quantize(*m, x); };
  } else {
    const auto& k = std::get<io::KmeansModelFile>(q.model);
    q.tag = "kmeans";
    q.num_subsets = k.model.num_clusters();
    q.dim = k.model.dim();
    q.class_names = k.class_names;
    const KmeansModel* km = &k.model;
    q.fn = [km](std::span<const double> x) { return kmeans_assign(*km, x); };
  }
  return q;
}

int cmd_quantize(const QuantizeArgs& a, std::ostream& out) {
  // The QuantizeFn closures point into `q.model`; keep q alive and unmoved.
  const auto q = load_quantizer(a.model);
  const auto features = io::load_features(a.input);
  if (features.cols() != q.dim) {
    throw ParameterError("dimension mismatch: input has " + std::to_string(features.cols()) +
                         " features, model expects " + std::to_string(q.dim));
  }
  for (std::size_t i = 0; i < features.rows(); ++i) out << q.fn(features.row(i)) << '\n';
  return 0;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const auto bench = generate_synthetic(a.config);
  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  io::write_bags(dir / "train", bench.train, bench.class_names);
  io::write_bags(dir / "test", bench.test, bench.class_names);
  io::save_dataset(bench.descriptors, dir / "descriptors.csv");
  out << "train_items," << bench.train.size() << '\n';
  out << "test_items," << bench.test.size() << '\n';
  out << "train_descriptors," << bench.descriptors.size() << '\n';
  out << "train_dir," << (dir / "train").string() << '\n';
  out << "test_dir," << (dir / "test").string() << '\n';
  out << "descriptors," << (dir / "descriptors.csv").string() << '\n';
  return 0;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto q = load_quantizer(a.model);
  auto class_names = q.class_names;
  const auto train = io::read_bags(a.train_dir, class_names);
  const auto test = io::read_bags(a.test_dir, class_names);
  for (const auto* bags : {&train, &test}) {
    for (const auto& bag : *bags) {
      if (bag.descriptors.cols() != q.dim) {
        throw ParameterError("dimension mismatch: bag '" + bag.item_id + "' has " +
                             std::to_string(bag.descriptors.cols()) +
                             " features, model expects " + std::to_string(q.dim));
      }
    }
  }
  const auto report = evaluate(train, test, q.tag, q.fn, q.num_subsets,
                               parse_distance(a.distance), class_names);
  io::print_report_table(report, out);
  out << '\n';
  io::print_confusion_csv(report, out);
  return 0;
}

int cmd_info(const std::string& path, std::ostream& out) {
  const auto model = io::load_model(path);
  out << "format_version," << io::kModelFormatVersion << '\n';
  auto print_names = [&](const std::vector<std::string>& names) {
    out << "class_names,";
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? ";" : "") << names[c];
    out << '\n';
  };
  if (const auto* m = std::get_if<QuantizerModel>(&model)) {
    out << "kind,klvq\n";
    out << "subsets," << m->num_subsets() << '\n';
    out << "dim," << m->dim() << '\n';
    out << "classes," << m->training.num_classes() << '\n';
    print_names(m->training.class_names);
    out << "training_vectors," << m->training.size() << '\n';
    out << "knn," << m->config.knn.k << '\n';
    out << "include_self," << (m->config.knn.include_self ? "true" : "false") << '\n';
    out << "epsilon," << format_real(m->config.smoothing.epsilon) << '\n';
    out << "seed," << m->config.seed << '\n';
    out << "max_iters," << m->config.max_iters << '\n';
    out << "init," << to_string(m->config.init) << '\n';
    out << "mode," << to_string(m->config.update) << '\n';
    out << "iterations_run," << m->iterations_run << '\n';
    out << "converged," << (m->converged ? "true" : "false") << '\n';
    out << "final_objective," << format_real(m->final_objective) << '\n';
  } else {
    const auto& k = std::get<io::KmeansModelFile>(model);
    out << "kind,kmeans\n";
    out << "clusters," << k.model.num_clusters() << '\n';
    out << "dim," << k.model.dim() << '\n';
    print_names(k.class_names);
    out << "seed," << k.model.config.seed << '\n';
    out << "max_iters," << k.model.config.max_iters << '\n';
    out << "iterations_run," << k.model.iterations_run << '\n';
    out << "converged," << (k.model.converged ? "true" : "false") << '\n';
    out << "inertia," << format_real(k.model.inertia) << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Supervised vector quantization by KL-divergence minimization", "klvq"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Train a KL quantizer on a labeled CSV");
  fit_cmd->add_option("--input", fit_args.input, "Labeled CSV (f1,...,fd,label)")->required();
  fit_cmd->add_option("--subsets", fit_args.subsets, "Number of subsets M")->required();
  auto* knn_opt = fit_cmd->add_option("--knn", fit_args.knn, "Neighbors k (default 10, clipped)");
  fit_cmd->add_flag("--exclude-self", fit_args.exclude_self,
                    "Leave each training vector out of its own neighborhood");
  fit_cmd->add_option("--epsilon", fit_args.epsilon, "Smoothing pseudo-count");
  fit_cmd->add_option("--seed", fit_args.seed, "Initialization seed");
  fit_cmd->add_option("--max-iters", fit_args.max_iters, "Iteration cap");
  fit_cmd->add_option("--init", fit_args.init, "random|kmeans")
      ->check(CLI::IsMember({"random", "kmeans"}));
  fit_cmd->add_option("--mode", fit_args.mode, "paper|centroid")
      ->check(CLI::IsMember({"paper", "centroid"}));
  fit_cmd->add_option("--output", fit_args.output, "Model file to write")->required();

  KmeansArgs km_args;
  auto* km_cmd = app.add_subcommand("kmeans-fit", "Train the k-means baseline");
  km_cmd->add_option("--input", km_args.input, "CSV of vectors (label column optional)")
      ->required();
  km_cmd->add_option("--clusters", km_args.clusters, "Number of clusters K")->required();
  km_cmd->add_option("--seed", km_args.seed, "Initialization seed");
  km_cmd->add_option("--max-iters", km_args.max_iters, "Iteration cap");
  km_cmd->add_option("--output", km_args.output, "Model file to write")->required();

  QuantizeArgs q_args;
  auto* q_cmd = app.add_subcommand("quantize", "Print the subset index of every input row");
  q_cmd->add_option("--model", q_args.model, "Model file")->required();
  q_cmd->add_option("--input", q_args.input, "CSV of vectors (label column optional)")
      ->required();

  SynthArgs s_args;
  auto* s_cmd = app.add_subcommand("synth", "Write a synthetic bag-of-features benchmark");
  s_cmd->add_option("--seed", s_args.config.seed, "Generator seed");
  s_cmd->add_option("--classes", s_args.config.classes, "Number of classes");
  s_cmd->add_option("--items-per-class", s_args.config.items_per_class,
                    "Items per class in each split");
  s_cmd->add_option("--descriptors", s_args.config.descriptors_per_item,
                    "Descriptors per item");
  s_cmd->add_option("--dim", s_args.config.dim, "Descriptor dimension");
  s_cmd->add_option("--noise", s_args.config.noise, "Class-mode standard deviation");
  s_cmd->add_option("--separation", s_args.config.mode_separation,
                    "Distance between neighboring class modes");
  s_cmd->add_option("--modes-per-class", s_args.config.modes_per_class, "Modes per class");
  s_cmd->add_option("--background-weight", s_args.config.background_weight,
                    "Probability a descriptor comes from the shared background");
  s_cmd->add_option("--background-spread", s_args.config.background_spread,
                    "Background standard deviation as a multiple of --noise");
  s_cmd->add_option("--out-dir", s_args.out_dir, "Output directory")->required();

  EvalArgs e_args;
  auto* e_cmd = app.add_subcommand("eval-bof", "Classify bags by 1-NN on quantization histograms");
  e_cmd->add_option("--train-dir", e_args.train_dir, "Directory with manifest.csv")->required();
  e_cmd->add_option("--test-dir", e_args.test_dir, "Directory with manifest.csv")->required();
  e_cmd->add_option("--model", e_args.model, "klvq or kmeans model file")->required();
  e_cmd->add_option("--distance", e_args.distance, "l1|l2")
      ->check(CLI::IsMember({"l1", "l2"}));

  std::string info_model;
  auto* i_cmd = app.add_subcommand("info", "Print model metadata");
  i_cmd->add_option("--model", info_model, "Model file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    err << "error: " << e.what() << "\n\n" << target->help();
    return 2;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit_args, knn_opt->count() > 0, out);
    if (*km_cmd) return cmd_kmeans_fit(km_args, out);
    if (*q_cmd) return cmd_quantize(q_args, out);
    if (*s_cmd) return cmd_synth(s_args, out);
    if (*e_cmd) return cmd_eval(e_args, out);
    if (*i_cmd) return cmd_info(info_model, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace klvq
