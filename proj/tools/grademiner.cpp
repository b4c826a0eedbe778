// grademiner: band, cluster and advise students from an assessment CSV.
//
// Exit codes: 0 success, 2 input/validation error, 3 configuration error,
// 4 internal invariant violation.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "grademiner/error.hpp"
#include "grademiner/report.hpp"
#include "grademiner/version.hpp"

namespace {

using namespace grademiner;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidSpec:
      return kExitConfig;
    case ErrorCode::InvariantViolation:
    case ErrorCode::MalformedTree:
    case ErrorCode::MissingAttribute:
    case ErrorCode::UnknownAttribute:
    case ErrorCode::InvalidAssignmentIndex:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::UnknownLetter:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

// Flags shared by every subcommand. Unset flags leave the config file (or
// built-in default) in place.
struct Options {
  std::string input;
  std::string config;
  std::string out;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<std::size_t> max_iters;
  std::optional<double> epsilon;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> threads;
  std::optional<std::string> features;
  bool band_on_new_grade = false;

  void attach(CLI::App& cmd, const char* out_help) {
    cmd.add_option("--input,-i", input, "Student CSV (roll,gpa,ct,attendance,assignment,lab_per,quiz)");
    cmd.add_option("--config,-c", config, "Pipeline config JSON")->check(CLI::ExistingFile);
    cmd.add_option("--out,-o", out, out_help);
    cmd.add_option("--k", k, "Number of clusters");
    cmd.add_option("--seed", seed, "Seed for centroid initialization");
    cmd.add_option("--alpha", alpha, "Weight of GPA in the new-grade blend, in [0, 1]");
    cmd.add_option("--max-iters", max_iters, "Lloyd iteration cap");
    cmd.add_option("--epsilon", epsilon, "Centroid movement tolerance");
    cmd.add_option("--restarts", restarts, "Seeds tried; the lowest-sse fit is kept");
    cmd.add_option("--threads", threads, "Worker threads for point assignment");
    cmd.add_option("--features", features, "Cluster features: gpa | gpa_ct_attendance");
    cmd.add_flag("--band-on-new-grade", band_on_new_grade,
                 "Band, grade and label students on the blended new grade");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg = config.empty() ? PipelineConfig{} : load_config(config);
    if (!input.empty()) cfg.input_path = input;
    if (!out.empty()) cfg.output_dir = out;
    if (k) cfg.kmeans.k = *k;
    if (seed) cfg.kmeans.seed = *seed;
    if (alpha) cfg.alpha = *alpha;
    if (max_iters) cfg.kmeans.max_iters = *max_iters;
    if (epsilon) cfg.kmeans.epsilon = *epsilon;
    if (restarts) cfg.restarts = *restarts;
    if (threads) cfg.kmeans.threads = *threads;
    if (features) cfg.features = feature_space_from_string(*features);
    if (band_on_new_grade) cfg.band_on_new_grade = true;
    if (cfg.input_path.empty()) throw Error(ErrorCode::InvalidConfig, "no input given (--input)");
    cfg.validate();
    return cfg;
  }
};

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content)) throw Error(ErrorCode::Io, "cannot write " + path);
}

int cmd_run(const Options& opt) {
  const auto cfg = opt.resolve();
  if (cfg.output_dir.empty()) throw Error(ErrorCode::InvalidConfig, "no output directory (--out)");
  const auto report = run_pipeline(cfg);
  write_outputs(report, cfg.output_dir);
  std::cout << render_text(report);
  return kExitOk;
}

int cmd_cluster(const Options& opt) {
  const auto cfg = opt.resolve();
  const auto dataset = load_csv(cfg.input_path);
  ClusterSummary summary;
  summary.features = cfg.features;
  summary.seed = cfg.kmeans.seed;
  summary.model = fit_best_of(cluster_points(dataset, cfg.features), cfg.kmeans, cfg.restarts);
  write_or_print(opt.out, render_cluster_json(summary));
  return kExitOk;
}

int cmd_tree(const Options& opt) {
  const auto report = run_pipeline(opt.resolve());
  write_or_print(opt.out, export_tree(report.tree) + "\n");
  return kExitOk;
}

int cmd_advise(const Options& opt) {
  const auto report = run_pipeline(opt.resolve());
  std::string out = "roll,gpa,internal_score,new_grade,band,letter,step,recommendation\n";
  char num[64];
  for (const auto& s : report.per_student) {
    std::snprintf(num, sizeof num, "%.2f,%.4f,%.4f", s.gpa, s.internal, s.new_grade);
    out += std::to_string(s.roll) + "," + num + "," + std::string(to_string(s.band)) + "," +
           s.letter + "," + std::string(step_id(s.step)) + ",\"" +
           std::string(effort_text(s.step)) + "\"\n";
  }
  write_or_print(opt.out, out);
  return kExitOk;
}

int cmd_report(const Options& opt) {
  const auto cfg = opt.resolve();
  if (cfg.output_dir.empty()) throw Error(ErrorCode::InvalidConfig, "no output directory (--out)");
  const auto report = run_pipeline(cfg);
  const auto dir = std::filesystem::path(cfg.output_dir);
  const auto histogram = render_histogram_csv(report);
  const auto bands = render_bands_csv(report);
  const auto scatter = render_scatter_csv(report);
  std::filesystem::create_directories(dir);
  write_or_print((dir / "histogram.csv").string(), histogram);
  write_or_print((dir / "bands.csv").string(), bands);
  write_or_print((dir / "scatter.csv").string(), scatter);
  std::cout << histogram << "\n" << bands;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Band, cluster and advise students from assessment records", "grademiner"};
  app.set_version_flag("--version", std::string("grademiner ") + std::string(grademiner::kVersion));
  app.require_subcommand(1);

  Options opt;
  int (*action)(const Options&) = nullptr;

  auto* run = app.add_subcommand("run", "Full pipeline; writes every report file to --out");
  opt.attach(*run, "Output directory");
  run->callback([&] { action = cmd_run; });

  auto* cluster = app.add_subcommand("cluster", "K-means on GPA; prints the cluster summary JSON");
  opt.attach(*cluster, "Write the summary here instead of stdout");
  cluster->callback([&] { action = cmd_cluster; });

  auto* tree = app.add_subcommand("tree", "Grow the decision tree; prints its JSON");
  opt.attach(*tree, "Write the tree here instead of stdout");
  tree->callback([&] { action = cmd_tree; });

  auto* advise = app.add_subcommand("advise", "Per-student grade and effort recommendation CSV");
  opt.attach(*advise, "Write the CSV here instead of stdout");
  advise->callback([&] { action = cmd_advise; });

  auto* report = app.add_subcommand("report", "Distribution tables and plot series");
  opt.attach(*report, "Output directory");
  report->callback([&] { action = cmd_report; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    return action(opt);
  } catch (const grademiner::Error& e) {
    std::cerr << "grademiner: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "grademiner: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "grademiner: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
