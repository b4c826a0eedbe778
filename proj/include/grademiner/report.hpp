#pragma once

// End-to-end pipeline: ingest, band, cluster, discretize, grow the tree,
// advise, and render the tables and plot series.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grademiner/advisor.hpp"
#include "grademiner/dtree.hpp"
#include "grademiner/kmeans.hpp"
#include "grademiner/records.hpp"

namespace grademiner {

enum class FeatureSpace {
  Gpa,                // 1-D, raw GPA
  GpaCtAttendance,    // gpa/4, ct/20, attendance/10
};

std::string_view to_string(FeatureSpace features) noexcept;
FeatureSpace feature_space_from_string(std::string_view name);

struct PipelineConfig {
  std::filesystem::path input_path;
  std::filesystem::path output_dir;
  BandSpec band_spec;
  std::vector<double> histogram_edges{2.00, 2.20, 3.00, 3.32, 3.56, 4.00};
  KMeansConfig kmeans;
  std::size_t restarts = 10;
  FeatureSpace features = FeatureSpace::Gpa;
  DiscretizationSpec discretization;
  InternalWeights weights;
  double alpha = 0.5;
  GradeMap grade_map;
  // Band, letter and tree label on the blended new grade instead of GPA.
  bool band_on_new_grade = false;

  void validate() const;
};

/// Reads a JSON config document. Missing keys keep their defaults; unknown
/// keys are rejected. Throws InvalidConfig.
PipelineConfig parse_config(std::string_view json_text);
PipelineConfig load_config(const std::filesystem::path& path);

struct ScatterPoint {
  int roll = 0;
  int attendance = 0;
  double gpa = 0.0;
};

/// GPA against attendance, one point per record in input order.
std::vector<ScatterPoint> scatter_series(const Dataset& dataset);

/// Counts per [e_i, e_{i+1}) with the last interval closed, labelled
/// "lo-hi" with two decimals. Throws GpaOutsideEdges.
DistributionTable histogram_series(const Dataset& dataset, std::span<const double> edges);

struct ClusterSummary {
  FeatureSpace features = FeatureSpace::Gpa;
  std::uint64_t seed = 0;
  ClusterModel model;
};

struct StudentRow {
  int roll = 0;
  double gpa = 0.0;
  double internal = 0.0;
  double new_grade = 0.0;
  Band band = Band::Medium;
  Band predicted_band = Band::Medium;
  std::size_t cluster = 0;
  std::string letter;
  EffortStep step = EffortStep::S04;
};

struct Report {
  std::string source_name;
  PipelineConfig config;
  DistributionTable distribution_five_class;
  DistributionTable distribution_bands;
  ClusterSummary clusters;
  TreeNode tree = TreeNode::leaf(Band::Medium);
  std::vector<ScatterPoint> scatter;
  std::vector<StudentRow> per_student;
};

/// Cluster feature vectors for a dataset.
std::vector<Point> cluster_points(const Dataset& dataset, FeatureSpace features);

/// Runs every stage on an in-memory dataset.
Report build_report(const Dataset& dataset, const PipelineConfig& config);

/// Loads config.input_path and runs build_report. Input errors are
/// annotated with the file path and line.
Report run_pipeline(const PipelineConfig& config);

std::string render_json(const Report& report);
std::string render_text(const Report& report);
std::string render_scatter_csv(const Report& report);
std::string render_histogram_csv(const Report& report);
std::string render_bands_csv(const Report& report);
std::string render_cluster_json(const ClusterSummary& clusters);

/// Writes report.txt, report.json, tree.json, scatter.csv, histogram.csv and
/// bands.csv. All content is rendered before the first file is touched.
void write_outputs(const Report& report, const std::filesystem::path& dir);

}  // namespace grademiner
