#include "grademiner/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "grademiner/error.hpp"

namespace grademiner {

namespace {

using Json = nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

void only_keys(const Json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) config_error(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      config_error(std::string(where) + ": unknown key '" + key + "'");
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    config_error(std::string("'") + key + "' has the wrong type");
  }
}

std::vector<Bin> read_bins(const Json& j, std::string_view where) {
  if (!j.is_array()) config_error(std::string(where) + ": expected an array");
  std::vector<Bin> bins;
  for (const auto& item : j) {
    only_keys(item, where, {"upper", "label"});
    Bin bin;
    read(item, "upper", bin.upper);
    read(item, "label", bin.label);
    bins.push_back(std::move(bin));
  }
  return bins;
}

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string fixed4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

Json table_json(const DistributionTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"label", r.label}, {"count", r.count}, {"percentage", r.percentage()}});
  return rows;
}

Json cluster_json(const ClusterSummary& clusters) {
  Json centroids = Json::array();
  for (const auto& c : clusters.model.centroids) centroids.push_back(c.coords);
  return Json{{"features", to_string(clusters.features)},
              {"seed", clusters.seed},
              {"k", clusters.model.centroids.size()},
              {"centroids", std::move(centroids)},
              {"sizes", clusters.model.cluster_sizes()},
              {"sse", clusters.model.sse},
              {"sse_trace", clusters.model.sse_trace},
              {"iterations", clusters.model.iterations},
              {"converged", clusters.model.converged}};
}

Json config_json(const PipelineConfig& c) {
  auto bins = [](const std::vector<Bin>& bins) {
    Json out = Json::array();
    for (const auto& b : bins) out.push_back({{"upper", b.upper}, {"label", b.label}});
    return out;
  };
  Json grades = Json::array();
  for (const auto& s : c.grade_map.steps) grades.push_back({{"letter", s.letter}, {"min_gpa", s.min_gpa}});
  return Json{
      {"band_spec", {{"high_min", c.band_spec.high_min}, {"low_max", c.band_spec.low_max}}},
      {"histogram_edges", c.histogram_edges},
      {"kmeans",
       {{"k", c.kmeans.k},
        {"seed", c.kmeans.seed},
        {"max_iters", c.kmeans.max_iters},
        {"epsilon", c.kmeans.epsilon},
        {"restarts", c.restarts},
        {"features", to_string(c.features)}}},
      {"discretization",
       {{"ct_bins", bins(c.discretization.ct_bins)},
        {"attendance_bins", bins(c.discretization.attendance_bins)}}},
      {"weights",
       {{"ct", c.weights.ct},
        {"attendance", c.weights.attendance},
        {"assignment", c.weights.assignment},
        {"lab", c.weights.lab},
        {"quiz", c.weights.quiz}}},
      {"alpha", c.alpha},
      {"grade_map", std::move(grades)},
      {"band_on_new_grade", c.band_on_new_grade},
  };
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvariantViolation, what);
}

}  // namespace

std::string_view to_string(FeatureSpace features) noexcept {
  switch (features) {
    case FeatureSpace::Gpa: return "gpa";
    case FeatureSpace::GpaCtAttendance: return "gpa_ct_attendance";
  }
  return "?";
}

FeatureSpace feature_space_from_string(std::string_view name) {
  for (const auto f : {FeatureSpace::Gpa, FeatureSpace::GpaCtAttendance})
    if (to_string(f) == name) return f;
  config_error("unknown feature space '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
  try {
    band_spec.validate();
    discretization.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  kmeans.validate();
  if (restarts < 1) config_error("restarts must be at least 1");
  if (histogram_edges.size() < 2) config_error("histogram needs at least two edges");
  for (std::size_t i = 1; i < histogram_edges.size(); ++i)
    if (!(histogram_edges[i] > histogram_edges[i - 1]))
      config_error("histogram edges must strictly increase");
  weights.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) config_error("alpha must lie in [0, 1]");
  grade_map.validate();
}

PipelineConfig parse_config(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    config_error(e.what());
  }
  only_keys(j, "config",
            {"input", "output_dir", "band_spec", "histogram_edges", "kmeans", "discretization",
             "weights", "alpha", "grade_map", "band_on_new_grade"});

  PipelineConfig c;
  std::string path;
  if (j.contains("input")) {
    read(j, "input", path);
    c.input_path = path;
  }
  if (j.contains("output_dir")) {
    read(j, "output_dir", path);
    c.output_dir = path;
  }
  if (j.contains("band_spec")) {
    const auto& b = j["band_spec"];
    only_keys(b, "band_spec", {"high_min", "low_max"});
    read(b, "high_min", c.band_spec.high_min);
    read(b, "low_max", c.band_spec.low_max);
  }
  read(j, "histogram_edges", c.histogram_edges);
  if (j.contains("kmeans")) {
    const auto& k = j["kmeans"];
    only_keys(k, "kmeans", {"k", "seed", "max_iters", "epsilon", "restarts", "features", "threads"});
    read(k, "k", c.kmeans.k);
    read(k, "seed", c.kmeans.seed);
    read(k, "max_iters", c.kmeans.max_iters);
    read(k, "epsilon", c.kmeans.epsilon);
    read(k, "restarts", c.restarts);
    read(k, "threads", c.kmeans.threads);
    std::string features;
    read(k, "features", features);
    if (!features.empty()) c.features = feature_space_from_string(features);
  }
  if (j.contains("discretization")) {
    const auto& d = j["discretization"];
    only_keys(d, "discretization", {"ct_bins", "attendance_bins"});
    if (d.contains("ct_bins")) c.discretization.ct_bins = read_bins(d["ct_bins"], "ct_bins");
    if (d.contains("attendance_bins"))
      c.discretization.attendance_bins = read_bins(d["attendance_bins"], "attendance_bins");
  }
  if (j.contains("weights")) {
    const auto& w = j["weights"];
    only_keys(w, "weights", {"ct", "attendance", "assignment", "lab", "quiz"});
    read(w, "ct", c.weights.ct);
    read(w, "attendance", c.weights.attendance);
    read(w, "assignment", c.weights.assignment);
    read(w, "lab", c.weights.lab);
    read(w, "quiz", c.weights.quiz);
  }
  read(j, "alpha", c.alpha);
  if (j.contains("grade_map")) {
    const auto& g = j["grade_map"];
    if (!g.is_array()) config_error("grade_map: expected an array");
    c.grade_map.steps.clear();
    for (const auto& item : g) {
      only_keys(item, "grade_map", {"letter", "min_gpa"});
      GradeStep step;
      read(item, "letter", step.letter);
      read(item, "min_gpa", step.min_gpa);
      c.grade_map.steps.push_back(std::move(step));
    }
  }
  read(j, "band_on_new_grade", c.band_on_new_grade);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<ScatterPoint> scatter_series(const Dataset& dataset) {
  if (dataset.records.empty()) throw Error(ErrorCode::EmptyDataset, "no records to plot");
  std::vector<ScatterPoint> out;
  out.reserve(dataset.records.size());
  for (const auto& r : dataset.records) out.push_back({r.roll, r.attendance, r.gpa});
  return out;
}

DistributionTable histogram_series(const Dataset& dataset, std::span<const double> edges) {
  if (dataset.records.empty()) throw Error(ErrorCode::EmptyDataset, "no records to bin");
  if (edges.size() < 2) throw Error(ErrorCode::InvalidSpec, "histogram needs at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw Error(ErrorCode::InvalidSpec, "edges must strictly increase");

  const auto n_bins = edges.size() - 1;
  std::vector<std::size_t> counts(n_bins, 0);
  for (const auto& r : dataset.records) {
    if (r.gpa < edges.front() || r.gpa > edges.back())
      throw Error(ErrorCode::GpaOutsideEdges, "roll " + std::to_string(r.roll) + ": gpa " +
                                                  fixed2(r.gpa) + " outside histogram edges");
    // upper_bound gives the first edge strictly above gpa.
    const auto above = std::upper_bound(edges.begin(), edges.end(), r.gpa) - edges.begin();
    const auto bin = std::min<std::size_t>(static_cast<std::size_t>(above) - 1, n_bins - 1);
    ++counts[bin];
  }

  std::vector<std::pair<std::string, std::size_t>> labelled;
  for (std::size_t b = 0; b < n_bins; ++b)
    labelled.emplace_back(fixed2(edges[b]) + "-" + fixed2(edges[b + 1]), counts[b]);
  return band_distribution(labelled);
}

std::vector<Point> cluster_points(const Dataset& dataset, FeatureSpace features) {
  std::vector<Point> points;
  points.reserve(dataset.records.size());
  for (const auto& r : dataset.records) {
    if (features == FeatureSpace::Gpa)
      points.push_back(Point{{r.gpa}});
    else
      points.push_back(Point{{r.gpa / kMaxGpa, static_cast<double>(r.ct) / kMaxCt,
                              static_cast<double>(r.attendance) / kMaxAttendance}});
  }
  return points;
}

Report build_report(const Dataset& dataset, const PipelineConfig& config) {
  config.validate();
  if (dataset.records.empty()) throw Error(ErrorCode::EmptyDataset, "no records");

  Report report;
  report.source_name = dataset.source_name;
  report.config = config;

  const auto n = dataset.records.size();
  std::vector<double> internal(n), blended(n), basis(n);
  std::vector<Band> bands(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = dataset.records[i];
    internal[i] = internal_score(r, config.weights);
    blended[i] = new_grade(r.gpa, internal[i], config.alpha);
    basis[i] = config.band_on_new_grade ? blended[i] : r.gpa;
    bands[i] = gpa_to_band(basis[i], config.band_spec);
  }

  const auto points = cluster_points(dataset, config.features);
  report.clusters.features = config.features;
  report.clusters.model = fit_best_of(points, config.kmeans, config.restarts);
  report.clusters.seed = config.kmeans.seed;

  const auto categorical = discretize(dataset, config.discretization, bands);
  report.tree = build_tree(TrainingView::over(categorical));

  BandCounts counts;
  for (std::size_t i = 0; i < n; ++i) {
    StudentRow row;
    row.roll = dataset.records[i].roll;
    row.gpa = dataset.records[i].gpa;
    row.internal = internal[i];
    row.new_grade = blended[i];
    row.band = bands[i];
    row.predicted_band = classify(report.tree, categorical[i]);
    row.cluster = report.clusters.model.assignment[i];
    row.letter = gpa_to_letter(basis[i], config.grade_map);
    row.step = recommend(row.letter, config.grade_map).step;
    ++counts[row.band];
    report.per_student.push_back(std::move(row));
  }

  report.distribution_bands = band_distribution(counts);
  report.distribution_five_class = histogram_series(dataset, config.histogram_edges);
  report.scatter = scatter_series(dataset);

  require(report.per_student.size() == n, "one report row per record");
  require(report.distribution_bands.total() == n, "band counts must cover every record");
  require(report.distribution_five_class.total() == n, "histogram must cover every record");
  require(report.clusters.model.assignment.size() == n, "one cluster index per record");
  return report;
}

Report run_pipeline(const PipelineConfig& config) {
  config.validate();
  return build_report(load_csv(config.input_path), config);
}

std::string render_json(const Report& report) {
  Json students = Json::array();
  for (const auto& s : report.per_student)
    students.push_back({{"roll", s.roll},
                        {"gpa", s.gpa},
                        {"internal_score", s.internal},
                        {"new_grade", s.new_grade},
                        {"band", to_string(s.band)},
                        {"predicted_band", to_string(s.predicted_band)},
                        {"cluster", s.cluster},
                        {"letter", s.letter},
                        {"step", step_id(s.step)}});
  const Json j{{"source", report.source_name},
               {"config", config_json(report.config)},
               {"distribution_five_class", table_json(report.distribution_five_class)},
               {"distribution_bands", table_json(report.distribution_bands)},
               {"clusters", cluster_json(report.clusters)},
               {"tree", Json::parse(export_tree(report.tree))},
               {"per_student", std::move(students)}};
  return j.dump(2) + "\n";
}

std::string render_cluster_json(const ClusterSummary& clusters) {
  return cluster_json(clusters).dump(2) + "\n";
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  out << "Student performance report: " << report.source_name << "\n";
  out << "Students: " << report.per_student.size() << "\n\n";

  const auto table = [&](const char* title, const char* header, const DistributionTable& t) {
    out << title << "\n";
    char line[128];
    std::snprintf(line, sizeof line, "  %-12s %8s %11s\n", header, "Students", "Percentage");
    out << line;
    for (const auto& r : t.rows) {
      std::snprintf(line, sizeof line, "  %-12s %8zu %11s\n", r.label.c_str(), r.count,
                    r.percentage_text().c_str());
      out << line;
    }
    out << "\n";
  };
  table("Students by GPA range", "GPA", report.distribution_five_class);
  table("Students by band", "Band", report.distribution_bands);

  const auto& model = report.clusters.model;
  const auto sizes = model.cluster_sizes();
  out << "K-means (" << to_string(report.clusters.features) << ", k=" << model.centroids.size()
      << ", seed=" << report.clusters.seed << "): sse=" << fixed4(model.sse)
      << ", iterations=" << model.iterations << (model.converged ? ", converged" : ", not converged")
      << "\n";
  for (std::size_t c = 0; c < model.centroids.size(); ++c) {
    out << "  cluster " << c << ": size " << sizes[c] << ", centroid (";
    for (std::size_t j = 0; j < model.centroids[c].dim(); ++j)
      out << (j ? ", " : "") << fixed4(model.centroids[c].coords[j]);
    out << ")\n";
  }
  out << "\nDecision tree: root tests '"
      << (report.tree.is_leaf() ? std::string("(leaf)") : report.tree.attribute()) << "', "
      << report.tree.node_count() << " nodes, depth " << report.tree.depth() << "\n\n";

  out << "Per-student recommendations\n";
  char line[160];
  std::snprintf(line, sizeof line, "  %5s %5s %9s %7s %9s %7s %-8s %s\n", "Roll", "GPA", "NewGrade",
                "Band", "Predicted", "Cluster", "Grade", "Step");
  out << line;
  for (const auto& s : report.per_student) {
    std::snprintf(line, sizeof line, "  %5d %5s %9s %7s %9s %7zu %-8s %s\n", s.roll,
                  fixed2(s.gpa).c_str(), fixed2(s.new_grade).c_str(),
                  std::string(to_string(s.band)).c_str(),
                  std::string(to_string(s.predicted_band)).c_str(), s.cluster, s.letter.c_str(),
                  std::string(step_id(s.step)).c_str());
    out << line;
  }

  out << "\nEffort steps\n";
  for (const auto step : {EffortStep::S01, EffortStep::S02, EffortStep::S03, EffortStep::S04}) {
    const auto n = std::count_if(report.per_student.begin(), report.per_student.end(),
                                 [&](const auto& s) { return s.step == step; });
    if (n == 0) continue;
    out << "  " << step_id(step) << " (" << n << " students): " << effort_text(step) << "\n";
  }
  return out.str();
}

std::string render_scatter_csv(const Report& report) {
  std::string out = "roll,attendance,gpa\n";
  for (const auto& p : report.scatter)
    out += std::to_string(p.roll) + "," + std::to_string(p.attendance) + "," + fixed2(p.gpa) + "\n";
  return out;
}

std::string render_histogram_csv(const Report& report) {
  std::string out = "class,gpa_range,count,percentage\n";
  std::size_t c = 1;
  for (const auto& r : report.distribution_five_class.rows)
    out += std::to_string(c++) + "," + r.label + "," + std::to_string(r.count) + "," +
           r.percentage_text() + "\n";
  return out;
}

std::string render_bands_csv(const Report& report) {
  std::string out = "band,count,percentage\n";
  for (const auto& r : report.distribution_bands.rows)
    out += r.label + "," + std::to_string(r.count) + "," + r.percentage_text() + "\n";
  return out;
}

void write_outputs(const Report& report, const std::filesystem::path& dir) {
  const std::vector<std::pair<const char*, std::string>> files{
      {"report.txt", render_text(report)},
      {"report.json", render_json(report)},
      {"tree.json", export_tree(report.tree) + "\n"},
      {"scatter.csv", render_scatter_csv(report)},
      {"histogram.csv", render_histogram_csv(report)},
      {"bands.csv", render_bands_csv(report)},
  };
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : files) write_file(dir / name, content);
}

}  // namespace grademiner
