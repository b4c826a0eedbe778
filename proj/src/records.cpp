#include "grademiner/records.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "grademiner/error.hpp"

namespace grademiner {

namespace {

constexpr std::array<std::string_view, 7> kColumns{
    "roll", "gpa", "ct", "attendance", "assignment", "lab_per", "quiz"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

class LineContext {
 public:
  LineContext(const std::string& source, std::size_t line) : source_(source), line_(line) {}

  [[noreturn]] void fail(ErrorCode code, const std::string& what) const {
    throw Error(code, source_ + ":" + std::to_string(line_) + ": " + what);
  }

  int parse_int(std::string_view text, std::string_view column) const {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
      fail(ErrorCode::MalformedRow,
           "column '" + std::string(column) + "': not an integer: '" + std::string(text) + "'");
    return value;
  }

  double parse_real(std::string_view text, std::string_view column) const {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
        !std::isfinite(value))
      fail(ErrorCode::MalformedRow,
           "column '" + std::string(column) + "': not a number: '" + std::string(text) + "'");
    return value;
  }

  bool parse_flag(std::string_view text, std::string_view column) const {
    const auto v = lower(text);
    if (v == "y") return true;
    if (v == "n") return false;
    fail(ErrorCode::UnknownEnumValue,
         "column '" + std::string(column) + "': expected Y or N, got '" + std::string(text) + "'");
  }

  LabPerformance parse_lab(std::string_view text) const {
    const auto v = lower(text);
    if (v == "good") return LabPerformance::Good;
    if (v == "avg") return LabPerformance::Avg;
    if (v == "bad") return LabPerformance::Bad;
    fail(ErrorCode::UnknownEnumValue,
         "column 'lab_per': expected good, avg or bad, got '" + std::string(text) + "'");
  }

 private:
  const std::string& source_;
  std::size_t line_;
};

// Empty when the record is within every field's domain.
std::string range_problem(const StudentRecord& r) {
  if (r.roll <= 0) return "roll must be positive";
  if (!(std::isfinite(r.gpa) && r.gpa >= 0.0 && r.gpa <= kMaxGpa)) return "gpa outside [0, 4]";
  if (r.ct < 0 || r.ct > kMaxCt) return "ct outside [0, 20]";
  if (r.attendance < 0 || r.attendance > kMaxAttendance) return "attendance outside [0, 10]";
  return {};
}

}  // namespace

std::string_view to_string(Band band) noexcept {
  switch (band) {
    case Band::High: return "High";
    case Band::Medium: return "Medium";
    case Band::Low: return "Low";
  }
  return "?";
}

Band band_from_string(std::string_view name) {
  for (const auto band : kAllBands)
    if (to_string(band) == name) return band;
  throw Error(ErrorCode::UnknownEnumValue, "unknown band '" + std::string(name) + "'");
}

std::string_view to_string(LabPerformance lab) noexcept {
  switch (lab) {
    case LabPerformance::Good: return "good";
    case LabPerformance::Avg: return "avg";
    case LabPerformance::Bad: return "bad";
  }
  return "?";
}

void validate(const StudentRecord& r) {
  if (auto problem = range_problem(r); !problem.empty())
    throw Error(ErrorCode::RangeViolation, "roll " + std::to_string(r.roll) + ": " + problem);
}

Dataset make_dataset(std::vector<StudentRecord> records, std::string source_name) {
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, source_name + ": no records");
  std::set<int> seen;
  for (const auto& r : records) {
    validate(r);
    if (!seen.insert(r.roll).second)
      throw Error(ErrorCode::DuplicateRoll,
                  source_name + ": duplicate roll " + std::to_string(r.roll));
  }
  return Dataset{std::move(records), std::move(source_name)};
}

Dataset parse_csv(std::istream& in, std::string source_name) {
  std::string line;
  std::size_t line_no = 0;
  std::array<std::size_t, kColumns.size()> column_of{};
  bool have_header = false;
  std::vector<StudentRecord> records;
  std::set<int> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const LineContext ctx(source_name, line_no);
    const auto fields = split(line);

    if (!have_header) {
      if (fields.size() != kColumns.size())
        ctx.fail(ErrorCode::MalformedRow, "header must name exactly the seven columns");
      for (std::size_t c = 0; c < kColumns.size(); ++c) {
        auto pos = fields.size();
        for (std::size_t f = 0; f < fields.size(); ++f)
          if (lower(fields[f]) == kColumns[c]) pos = f;
        if (pos == fields.size())
          ctx.fail(ErrorCode::MalformedRow, "header is missing column '" + std::string(kColumns[c]) + "'");
        column_of[c] = pos;
      }
      have_header = true;
      continue;
    }

    if (fields.size() != kColumns.size())
      ctx.fail(ErrorCode::MalformedRow, "expected " + std::to_string(kColumns.size()) +
                                            " fields, got " + std::to_string(fields.size()));
    const auto field = [&](std::size_t c) { return fields[column_of[c]]; };

    StudentRecord r;
    r.roll = ctx.parse_int(field(0), kColumns[0]);
    r.gpa = ctx.parse_real(field(1), kColumns[1]);
    r.ct = ctx.parse_int(field(2), kColumns[2]);
    r.attendance = ctx.parse_int(field(3), kColumns[3]);
    r.assignment = ctx.parse_flag(field(4), kColumns[4]);
    r.lab_per = ctx.parse_lab(field(5));
    r.quiz = ctx.parse_flag(field(6), kColumns[6]);

    if (auto problem = range_problem(r); !problem.empty())
      ctx.fail(ErrorCode::RangeViolation, problem);
    if (!seen.insert(r.roll).second)
      ctx.fail(ErrorCode::DuplicateRoll, "duplicate roll " + std::to_string(r.roll));
    records.push_back(r);
  }

  if (records.empty()) throw Error(ErrorCode::EmptyDataset, source_name + ": no data rows");
  return Dataset{std::move(records), std::move(source_name)};
}

Dataset parse_csv(std::string_view text, std::string source_name) {
  std::istringstream in{std::string(text)};
  return parse_csv(in, std::move(source_name));
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_csv(in, path.string());
}

std::string to_csv(const Dataset& dataset) {
  std::string out = "roll,gpa,ct,attendance,assignment,lab_per,quiz\n";
  for (const auto& r : dataset.records) {
    char gpa[32];
    const auto res = std::to_chars(gpa, gpa + sizeof gpa, r.gpa);
    out += std::to_string(r.roll);
    out += ',';
    out.append(gpa, res.ptr);
    out += ',' + std::to_string(r.ct) + ',' + std::to_string(r.attendance) + ',';
    out += r.assignment ? 'Y' : 'N';
    out += ',';
    out += to_string(r.lab_per);
    out += ',';
    out += r.quiz ? 'Y' : 'N';
    out += '\n';
  }
  return out;
}

void BandSpec::validate() const {
  if (!(0.0 <= low_max && low_max < high_min && high_min <= kMaxGpa))
    throw Error(ErrorCode::InvalidSpec, "band thresholds must satisfy 0 <= low_max < high_min <= 4");
}

Band gpa_to_band(double gpa, const BandSpec& spec) {
  if (!(gpa >= 0.0 && gpa <= kMaxGpa))
    throw Error(ErrorCode::OutOfRange, "gpa " + std::to_string(gpa) + " outside [0, 4]");
  if (gpa >= spec.high_min) return Band::High;
  if (gpa <= spec.low_max) return Band::Low;
  return Band::Medium;
}

BandCounts band_counts(const Dataset& dataset, const BandSpec& spec) {
  if (dataset.records.empty()) throw Error(ErrorCode::EmptyDataset, "no records to count");
  BandCounts counts;
  for (const auto& r : dataset.records) ++counts[gpa_to_band(r.gpa, spec)];
  return counts;
}

namespace {

void validate_bins(std::span<const Bin> bins, int max_value, std::string_view name) {
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidSpec, std::string(name) + ": " + what);
  };
  if (bins.empty()) fail("no bins");
  if (bins.front().upper < 0) fail("first upper bound below zero");
  std::set<std::string, std::less<>> labels;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (i > 0 && bins[i].upper <= bins[i - 1].upper) fail("upper bounds must strictly increase");
    if (bins[i].label.empty()) fail("empty label");
    if (!labels.insert(bins[i].label).second) fail("duplicate label '" + bins[i].label + "'");
  }
  if (bins.back().upper < max_value)
    fail("last upper bound must cover " + std::to_string(max_value));
}

}  // namespace

void DiscretizationSpec::validate() const {
  validate_bins(ct_bins, kMaxCt, "ct_bins");
  validate_bins(attendance_bins, kMaxAttendance, "attendance_bins");
}

std::string_view bin_label(int value, std::span<const Bin> bins) {
  for (const auto& bin : bins)
    if (value <= bin.upper) return bin.label;
  throw Error(ErrorCode::OutOfRange, "value " + std::to_string(value) + " above every bin");
}

std::vector<CategoricalRecord> discretize(const Dataset& dataset,
                                          const DiscretizationSpec& spec,
                                          std::span<const Band> labels) {
  spec.validate();
  if (dataset.records.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to discretize");
  if (labels.size() != dataset.records.size())
    throw Error(ErrorCode::InvalidSpec, "one class label per record required");

  std::vector<CategoricalRecord> out;
  out.reserve(dataset.records.size());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& r = dataset.records[i];
    CategoricalRecord c;
    c.roll = r.roll;
    c.attributes.emplace(attr::kCtBand, bin_label(r.ct, spec.ct_bins));
    c.attributes.emplace(attr::kAttendanceBand, bin_label(r.attendance, spec.attendance_bins));
    c.attributes.emplace(attr::kAssignment, r.assignment ? "Y" : "N");
    c.attributes.emplace(attr::kLabPer, to_string(r.lab_per));
    c.attributes.emplace(attr::kQuiz, r.quiz ? "Y" : "N");
    c.class_label = labels[i];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CategoricalRecord> discretize(const Dataset& dataset,
                                          const DiscretizationSpec& spec,
                                          const BandSpec& bands) {
  bands.validate();
  std::vector<Band> labels;
  labels.reserve(dataset.records.size());
  for (const auto& r : dataset.records) labels.push_back(gpa_to_band(r.gpa, bands));
  return discretize(dataset, spec, labels);
}

}  // namespace grademiner
