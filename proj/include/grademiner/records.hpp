#pragma once

// Student records: the tabular data model, CSV ingestion, GPA banding and
// the discretization that turns numeric assessments into categorical
// attributes for tree induction.

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace grademiner {

/// Performance band. Declaration order (High, Medium, Low) is also the
/// tie-break order wherever a majority class has to be chosen.
enum class Band { High, Medium, Low };

inline constexpr std::array<Band, 3> kAllBands{Band::High, Band::Medium, Band::Low};

std::string_view to_string(Band band) noexcept;
Band band_from_string(std::string_view name);

enum class LabPerformance { Good, Avg, Bad };

std::string_view to_string(LabPerformance lab) noexcept;

struct StudentRecord {
  int roll = 0;
  double gpa = 0.0;
  int ct = 0;
  int attendance = 0;
  bool assignment = false;
  LabPerformance lab_per = LabPerformance::Avg;
  bool quiz = false;

  friend bool operator==(const StudentRecord&, const StudentRecord&) = default;
};

inline constexpr double kMaxGpa = 4.0;
inline constexpr int kMaxCt = 20;
inline constexpr int kMaxAttendance = 10;

/// Throws RangeViolation if any field is outside its domain.
void validate(const StudentRecord& record);

struct Dataset {
  std::vector<StudentRecord> records;
  std::string source_name;
};

/// Builds a dataset from already-typed records, enforcing the same
/// invariants as CSV ingestion (non-empty, unique rolls, field ranges).
Dataset make_dataset(std::vector<StudentRecord> records, std::string source_name);

/// Parses `roll,gpa,ct,attendance,assignment,lab_per,quiz` CSV. Columns may
/// appear in any order and header names are case-insensitive. Errors carry
/// the source name and 1-based line number.
Dataset parse_csv(std::istream& in, std::string source_name = "<input>");
Dataset parse_csv(std::string_view text, std::string source_name = "<input>");
Dataset load_csv(const std::filesystem::path& path);

/// Canonical CSV: fixed column order, shortest round-trip GPA formatting.
std::string to_csv(const Dataset& dataset);

struct BandSpec {
  double high_min = 3.50;
  double low_max = 2.20;

  void validate() const;
};

/// High if gpa >= high_min, Low if gpa <= low_max, Medium otherwise.
Band gpa_to_band(double gpa, const BandSpec& spec = {});

struct BandCounts {
  std::array<std::size_t, 3> values{};

  std::size_t& operator[](Band band) { return values[static_cast<std::size_t>(band)]; }
  std::size_t operator[](Band band) const { return values[static_cast<std::size_t>(band)]; }
  std::size_t total() const noexcept { return values[0] + values[1] + values[2]; }

  friend bool operator==(const BandCounts&, const BandCounts&) = default;
};

BandCounts band_counts(const Dataset& dataset, const BandSpec& spec = {});

struct Bin {
  int upper = 0;  // inclusive
  std::string label;
};

struct DiscretizationSpec {
  std::vector<Bin> ct_bins{{6, "low"}, {12, "mid"}, {20, "high"}};
  std::vector<Bin> attendance_bins{{4, "low"}, {7, "mid"}, {10, "high"}};

  void validate() const;
};

/// Label of the first bin whose upper bound is >= value.
std::string_view bin_label(int value, std::span<const Bin> bins);

namespace attr {
inline constexpr std::string_view kCtBand = "ct_band";
inline constexpr std::string_view kAttendanceBand = "attendance_band";
inline constexpr std::string_view kAssignment = "assignment";
inline constexpr std::string_view kLabPer = "lab_per";
inline constexpr std::string_view kQuiz = "quiz";
}  // namespace attr

/// Tree attributes in their canonical order; the order drives gain tie-breaks.
inline constexpr std::array<std::string_view, 5> kTreeAttributes{
    attr::kCtBand, attr::kAttendanceBand, attr::kAssignment, attr::kLabPer, attr::kQuiz};

struct CategoricalRecord {
  int roll = 0;
  std::map<std::string, std::string, std::less<>> attributes;
  Band class_label = Band::Medium;

  friend bool operator==(const CategoricalRecord&, const CategoricalRecord&) = default;
};

/// Maps every record onto the five categorical attributes. The class label
/// is the record's GPA band; GPA itself never becomes an attribute.
std::vector<CategoricalRecord> discretize(const Dataset& dataset,
                                          const DiscretizationSpec& spec,
                                          const BandSpec& bands = {});

/// Same, with caller-supplied class labels (one per record).
std::vector<CategoricalRecord> discretize(const Dataset& dataset,
                                          const DiscretizationSpec& spec,
                                          std::span<const Band> labels);

}  // namespace grademiner
