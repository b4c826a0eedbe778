#pragma once

// Instructor-facing logic: blending internal and external assessment into a
// new grade, letter grades, effort recommendations and distribution tables.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grademiner/records.hpp"

namespace grademiner {

struct InternalWeights {
  double ct = 0.2;
  double attendance = 0.2;
  double assignment = 0.2;
  double lab = 0.2;
  double quiz = 0.2;

  void validate() const;
};

/// Weighted sum of normalized internal assessments, in [0, 1].
/// Lab performance scores good = 1, avg = 0.5, bad = 0.
double internal_score(const StudentRecord& record, const InternalWeights& weights = {});

/// alpha * external_gpa + (1 - alpha) * 4 * internal.
double new_grade(double external_gpa, double internal, double alpha = 0.5);

struct GradeStep {
  std::string letter;
  double min_gpa = 0.0;  // inclusive
};

/// Letter grades ordered from best to worst. The default thresholds are a
/// convention of this tool (0.25 steps), not an institutional standard.
struct GradeMap {
  std::vector<GradeStep> steps{{"A+", 3.75}, {"A", 3.50}, {"A-", 3.25},
                               {"B+", 3.00}, {"B", 2.75}, {"below B", 0.00}};

  void validate() const;
  bool contains(std::string_view letter) const;
};

std::string gpa_to_letter(double gpa, const GradeMap& map = {});

enum class EffortStep { S01, S02, S03, S04 };

std::string_view step_id(EffortStep step) noexcept;
EffortStep step_from_id(std::string_view id);
std::string_view effort_text(EffortStep step) noexcept;

struct EffortRecommendation {
  EffortStep step = EffortStep::S04;
  std::string_view text;
};

/// A+ -> S-01, A/A- -> S-02, B+/B -> S-03, any other letter of `map` -> S-04.
/// Throws UnknownLetter for letters outside the map.
EffortRecommendation recommend(std::string_view letter, const GradeMap& map = {});

struct DistributionRow {
  std::string label;
  std::size_t count = 0;
  std::int64_t hundredths = 0;  // percentage * 100, rounded half-up

  double percentage() const noexcept { return static_cast<double>(hundredths) / 100.0; }
  /// Two-decimal rendering, e.g. "8.33".
  std::string percentage_text() const;

  friend bool operator==(const DistributionRow&, const DistributionRow&) = default;
};

struct DistributionTable {
  std::vector<DistributionRow> rows;

  std::size_t total() const noexcept;
};

/// Percentages 100 * count / total rounded half-up to two decimals, computed
/// in exact integer arithmetic.
DistributionTable band_distribution(std::span<const std::pair<std::string, std::size_t>> counts);

DistributionTable band_distribution(const BandCounts& counts);

}  // namespace grademiner
