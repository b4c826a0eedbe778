#include "grademiner/advisor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "grademiner/error.hpp"

namespace grademiner {

namespace {

// Effort text, one entry per step, reproduced verbatim.
constexpr std::array<std::string_view, 4> kEffortText{
    "He/She is a good student. Need not to take special care.",
    "Is not so good. Need to take care of CT & Quiz.",
    "Is a medium student. Should take care of CT,quiz and lab performance also.",
    "Is a lower standard student. Need lot of practice of his/her lesson and also take care of "
    "all the courses ct,lab,quiz ,attendance carefully.",
};

double lab_value(LabPerformance lab) {
  switch (lab) {
    case LabPerformance::Good: return 1.0;
    case LabPerformance::Avg: return 0.5;
    case LabPerformance::Bad: return 0.0;
  }
  return 0.0;
}

}  // namespace

void InternalWeights::validate() const {
  for (const double w : {ct, attendance, assignment, lab, quiz})
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidConfig, "internal weights must be non-negative");
  if (std::abs(ct + attendance + assignment + lab + quiz - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidConfig, "internal weights must sum to 1");
}

double internal_score(const StudentRecord& r, const InternalWeights& w) {
  return w.ct * (static_cast<double>(r.ct) / kMaxCt) +
         w.attendance * (static_cast<double>(r.attendance) / kMaxAttendance) +
         w.assignment * (r.assignment ? 1.0 : 0.0) + w.lab * lab_value(r.lab_per) +
         w.quiz * (r.quiz ? 1.0 : 0.0);
}

double new_grade(double external_gpa, double internal, double alpha) {
  if (!(external_gpa >= 0.0 && external_gpa <= kMaxGpa))
    throw Error(ErrorCode::OutOfRange, "external gpa outside [0, 4]");
  if (!(internal >= 0.0 && internal <= 1.0))
    throw Error(ErrorCode::OutOfRange, "internal score outside [0, 1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::OutOfRange, "alpha outside [0, 1]");
  return std::clamp(alpha * external_gpa + (1.0 - alpha) * kMaxGpa * internal, 0.0, kMaxGpa);
}

void GradeMap::validate() const {
  if (steps.empty()) throw Error(ErrorCode::InvalidConfig, "grade map is empty");
  if (steps.front().min_gpa > kMaxGpa)
    throw Error(ErrorCode::InvalidConfig, "top grade threshold above 4.00");
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (!(steps[i].min_gpa < steps[i - 1].min_gpa))
      throw Error(ErrorCode::InvalidConfig, "grade thresholds must strictly decrease");
  if (steps.back().min_gpa > 0.0)
    throw Error(ErrorCode::InvalidConfig, "grade map must reach down to 0.00");
  for (std::size_t i = 0; i < steps.size(); ++i)
    for (std::size_t j = i + 1; j < steps.size(); ++j)
      if (steps[i].letter == steps[j].letter)
        throw Error(ErrorCode::InvalidConfig, "duplicate letter '" + steps[i].letter + "'");
}

bool GradeMap::contains(std::string_view letter) const {
  return std::any_of(steps.begin(), steps.end(), [&](const auto& s) { return s.letter == letter; });
}

std::string gpa_to_letter(double gpa, const GradeMap& map) {
  if (!(gpa >= 0.0 && gpa <= kMaxGpa)) throw Error(ErrorCode::OutOfRange, "gpa outside [0, 4]");
  for (const auto& step : map.steps)
    if (step.min_gpa <= gpa) return step.letter;
  throw Error(ErrorCode::InvalidConfig, "grade map does not cover gpa");
}

std::string_view step_id(EffortStep step) noexcept {
  switch (step) {
    case EffortStep::S01: return "S-01";
    case EffortStep::S02: return "S-02";
    case EffortStep::S03: return "S-03";
    case EffortStep::S04: return "S-04";
  }
  return "?";
}

EffortStep step_from_id(std::string_view id) {
  for (const auto s : {EffortStep::S01, EffortStep::S02, EffortStep::S03, EffortStep::S04})
    if (step_id(s) == id) return s;
  throw Error(ErrorCode::UnknownEnumValue, "unknown step '" + std::string(id) + "'");
}

std::string_view effort_text(EffortStep step) noexcept {
  return kEffortText[static_cast<std::size_t>(step)];
}

EffortRecommendation recommend(std::string_view letter, const GradeMap& map) {
  EffortStep step;
  if (letter == "A+")
    step = EffortStep::S01;
  else if (letter == "A" || letter == "A-")
    step = EffortStep::S02;
  else if (letter == "B+" || letter == "B")
    step = EffortStep::S03;
  else if (map.contains(letter))
    step = EffortStep::S04;
  else
    throw Error(ErrorCode::UnknownLetter, "'" + std::string(letter) + "' is not a known grade");
  return {step, effort_text(step)};
}

std::string DistributionRow::percentage_text() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(hundredths / 100),
                static_cast<long long>(hundredths % 100));
  return buf;
}

std::size_t DistributionTable::total() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.count;
  return n;
}

DistributionTable band_distribution(std::span<const std::pair<std::string, std::size_t>> counts) {
  std::uint64_t total = 0;
  for (const auto& [label, count] : counts) total += count;
  if (total == 0) throw Error(ErrorCode::AllZero, "distribution needs at least one positive count");

  DistributionTable table;
  for (const auto& [label, count] : counts) {
    // round_half_up(10000 * count / total)
    const auto hundredths = (20000 * static_cast<std::uint64_t>(count) + total) / (2 * total);
    table.rows.push_back({label, count, static_cast<std::int64_t>(hundredths)});
  }
  return table;
}

DistributionTable band_distribution(const BandCounts& counts) {
  std::vector<std::pair<std::string, std::size_t>> labelled;
  for (const auto band : kAllBands) labelled.emplace_back(std::string(to_string(band)), counts[band]);
  return band_distribution(labelled);
}

}  // namespace grademiner
