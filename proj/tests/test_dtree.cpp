#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "grademiner/dtree.hpp"
#include "grademiner/error.hpp"
#include "oracles.hpp"

using namespace grademiner;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a grademiner::Error");
  return ErrorCode::InvariantViolation;
}

CategoricalRecord rec(int roll, std::map<std::string, std::string, std::less<>> attrs, Band label) {
  return CategoricalRecord{roll, std::move(attrs), label};
}

std::vector<CategoricalRecord> table1() {
  return discretize(load_csv(std::string(GRADEMINER_FIXTURES) + "/table1.csv"), DiscretizationSpec{});
}

// Random instance: up to 12 records, up to 3 attributes with up to 3 values.
TrainingView random_view(std::mt19937_64& rng) {
  const std::size_t n_attr = 1 + rng() % 3;
  const std::size_t n_rec = 1 + rng() % 12;
  TrainingView view;
  for (std::size_t a = 0; a < n_attr; ++a) view.attributes.push_back("a" + std::to_string(a));
  std::vector<std::size_t> cardinality;
  for (std::size_t a = 0; a < n_attr; ++a) cardinality.push_back(1 + rng() % 3);
  for (std::size_t i = 0; i < n_rec; ++i) {
    CategoricalRecord r;
    r.roll = static_cast<int>(i + 1);
    for (std::size_t a = 0; a < n_attr; ++a)
      r.attributes[view.attributes[a]] = "v" + std::to_string(rng() % cardinality[a]);
    r.class_label = kAllBands[rng() % 3];
    view.records.push_back(std::move(r));
  }
  return view;
}

void check_paths(const TreeNode& node, std::set<std::string> used) {
  if (node.is_leaf()) return;
  CHECK(used.insert(node.attribute()).second);
  CHECK_FALSE(node.branches().empty());
  for (const auto& [value, child] : node.branches()) check_paths(child, used);
}

}  // namespace

TEST_CASE("entropy") {
  CHECK(entropy(BandCounts{{5, 0, 0}}) == 0.0);
  CHECK(entropy(BandCounts{{5, 5, 0}}) == doctest::Approx(1.0));
  // -(0.5 log2 0.5 + 0.45 log2 0.45 + 0.05 log2 0.05), evaluated independently.
  CHECK(entropy(BandCounts{{10, 9, 1}}) == doctest::Approx(1.2344977967946407).epsilon(1e-12));
  CHECK(code_of([] { entropy(BandCounts{}); }) == ErrorCode::AllZeroCounts);
}

TEST_CASE("property: entropy bounds") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    BandCounts c{{rng() % 6, rng() % 6, rng() % 6}};
    if (c.total() == 0) continue;
    const auto positive = std::count_if(c.values.begin(), c.values.end(), [](auto x) { return x > 0; });
    const double h = entropy(c);
    CHECK(h >= 0.0);
    CHECK(h <= std::log2(static_cast<double>(positive)) + 1e-12);
    CHECK((h == 0.0) == (positive == 1));
  }
}

TEST_CASE("information_gain") {
  TrainingView constant{{rec(1, {{"x", "a"}}, Band::High), rec(2, {{"x", "a"}}, Band::Low)}, {"x"}};
  CHECK(information_gain(constant, "x") == 0.0);

  TrainingView separating{{rec(1, {{"x", "a"}}, Band::High), rec(2, {{"x", "b"}}, Band::Low),
                           rec(3, {{"x", "a"}}, Band::High), rec(4, {{"x", "c"}}, Band::Medium)},
                          {"x"}};
  CHECK(information_gain(separating, "x") ==
        doctest::Approx(entropy(class_counts(separating.records))));

  CHECK(code_of([&] { information_gain(separating, "y"); }) == ErrorCode::UnknownAttribute);
}

TEST_CASE("gains on the discretized fixture agree with the direct oracle") {
  const auto view = TrainingView::over(table1());
  for (const auto a : kTreeAttributes) {
    CAPTURE(a);
    CHECK(std::abs(information_gain(view, a) - oracle::gain(view.records, std::string(a))) < 1e-9);
  }
  // Frozen from an independent contingency-table computation.
  CHECK(information_gain(view, "lab_per") == doctest::Approx(0.31229243026596776).epsilon(1e-9));
  CHECK(information_gain(view, "attendance_band") == doctest::Approx(0.37224217190281411).epsilon(1e-9));
}

TEST_CASE("build_tree leaves") {
  TrainingView pure{{rec(1, {{"x", "a"}}, Band::High), rec(2, {{"x", "b"}}, Band::High)}, {"x"}};
  CHECK(build_tree(pure) == TreeNode::leaf(Band::High));

  TrainingView exhausted{{rec(1, {}, Band::Low), rec(2, {}, Band::Medium), rec(3, {}, Band::Low)}, {}};
  CHECK(build_tree(exhausted) == TreeNode::leaf(Band::Low));

  // Majority ties go High, Medium, Low.
  TrainingView tied{{rec(1, {}, Band::Low), rec(2, {}, Band::Medium)}, {}};
  CHECK(build_tree(tied) == TreeNode::leaf(Band::Medium));

  CHECK(code_of([] { build_tree(TrainingView{}); }) == ErrorCode::EmptyTrainingSet);
  TrainingView missing{{rec(1, {}, Band::Low)}, {"x"}};
  CHECK(code_of([&] { build_tree(missing); }) == ErrorCode::UnknownAttribute);
}

TEST_CASE("gain ties fall to the earliest attribute") {
  // x and y carry identical information.
  TrainingView view{{rec(1, {{"x", "a"}, {"y", "p"}}, Band::High),
                     rec(2, {{"x", "b"}, {"y", "q"}}, Band::Low)},
                    {"y", "x"}};
  CHECK(build_tree(view).attribute() == "y");
  view.attributes = {"x", "y"};
  CHECK(build_tree(view).attribute() == "x");
}

TEST_CASE("fixture tree") {
  const auto records = table1();
  REQUIRE(oracle::consistent(records));
  const auto view = TrainingView::over(records);
  const auto tree = build_tree(view);

  std::vector<std::string> attrs(kTreeAttributes.begin(), kTreeAttributes.end());
  CHECK(tree.attribute() == attrs[oracle::argmax_gain(records, attrs)]);
  CHECK(tree.attribute() == "attendance_band");
  CHECK(tree.label() == Band::High);
  check_paths(tree, {});
  CHECK(tree.depth() <= kTreeAttributes.size());
  for (const auto& r : records) CHECK(classify(tree, r) == r.class_label);
}

TEST_CASE("classify") {
  CHECK(classify(TreeNode::leaf(Band::Low), CategoricalRecord{}) == Band::Low);

  TreeNode::Branches b;
  b.emplace("Y", TreeNode::leaf(Band::High));
  b.emplace("N", TreeNode::leaf(Band::Low));
  const auto tree = TreeNode::internal("quiz", Band::Medium, std::move(b));
  CHECK(classify(tree, rec(1, {{"quiz", "Y"}}, Band::Low)) == Band::High);
  CHECK(classify(tree, rec(1, {{"quiz", "maybe"}}, Band::Low)) == Band::Medium);
  CHECK(code_of([&] { classify(tree, rec(1, {{"lab_per", "good"}}, Band::Low)); }) ==
        ErrorCode::MissingAttribute);
}

TEST_CASE("export_tree") {
  CHECK(export_tree(TreeNode::leaf(Band::High)) == R"({"class":"High"})");

  TreeNode::Branches b;
  b.emplace("Y", TreeNode::leaf(Band::High));
  b.emplace("N", TreeNode::leaf(Band::Low));
  const auto tree = TreeNode::internal("quiz", Band::High, std::move(b));
  CHECK(export_tree(tree) ==
        R"({"attribute":"quiz","branches":{"N":{"class":"Low"},"Y":{"class":"High"}},"fallback":"High"})");

  const auto fixture_tree = build_tree(TrainingView::over(table1()));
  const auto text = export_tree(fixture_tree);
  CHECK(import_tree(text) == fixture_tree);
  CHECK(export_tree(import_tree(text)) == text);
}

TEST_CASE("import_tree rejects malformed documents") {
  CHECK(code_of([] { import_tree("{"); }) == ErrorCode::MalformedTree);
  CHECK(code_of([] { import_tree(R"({"class":"Great"})"); }) == ErrorCode::MalformedTree);
  CHECK(code_of([] { import_tree(R"({"attribute":"q","fallback":"High","branches":{}})"); }) ==
        ErrorCode::MalformedTree);
  CHECK(code_of([] { import_tree(R"([1,2])"); }) == ErrorCode::MalformedTree);
}

TEST_CASE("property: random instances") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto view = random_view(rng);
    const auto tree = build_tree(view);
    CHECK(build_tree(view) == tree);
    check_paths(tree, {});
    CHECK(tree.depth() <= view.attributes.size());
    for (const auto& a : view.attributes) CHECK(information_gain(view, a) >= -1e-12);
    if (oracle::consistent(view.records))
      for (const auto& r : view.records) CHECK(classify(tree, r) == r.class_label);
    CHECK(import_tree(export_tree(tree)) == tree);
  }
}
