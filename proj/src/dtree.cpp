#include "grademiner/dtree.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "grademiner/error.hpp"

namespace grademiner {

namespace {

using Json = nlohmann::json;

// Gains closer than this count as equal, so ties fall to attribute order
// rather than to rounding noise.
constexpr double kGainTieTolerance = 1e-12;

using Subset = std::vector<const CategoricalRecord*>;

const std::string& value_of(const CategoricalRecord& r, std::string_view attribute) {
  const auto it = r.attributes.find(attribute);
  if (it == r.attributes.end())
    throw Error(ErrorCode::UnknownAttribute, "record " + std::to_string(r.roll) +
                                                 " has no attribute '" + std::string(attribute) + "'");
  return it->second;
}

BandCounts counts_of(const Subset& subset) {
  BandCounts counts;
  for (const auto* r : subset) ++counts[r->class_label];
  return counts;
}

std::map<std::string, Subset, std::less<>> partition(const Subset& subset,
                                                     std::string_view attribute) {
  std::map<std::string, Subset, std::less<>> parts;
  for (const auto* r : subset) parts[value_of(*r, attribute)].push_back(r);
  return parts;
}

double gain_of(const Subset& subset, std::string_view attribute) {
  double remainder = 0.0;
  const auto n = static_cast<double>(subset.size());
  for (const auto& [value, part] : partition(subset, attribute))
    remainder += static_cast<double>(part.size()) / n * entropy(counts_of(part));
  return entropy(counts_of(subset)) - remainder;
}

TreeNode grow(const Subset& subset, std::vector<std::string> attributes) {
  const auto counts = counts_of(subset);
  const auto majority_class = majority(counts);

  const auto classes_present =
      std::count_if(counts.values.begin(), counts.values.end(), [](auto c) { return c > 0; });
  if (classes_present == 1 || attributes.empty()) return TreeNode::leaf(majority_class);

  std::vector<double> gains;
  gains.reserve(attributes.size());
  for (const auto& a : attributes) gains.push_back(gain_of(subset, a));
  const double best_gain = *std::max_element(gains.begin(), gains.end());
  std::size_t chosen = 0;
  while (gains[chosen] < best_gain - kGainTieTolerance) ++chosen;

  const auto attribute = attributes[chosen];
  attributes.erase(attributes.begin() + static_cast<std::ptrdiff_t>(chosen));

  TreeNode::Branches branches;
  for (const auto& [value, part] : partition(subset, attribute))
    branches.emplace(value, grow(part, attributes));
  return TreeNode::internal(attribute, majority_class, std::move(branches));
}

Json to_json(const TreeNode& node) {
  if (node.is_leaf()) return Json{{"class", to_string(node.label())}};
  Json branches = Json::object();
  for (const auto& [value, child] : node.branches()) branches[value] = to_json(child);
  return Json{{"attribute", node.attribute()},
              {"fallback", to_string(node.label())},
              {"branches", std::move(branches)}};
}

TreeNode from_json(const Json& j) {
  const auto fail = [](const std::string& what) -> TreeNode {
    throw Error(ErrorCode::MalformedTree, what);
  };
  if (!j.is_object()) return fail("node is not an object");
  try {
    if (j.size() == 1 && j.contains("class"))
      return TreeNode::leaf(band_from_string(j.at("class").get<std::string>()));
    if (j.size() == 3 && j.contains("attribute") && j.contains("fallback") && j.contains("branches")) {
      const auto& raw = j.at("branches");
      if (!raw.is_object() || raw.empty()) return fail("branches must be a non-empty object");
      TreeNode::Branches branches;
      for (const auto& [value, child] : raw.items()) branches.emplace(value, from_json(child));
      return TreeNode::internal(j.at("attribute").get<std::string>(),
                                band_from_string(j.at("fallback").get<std::string>()),
                                std::move(branches));
    }
  } catch (const Json::exception& e) {
    return fail(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedTree) throw;
    return fail(e.what());
  }
  return fail("unrecognised node shape");
}

}  // namespace

TrainingView TrainingView::over(std::vector<CategoricalRecord> records) {
  return TrainingView{std::move(records),
                      std::vector<std::string>(kTreeAttributes.begin(), kTreeAttributes.end())};
}

TreeNode TreeNode::leaf(Band label) {
  TreeNode n;
  n.label_ = label;
  return n;
}

TreeNode TreeNode::internal(std::string attribute, Band fallback, Branches branches) {
  if (branches.empty()) throw Error(ErrorCode::MalformedTree, "internal node without branches");
  TreeNode n;
  n.label_ = fallback;
  n.attribute_ = std::move(attribute);
  n.branches_ = std::make_shared<const Branches>(std::move(branches));
  return n;
}

const TreeNode::Branches& TreeNode::branches() const {
  static const Branches kNone;
  return branches_ ? *branches_ : kNone;
}

std::size_t TreeNode::depth() const {
  std::size_t deepest = 0;
  for (const auto& [value, child] : branches()) deepest = std::max(deepest, 1 + child.depth());
  return deepest;
}

std::size_t TreeNode::node_count() const {
  std::size_t n = 1;
  for (const auto& [value, child] : branches()) n += child.node_count();
  return n;
}

bool operator==(const TreeNode& a, const TreeNode& b) {
  return a.label_ == b.label_ && a.attribute_ == b.attribute_ && a.is_leaf() == b.is_leaf() &&
         a.branches() == b.branches();
}

BandCounts class_counts(std::span<const CategoricalRecord> records) {
  BandCounts counts;
  for (const auto& r : records) ++counts[r.class_label];
  return counts;
}

Band majority(const BandCounts& counts) {
  Band best = Band::High;
  for (const auto band : kAllBands)
    if (counts[band] > counts[best]) best = band;
  return best;
}

double entropy(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (const auto c : counts) total += c;
  if (total == 0) throw Error(ErrorCode::AllZeroCounts, "entropy of an empty distribution");
  double h = 0.0;
  for (const auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double entropy(const BandCounts& counts) { return entropy(std::span<const std::size_t>(counts.values)); }

double information_gain(const TrainingView& view, std::string_view attribute) {
  if (std::find(view.attributes.begin(), view.attributes.end(), attribute) == view.attributes.end())
    throw Error(ErrorCode::UnknownAttribute, "'" + std::string(attribute) + "' is not in the view");
  if (view.records.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no records");
  Subset all;
  for (const auto& r : view.records) all.push_back(&r);
  return gain_of(all, attribute);
}

TreeNode build_tree(const TrainingView& view) {
  if (view.records.empty()) throw Error(ErrorCode::EmptyTrainingSet, "cannot grow a tree from no records");
  Subset all;
  for (const auto& r : view.records) {
    for (const auto& a : view.attributes) value_of(r, a);
    all.push_back(&r);
  }
  return grow(all, view.attributes);
}

Band classify(const TreeNode& tree, const CategoricalRecord& record) {
  const TreeNode* node = &tree;
  while (!node->is_leaf()) {
    const auto value = record.attributes.find(node->attribute());
    if (value == record.attributes.end())
      throw Error(ErrorCode::MissingAttribute, "record " + std::to_string(record.roll) +
                                                   " lacks attribute '" + node->attribute() + "'");
    const auto branch = node->branches().find(value->second);
    if (branch == node->branches().end()) return node->label();
    node = &branch->second;
  }
  return node->label();
}

std::string export_tree(const TreeNode& tree) { return to_json(tree).dump(); }

TreeNode import_tree(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedTree, e.what());
  }
  return from_json(j);
}

}  // namespace grademiner
