#pragma once

// ID3 decision-tree induction over categorical attributes.

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grademiner/records.hpp"

namespace grademiner {

struct TrainingView {
  std::vector<CategoricalRecord> records;
  // Candidate attributes; their order decides gain ties.
  std::vector<std::string> attributes;

  /// View over all five tree attributes in canonical order.
  static TrainingView over(std::vector<CategoricalRecord> records);
};

/// Immutable tree node. A leaf carries its class; an internal node carries
/// the tested attribute, one branch per value seen in its training subset,
/// and the subset's majority class for values it has never seen.
class TreeNode {
 public:
  using Branches = std::map<std::string, TreeNode, std::less<>>;

  static TreeNode leaf(Band label);
  static TreeNode internal(std::string attribute, Band fallback, Branches branches);

  bool is_leaf() const noexcept { return branches_ == nullptr; }
  /// Leaf class, or the fallback class of an internal node.
  Band label() const noexcept { return label_; }
  const std::string& attribute() const noexcept { return attribute_; }
  const Branches& branches() const;

  std::size_t depth() const;
  std::size_t node_count() const;

  friend bool operator==(const TreeNode& a, const TreeNode& b);

 private:
  TreeNode() = default;

  Band label_ = Band::Medium;
  std::string attribute_;
  std::shared_ptr<const Branches> branches_;
};

BandCounts class_counts(std::span<const CategoricalRecord> records);

/// Majority class, ties resolved in High, Medium, Low order.
Band majority(const BandCounts& counts);

/// Base-2 Shannon entropy; zero counts contribute nothing.
double entropy(std::span<const std::size_t> counts);
double entropy(const BandCounts& counts);

double information_gain(const TrainingView& view, std::string_view attribute);

/// Top-down greedy induction: a pure subset or an exhausted attribute list
/// becomes a leaf; otherwise the node splits on the highest-gain attribute
/// (earliest in view.attributes on ties) and recurses on each value's subset
/// with that attribute removed.
TreeNode build_tree(const TrainingView& view);

/// Unseen attribute values resolve to the node's fallback class.
/// Throws MissingAttribute if the record lacks a tested attribute.
Band classify(const TreeNode& tree, const CategoricalRecord& record);

/// Compact JSON: {"class":name} for leaves,
/// {"attribute":a,"branches":{value:subtree,...},"fallback":name} otherwise.
std::string export_tree(const TreeNode& tree);
TreeNode import_tree(std::string_view json_text);

}  // namespace grademiner
