#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ckt/box.hpp"
#include "ckt/estimators.hpp"
#include "ckt/sample.hpp"

namespace ckt {

struct TreeConfig {
  double min_cut = 0.0;    // smallest tau difference worth a split
  double min_size = 0.0;   // smallest side, as a fraction of the full n
  double alpha = 0.0;      // weight of the balance bonus in the split score
  std::size_t max_depth = 6;
};

struct Split {
  std::size_t pair = 0;        // position in all_pairs(p)
  std::size_t coordinate = 0;  // conditioning column
  double threshold = 0.0;      // left: value <= threshold
  double diff = 0.0;           // |tau_left - tau_right| for the chosen pair
  double score = 0.0;          // diff + alpha * min(n_left, n_right) / n
  std::size_t left_count = 0;
  std::size_t right_count = 0;
};

struct TreeNode {
  Box box;
  std::vector<double> tau;  // rescaled tau per pair on the node's members
  std::size_t count = 0;
  std::size_t depth = 0;
  std::optional<Split> split;
  std::size_t left = 0;   // child node indices, valid when split is set
  std::size_t right = 0;

  bool is_leaf() const { return !split.has_value(); }
};

// Preorder node storage; nodes[0] is the root.
struct DependenceTree {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<PairIndex> pairs;
  TreeConfig config;
  std::vector<TreeNode> nodes;

  std::vector<std::size_t> leaf_indices() const;
  std::size_t leaf_count() const { return leaf_indices().size(); }
  std::size_t depth() const;
};

// Smallest allowed side of a split for a sample of size n.
std::size_t min_side(const TreeConfig& config, std::size_t n);

// Exhaustive search over pairs, conditioning coordinates and observed
// thresholds on the given rows. Ties go to the smallest (pair, coordinate,
// threshold). Empty when no split leaves both sides with min_side members.
std::optional<Split> best_split(const Sample& s, std::span<const std::size_t> rows,
                                const TreeConfig& config, unsigned threads = 1);
std::optional<Split> best_split(const Sample& s, const Box& box, const TreeConfig& config,
                                unsigned threads = 1);

DependenceTree cut_ckt(const Sample& s, const TreeConfig& config, unsigned threads = 1);

// Leaf boxes in preorder; flagged disjoint.
BoxFamily leaves(const DependenceTree& tree);

// At every internal node, tau(left) >= tau(node) >= tau(right) for the split pair.
bool is_binary_search_in_tau(const DependenceTree& tree);

}  // namespace ckt
