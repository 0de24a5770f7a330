#include "ckt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ckt/concordance.hpp"
#include "ckt/error.hpp"
#include "ckt/parallel.hpp"

namespace ckt {

std::vector<std::size_t> DependenceTree::leaf_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].is_leaf()) out.push_back(i);
  return out;
}

std::size_t DependenceTree::depth() const {
  std::size_t d = 0;
  for (const auto& node : nodes) d = std::max(d, node.depth);
  return d;
}

std::size_t min_side(const TreeConfig& config, std::size_t n) {
  const double want = std::ceil(config.min_size * static_cast<double>(n) - 1e-9);
  return std::max<std::size_t>(2, want > 0 ? static_cast<std::size_t>(want) : 0);
}

namespace {

void check_config(const TreeConfig& c) {
  if (!(c.min_cut >= 0.0)) throw Error(ErrorKind::invalid_input, "min_cut must be >= 0");
  if (!(c.min_size >= 0.0 && c.min_size <= 1.0))
    throw Error(ErrorKind::invalid_input, "min_size must lie in [0, 1]");
  if (!(c.alpha >= 0.0)) throw Error(ErrorKind::invalid_input, "alpha must be >= 0");
}

inline int sgn(std::int32_t v) { return (v > 0) - (v < 0); }

double tau_of(std::int64_t balance, std::size_t count) {
  const double N = static_cast<double>(count);
  return 2.0 * static_cast<double>(balance) / (N * (N - 1.0));
}

// Best threshold for one (pair, coordinate). Rows are moved one at a time
// from the right side to the left in increasing order of the coordinate;
// both concordance balances are updated exactly.
std::optional<Split> scan(const Sample& s, std::span<const std::size_t> rows,
                          const std::vector<std::int32_t>& ra, const std::vector<std::int32_t>& rb,
                          std::size_t pair, std::size_t coord, std::size_t side, double alpha) {
  const std::size_t N = rows.size();
  const auto z = s.conditioning(coord);
  std::vector<std::size_t> order(rows.begin(), rows.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t u, std::size_t v) { return z[u] < z[v]; });
  std::vector<std::int32_t> a(N), b(N);
  for (std::size_t t = 0; t < N; ++t) {
    a[t] = ra[order[t]];
    b[t] = rb[order[t]];
  }

  std::int64_t right = concordance_balance(std::span<const std::int32_t>(a), std::span<const std::int32_t>(b));
  std::int64_t left = 0;
  const double n_total = static_cast<double>(s.n());

  std::optional<Split> best;
  std::size_t pos = 0;
  while (pos < N) {
    std::size_t end = pos;
    const double value = z[order[pos]];
    while (end < N && z[order[end]] == value) ++end;
    if (end == N) break;  // right side would be empty
    for (std::size_t q = pos; q < end; ++q) {
      std::int64_t below = 0, above = 0;
      for (std::size_t r = 0; r < q; ++r) below += sgn(a[q] - a[r]) * sgn(b[q] - b[r]);
      for (std::size_t r = q + 1; r < N; ++r) above += sgn(a[q] - a[r]) * sgn(b[q] - b[r]);
      left += below;
      right -= above;
    }
    pos = end;
    const std::size_t nl = pos, nr = N - pos;
    if (nl < side || nr < side) continue;
    const double diff = std::abs(tau_of(left, nl) - tau_of(right, nr));
    const double score = diff + alpha * static_cast<double>(std::min(nl, nr)) / n_total;
    if (!best || score > best->score) best = Split{pair, coord, value, diff, score, nl, nr};
  }
  return best;
}

std::vector<std::vector<std::int32_t>> conditioned_ranks(const Sample& s) {
  std::vector<std::vector<std::int32_t>> out(s.p());
  for (std::size_t a = 0; a < s.p(); ++a) out[a] = dense_ranks(s.conditioned(a));
  return out;
}

std::optional<Split> search(const Sample& s, std::span<const std::size_t> rows,
                            const TreeConfig& config,
                            const std::vector<std::vector<std::int32_t>>& ranks, unsigned threads) {
  const std::size_t side = min_side(config, s.n());
  if (rows.size() < 2 * side) return std::nullopt;
  const auto pairs = all_pairs(s.p());
  const std::size_t tasks = pairs.size() * s.q();
  std::vector<std::optional<Split>> found(tasks);
  parallel_for(tasks, threads, [&](std::size_t t) {
    const std::size_t pi = t / s.q(), k = t % s.q();
    found[t] = scan(s, rows, ranks[pairs[pi].a], ranks[pairs[pi].b], pi, k, side, config.alpha);
  });
  std::optional<Split> best;
  for (const auto& f : found)
    if (f && (!best || f->score > best->score)) best = f;
  return best;
}

std::vector<double> node_taus(const Sample& s, std::span<const std::size_t> rows,
                              const std::vector<std::vector<std::int32_t>>& ranks) {
  const auto pairs = all_pairs(s.p());
  std::vector<double> out(pairs.size());
  std::vector<std::int32_t> a(rows.size()), b(rows.size());
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    for (std::size_t t = 0; t < rows.size(); ++t) {
      a[t] = ranks[pairs[pi].a][rows[t]];
      b[t] = ranks[pairs[pi].b][rows[t]];
    }
    out[pi] = tau_of(concordance_balance(std::span<const std::int32_t>(a), std::span<const std::int32_t>(b)),
                     rows.size());
  }
  return out;
}

struct Builder {
  const Sample& s;
  const TreeConfig& config;
  const std::vector<std::vector<std::int32_t>>& ranks;
  unsigned threads;
  DependenceTree& tree;

  std::size_t grow(const Box& box, std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t id = tree.nodes.size();
    tree.nodes.push_back({});
    TreeNode node;
    node.box = box;
    node.count = rows.size();
    node.depth = depth;
    node.tau = node_taus(s, rows, ranks);

    std::optional<Split> split;
    if (depth < config.max_depth) split = search(s, rows, config, ranks, threads);
    if (split && split->diff >= config.min_cut) {
      node.split = split;
      std::vector<std::size_t> lo, hi;
      const auto z = s.conditioning(split->coordinate);
      for (auto i : rows) (z[i] <= split->threshold ? lo : hi).push_back(i);
      tree.nodes[id] = node;
      const Box lbox = box.split_lower(split->coordinate, split->threshold);
      const Box rbox = box.split_upper(split->coordinate, split->threshold);
      const std::size_t l = grow(lbox, std::move(lo), depth + 1);
      const std::size_t r = grow(rbox, std::move(hi), depth + 1);
      tree.nodes[id].left = l;
      tree.nodes[id].right = r;
    } else {
      tree.nodes[id] = node;
    }
    return id;
  }
};

}  // namespace

std::optional<Split> best_split(const Sample& s, std::span<const std::size_t> rows,
                                const TreeConfig& config, unsigned threads) {
  check_config(config);
  return search(s, rows, config, conditioned_ranks(s), threads);
}

std::optional<Split> best_split(const Sample& s, const Box& box, const TreeConfig& config,
                                unsigned threads) {
  const auto rows = members(s, box);
  return best_split(s, rows, config, threads);
}

DependenceTree cut_ckt(const Sample& s, const TreeConfig& config, unsigned threads) {
  check_config(config);
  DependenceTree tree;
  tree.n = s.n();
  tree.p = s.p();
  tree.pairs = all_pairs(s.p());
  tree.config = config;
  const auto ranks = conditioned_ranks(s);
  std::vector<std::size_t> rows(s.n());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Builder builder{s, config, ranks, threads, tree};
  builder.grow(Box::universal(s.q()), std::move(rows), 0);
  return tree;
}

BoxFamily leaves(const DependenceTree& tree) {
  std::vector<Box> boxes;
  for (auto i : tree.leaf_indices()) boxes.push_back(tree.nodes[i].box);
  return BoxFamily(std::move(boxes), true);
}

bool is_binary_search_in_tau(const DependenceTree& tree) {
  for (const auto& node : tree.nodes) {
    if (node.is_leaf()) continue;
    const std::size_t pi = node.split->pair;
    const double here = node.tau[pi];
    const double lo = tree.nodes[node.left].tau[pi];
    const double hi = tree.nodes[node.right].tau[pi];
    if (!(lo >= here && here >= hi)) return false;
  }
  return true;
}

}  // namespace ckt
