#include "ckt/concordance.hpp"

#include <algorithm>
#include <numeric>

#include "ckt/error.hpp"

namespace ckt {

namespace {

template <class T>
std::int64_t tied_pairs_in_sorted(const std::vector<T>& v) {
  std::int64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i < v.size() && v[i] == v[i - 1]) {
      ++run;
    } else {
      total += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Sorted by (x, y); counts pairs tied in x and tied in both. Then merge sorts
// the y sequence counting inversions (strictly greater before smaller).
template <class T>
std::int64_t knight(std::span<const T> x, std::span<const T> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(ErrorKind::invalid_input, "column lengths differ");
  if (n < 2) return 0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  std::int64_t tie_x = 0, tie_xy = 0;
  {
    std::size_t run_x = 1, run_xy = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const bool same_x = i < n && x[order[i]] == x[order[i - 1]];
      const bool same_xy = same_x && y[order[i]] == y[order[i - 1]];
      if (same_x) {
        ++run_x;
      } else {
        tie_x += static_cast<std::int64_t>(run_x) * static_cast<std::int64_t>(run_x - 1) / 2;
        run_x = 1;
      }
      if (same_xy) {
        ++run_xy;
      } else {
        tie_xy += static_cast<std::int64_t>(run_xy) * static_cast<std::int64_t>(run_xy - 1) / 2;
        run_xy = 1;
      }
    }
  }

  std::vector<T> a(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = y[order[i]];

  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (a[j] < a[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buf[k++] = a[j++];
        } else {
          buf[k++] = a[i++];
        }
      }
      while (i < mid) buf[k++] = a[i++];
      while (j < hi) buf[k++] = a[j++];
    }
    std::swap(a, buf);
  }
  const std::int64_t tie_y = tied_pairs_in_sorted(a);
  const std::int64_t total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  return total - tie_x - tie_y + tie_xy - 2 * swaps;
}

}  // namespace

PairCounts count_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::invalid_input, "column lengths differ");
  PairCounts c;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if ((dx < 0 && dy < 0) || (dx > 0 && dy > 0)) ++c.concordant;
      else if ((dx < 0 && dy > 0) || (dx > 0 && dy < 0)) ++c.discordant;
    }
  }
  return c;
}

std::int64_t concordance_balance(std::span<const double> x, std::span<const double> y) {
  return knight(x, y);
}

std::int64_t concordance_balance(std::span<const std::int32_t> x, std::span<const std::int32_t> y) {
  return knight(x, y);
}

PairCounts fast_pair_counts(std::span<const double> x, std::span<const double> y) {
  const std::int64_t s = knight(x, y);
  // Untied pairs = total - tie_x - tie_y + tie_xy = C + D.
  std::vector<double> sx(x.begin(), x.end()), sy(y.begin(), y.end());
  std::sort(sx.begin(), sx.end());
  std::sort(sy.begin(), sy.end());
  std::vector<std::pair<double, double>> xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xy[i] = {x[i], y[i]};
  std::sort(xy.begin(), xy.end());
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  const std::int64_t untied =
      n * (n - 1) / 2 - tied_pairs_in_sorted(sx) - tied_pairs_in_sorted(sy) + tied_pairs_in_sorted(xy);
  return {(untied + s) / 2, (untied - s) / 2};
}

double kendall_tau_a(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) throw Error(ErrorKind::insufficient_subsample, "need at least 2 points");
  return 2.0 * static_cast<double>(concordance_balance(x, y)) / (n * (n - 1.0));
}

std::vector<std::int32_t> dense_ranks(std::span<const double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::int32_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = static_cast<std::int32_t>(std::lower_bound(sorted.begin(), sorted.end(), v[i]) -
                                       sorted.begin());
  return out;
}

std::vector<std::int64_t> concordance_row_counts(std::span<const double> x,
                                                 std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(ErrorKind::invalid_input, "column lengths differ");
  std::vector<std::int64_t> out(n, 0);
  if (n < 2) return out;

  const auto ry = dense_ranks(y);
  const std::size_t levels =
      static_cast<std::size_t>(*std::max_element(ry.begin(), ry.end())) + 1;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  // Fenwick tree over y ranks.
  std::vector<std::int64_t> tree(levels + 1, 0);
  auto add = [&](std::size_t r) {
    for (std::size_t i = r + 1; i <= levels; i += i & (~i + 1)) ++tree[i];
  };
  auto prefix = [&](std::size_t r) {  // count of inserted ranks < r
    std::int64_t s = 0;
    for (std::size_t i = r; i > 0; i -= i & (~i + 1)) s += tree[i];
    return s;
  };

  // Below in both coordinates: sweep increasing x, query each x-tie group
  // before inserting it.
  for (std::size_t g = 0; g < n;) {
    std::size_t h = g;
    while (h < n && x[order[h]] == x[order[g]]) ++h;
    for (std::size_t t = g; t < h; ++t) out[order[t]] += prefix(static_cast<std::size_t>(ry[order[t]]));
    for (std::size_t t = g; t < h; ++t) add(static_cast<std::size_t>(ry[order[t]]));
    g = h;
  }

  // Above in both: sweep decreasing x, count inserted ranks > r.
  std::fill(tree.begin(), tree.end(), 0);
  std::int64_t inserted = 0;
  for (std::size_t g = n; g > 0;) {
    std::size_t h = g;
    while (h > 0 && x[order[h - 1]] == x[order[g - 1]]) --h;
    for (std::size_t t = h; t < g; ++t)
      out[order[t]] += inserted - prefix(static_cast<std::size_t>(ry[order[t]]) + 1);
    for (std::size_t t = h; t < g; ++t) add(static_cast<std::size_t>(ry[order[t]]));
    inserted += static_cast<std::int64_t>(g - h);
    g = h;
  }
  return out;
}

}  // namespace ckt
