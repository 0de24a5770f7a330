#include "ckt/covariance.hpp"

#include <cmath>

#include "ckt/error.hpp"
#include "ckt/parallel.hpp"

namespace ckt {

namespace {

__extension__ typedef __int128 wide;

// Row counts scattered into a length-n vector (zero outside the box).
std::vector<std::int64_t> dense_counts(const Sample& s, PairIndex pair,
                                       const std::vector<std::size_t>& rows) {
  std::vector<std::int64_t> out(s.n(), 0);
  const auto c = box_row_counts(s, pair, rows);
  for (std::size_t r = 0; r < rows.size(); ++r) out[rows[r]] = c[r];
  return out;
}

void require_nonempty(const std::vector<std::size_t>& rows, std::size_t k) {
  if (rows.empty())
    throw Error(ErrorKind::degenerate_box, "box " + std::to_string(k) + " has no members");
}

double n3(double n) { return n * n * n; }

}  // namespace

std::vector<std::int64_t> box_row_counts(const Sample& s, PairIndex pair,
                                         const std::vector<std::size_t>& rows) {
  std::vector<double> xa(rows.size()), xb(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    xa[r] = s.x(rows[r], pair.a);
    xb[r] = s.x(rows[r], pair.b);
  }
  return concordance_row_counts(xa, xb);
}

double i_hat(const Sample& s, PairIndex ab, PairIndex ab2, const Box& box_k, const Box& box_l) {
  const auto rk = members(s, box_k);
  const auto rl = members(s, box_l);
  require_nonempty(rk, 0);
  require_nonempty(rl, 1);
  const auto ck = dense_counts(s, ab, rk);
  const auto cl = dense_counts(s, ab2, rl);
  wide sum = 0;
  for (auto i : rk)
    if (box_l.contains(s, i)) sum += static_cast<wide>(ck[i]) * cl[i];
  const double n = static_cast<double>(s.n());
  const double pk = static_cast<double>(rk.size()) / n;
  const double pl = static_cast<double>(rl.size()) / n;
  return static_cast<double>(static_cast<long double>(sum) / 4.0L) / (n3(n) * (pk * pl));
}

double i_hat(const Sample& s, PairIndex ab, PairIndex ab2, const Box& box_k) {
  return i_hat(s, ab, ab2, box_k, box_k);
}

double j_hat(const Sample& s, PairIndex ab, const Box& box_k, const Box& box_l) {
  const auto rk = members(s, box_k);
  require_nonempty(rk, 0);
  const auto ck = box_row_counts(s, ab, rk);
  std::int64_t sum = 0;
  for (std::size_t r = 0; r < rk.size(); ++r)
    if (box_l.contains(s, rk[r])) sum += ck[r];
  const double n = static_cast<double>(s.n());
  const double pk = static_cast<double>(rk.size()) / n;
  return (static_cast<double>(sum) / 2.0) / (n * n * pk);
}

CovarianceEstimate delta_hat(const Sample& s, const BoxFamily& family,
                             CovariancePath path, unsigned threads) {
  return delta_hat(s, family, tau_matrix(s, family, false, threads), path, threads);
}

CovarianceEstimate delta_hat(const Sample& s, const BoxFamily& family, const TauEstimates& tau,
                             CovariancePath path, unsigned threads) {
  if (s.n() < 3) throw Error(ErrorKind::invalid_input, "covariance estimation needs n >= 3");
  const Membership mb = membership(s, family);
  const std::size_t m = mb.m;
  const std::size_t n = s.n();
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < m; ++k) require_nonempty(mb.rows[k], k);

  CovarianceEstimate est;
  est.n = n;
  est.m = m;
  est.pairs = all_pairs(s.p());
  est.disjoint_path = path == CovariancePath::disjoint ||
                      (path == CovariancePath::automatic && family.disjoint());
  const std::size_t P = est.pairs.size();
  const std::size_t dim = P * m;
  if (tau.tau.size() != dim || tau.m != m)
    throw Error(ErrorKind::invalid_input, "tau estimates do not match the box family");

  est.p_hat.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    est.p_hat[k] = static_cast<double>(mb.rows[k].size()) / dn;

  // Intersections A_k and A_l as row lists, and their probabilities.
  std::vector<std::vector<std::size_t>> both(m * m);
  est.p_overlap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = k; l < m; ++l) {
      auto& rows = both[k * m + l];
      if (l == k) {
        rows = mb.rows[k];
      } else {
        for (auto i : mb.rows[k])
          if (mb.in(i, l)) rows.push_back(i);
      }
      both[l * m + k] = rows;
      const double v = static_cast<double>(rows.size()) / dn;
      est.p_overlap(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v;
      est.p_overlap(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = v;
    }
  }

  std::vector<std::vector<std::int64_t>> counts(dim);
  parallel_for(dim, threads, [&](std::size_t cell) {
    counts[cell] = dense_counts(s, est.pairs[cell / m], mb.rows[cell % m]);
  });

  est.d_hat.assign(dim, 0.0);
  est.j_hat.assign(dim * m, 0.0);
  for (std::size_t cell = 0; cell < dim; ++cell) {
    const std::size_t k = cell % m;
    const auto& c = counts[cell];
    std::int64_t total = 0;
    for (auto i : mb.rows[k]) total += c[i];
    est.d_hat[cell] = (static_cast<double>(total) / 2.0) / (dn * (dn - 1.0));
    for (std::size_t l = 0; l < m; ++l) {
      std::int64_t sum = 0;
      for (auto i : both[k * m + l]) sum += c[i];
      est.j_hat[cell * m + l] = (static_cast<double>(sum) / 2.0) / (dn * dn * est.p_hat[k]);
    }
  }

  const auto D = static_cast<Eigen::Index>(dim);
  est.i_hat = Eigen::MatrixXd::Zero(D, D);
  est.delta = Eigen::MatrixXd::Zero(D, D);

  // Upper triangle in (pair, box) order, mirrored afterwards.
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = r; c < dim; ++c)
      if (!est.disjoint_path || r % m == c % m) work.emplace_back(r, c);

  parallel_for(work.size(), threads, [&](std::size_t w) {
    const auto [r, c] = work[w];
    const std::size_t k = r % m, l = c % m;
    const auto& cr = counts[r];
    const auto& cc = counts[c];
    wide sum = 0;
    for (auto i : both[k * m + l]) sum += static_cast<wide>(cr[i]) * cc[i];
    const double pk = est.p_hat[k], pl = est.p_hat[l];
    const double ival =
        static_cast<double>(static_cast<long double>(sum) / 4.0L) / (n3(dn) * (pk * pl));
    est.i_hat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = ival;

    double value;
    if (est.disjoint_path) {
      // 1 + tau uses the first variant, 4 D (n - 1) / (n p^2), which shares the
      // n^3 normalization of I. With the rescaled tau the difference carries an
      // O(1 / (n p^2)) downward bias.
      const double scale = 4.0 * (dn - 1.0) / (dn * pk * pk);
      value = 16.0 * (4.0 * ival / (pk * pk) -
                      (scale * est.d_hat[r]) * (scale * est.d_hat[c]) / (4.0 * pk));
    } else {
      const double dr = est.d_hat[r], dc = est.d_hat[c];
      const double pkl = est.p_overlap(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      const double j_r = est.j_hat[r * m + l];  // J_{ab,k,l}
      const double j_c = est.j_hat[c * m + k];  // J_{a'b',l,k}
      value = 64.0 * (ival / (pk * pl) + dr * dc * pkl / (pk * pk * pk * pl * pl * pl) -
                      dc * j_r / (pk * pl * pl * pl) - dr * j_c / (pl * pk * pk * pk));
    }
    est.delta(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
  });

  for (Eigen::Index r = 0; r < D; ++r)
    for (Eigen::Index c = r + 1; c < D; ++c) {
      est.delta(c, r) = est.delta(r, c);
      est.i_hat(c, r) = est.i_hat(r, c);
    }

  if (!est.delta.allFinite())
    throw Error(ErrorKind::numerical, "covariance estimate contains non-finite entries");
  return est;
}

}  // namespace ckt
