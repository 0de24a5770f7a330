#include "generators.hpp"

#include <algorithm>

#include "ckt/error.hpp"

namespace gen {

std::vector<double> column(Engine& e, std::size_t n, bool ties) {
  std::vector<double> v(n);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> grid(0, 5);
  for (auto& x : v) x = ties ? static_cast<double>(grid(e)) : normal(e);
  return v;
}

ckt::Sample sample(Engine& e, const SampleShape& shape) {
  std::uniform_int_distribution<std::size_t> nd(shape.n_min, shape.n_max);
  std::uniform_int_distribution<std::size_t> pd(2, shape.p_max);
  std::uniform_int_distribution<std::size_t> qd(1, shape.q_max);
  const std::size_t n = nd(e), p = pd(e), q = qd(e);
  std::vector<std::vector<double>> x, z;
  for (std::size_t a = 0; a < p; ++a) x.push_back(column(e, n, shape.ties));
  // a dependent column so taus are not all near zero
  std::normal_distribution<double> noise;
  for (std::size_t i = 0; i < n; ++i) x[1][i] = x[0][i] + (shape.ties ? std::round(noise(e)) : noise(e));
  for (std::size_t j = 0; j < q; ++j) z.push_back(column(e, n, shape.ties));
  return ckt::Sample(std::move(x), std::move(z));
}

ckt::Box interval_box(Engine& e, const ckt::Sample& s) {
  std::vector<ckt::Constraint> c;
  std::uniform_int_distribution<std::size_t> row(0, s.n() - 1);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t j = 0; j < s.q(); ++j) {
    ckt::Interval iv;
    double a = coin(e) ? s.z(row(e), j) : -ckt::kInf;
    double b = coin(e) ? s.z(row(e), j) : ckt::kInf;
    if (a > b) std::swap(a, b);
    iv.lower = a;
    iv.upper = b;
    iv.lower_open = std::isinf(a) || coin(e);
    iv.upper_open = std::isinf(b) || coin(e);
    c.emplace_back(iv);
  }
  return ckt::Box(std::move(c));
}

ckt::BoxFamily partition(Engine& e, const ckt::Sample& s, std::size_t m, std::size_t j) {
  auto values = std::vector<double>(s.conditioning(j).begin(), s.conditioning(j).end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() < m) throw ckt::Error(ckt::ErrorKind::invalid_input, "too few distinct values");
  std::shuffle(values.begin(), values.end() - 1, e);
  std::vector<double> cuts(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<ckt::Box> boxes;
  double lo = -ckt::kInf;
  for (std::size_t k = 0; k < m; ++k) {
    const double hi = k + 1 < m ? cuts[k] : ckt::kInf;
    std::vector<ckt::Constraint> c(s.q(), ckt::Interval{});
    c[j] = ckt::Interval{lo, hi, true, std::isinf(hi)};
    boxes.emplace_back(std::move(c));
    lo = hi;
  }
  return ckt::BoxFamily(std::move(boxes));
}

ckt::BoxFamily overlapping_family(Engine& e, const ckt::Sample& s, std::size_t m,
                                  std::size_t min_members) {
  std::vector<ckt::Box> boxes;
  while (boxes.size() < m) {
    ckt::Box b = interval_box(e, s);
    std::size_t count = 0;
    for (std::size_t i = 0; i < s.n(); ++i) count += b.contains(s, i);
    if (count >= min_members) boxes.push_back(std::move(b));
  }
  return ckt::BoxFamily(std::move(boxes));
}

}  // namespace gen
