#include "ckt/box.hpp"

#include <algorithm>
#include <cmath>

#include "ckt/error.hpp"

namespace ckt {

bool CodeSet::contains(double v) const {
  if (!std::isfinite(v) || v != std::floor(v)) return false;
  return std::binary_search(codes.begin(), codes.end(), static_cast<std::int64_t>(v));
}

Box::Box(std::vector<Constraint> constraints) : c_(std::move(constraints)) {
  for (auto& c : c_) {
    if (auto* iv = std::get_if<Interval>(&c)) {
      if (std::isnan(iv->lower) || std::isnan(iv->upper) || iv->lower > iv->upper)
        throw Error(ErrorKind::invalid_input, "box interval with lower > upper");
    } else {
      auto& cs = std::get<CodeSet>(c);
      std::sort(cs.codes.begin(), cs.codes.end());
      cs.codes.erase(std::unique(cs.codes.begin(), cs.codes.end()), cs.codes.end());
    }
  }
}

Box Box::universal(std::size_t q) { return Box(std::vector<Constraint>(q, Interval{})); }

bool Box::contains(std::span<const double> point) const {
  for (std::size_t j = 0; j < c_.size(); ++j) {
    const double v = point[j];
    const bool ok = std::visit([v](const auto& c) { return c.contains(v); }, c_[j]);
    if (!ok) return false;
  }
  return true;
}

bool Box::contains(const Sample& s, std::size_t row) const {
  for (std::size_t j = 0; j < c_.size(); ++j) {
    const double v = s.z(row, j);
    const bool ok = std::visit([v](const auto& c) { return c.contains(v); }, c_[j]);
    if (!ok) return false;
  }
  return true;
}

Constraint intersect(const Constraint& a, const Constraint& b) {
  if (auto* ia = std::get_if<Interval>(&a)) {
    if (auto* ib = std::get_if<Interval>(&b)) {
      Interval r = *ia;
      if (ib->lower > r.lower || (ib->lower == r.lower && ib->lower_open)) {
        r.lower = ib->lower;
        r.lower_open = ib->lower_open;
      }
      if (ib->upper < r.upper || (ib->upper == r.upper && ib->upper_open)) {
        r.upper = ib->upper;
        r.upper_open = ib->upper_open;
      }
      return r;
    }
    CodeSet r;
    for (auto code : std::get<CodeSet>(b).codes)
      if (ia->contains(static_cast<double>(code))) r.codes.push_back(code);
    return r;
  }
  const auto& ca = std::get<CodeSet>(a);
  CodeSet r;
  for (auto code : ca.codes)
    if (std::visit([code](const auto& c) { return c.contains(static_cast<double>(code)); }, b))
      r.codes.push_back(code);
  return r;
}

bool disjoint(const Constraint& a, const Constraint& b) {
  const Constraint c = intersect(a, b);
  if (auto* iv = std::get_if<Interval>(&c)) return iv->empty();
  return std::get<CodeSet>(c).codes.empty();
}

Box Box::split_lower(std::size_t j, double t) const {
  Box out = *this;
  out.c_[j] = intersect(c_[j], Interval{-kInf, t, true, false});
  return out;
}

Box Box::split_upper(std::size_t j, double t) const {
  Box out = *this;
  out.c_[j] = intersect(c_[j], Interval{t, kInf, true, true});
  return out;
}

bool Box::disjoint_from(const Box& other) const {
  if (other.dim() != dim()) throw Error(ErrorKind::invalid_input, "box dimensions differ");
  for (std::size_t j = 0; j < c_.size(); ++j)
    if (disjoint(c_[j], other.c_[j])) return true;
  return false;
}

BoxFamily::BoxFamily(std::vector<Box> boxes) : boxes_(std::move(boxes)), disjoint_(true) {
  for (std::size_t k = 0; k < boxes_.size() && disjoint_; ++k)
    for (std::size_t l = k + 1; l < boxes_.size(); ++l)
      if (!boxes_[k].disjoint_from(boxes_[l])) {
        disjoint_ = false;
        break;
      }
}

BoxFamily::BoxFamily(std::vector<Box> boxes, bool disjoint)
    : boxes_(std::move(boxes)), disjoint_(disjoint) {}

std::vector<std::size_t> members(const Sample& s, const Box& box) {
  if (box.dim() != s.q())
    throw Error(ErrorKind::invalid_input, "box dimension " + std::to_string(box.dim()) +
                                              " does not match " + std::to_string(s.q()) +
                                              " conditioning columns");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.n(); ++i)
    if (box.contains(s, i)) out.push_back(i);
  return out;
}

double overlap_fraction(const Sample& s, const Box& a, const Box& b) {
  if (a.dim() != s.q() || b.dim() != s.q())
    throw Error(ErrorKind::invalid_input, "box dimension does not match sample");
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.n(); ++i)
    if (a.contains(s, i) && b.contains(s, i)) ++count;
  return static_cast<double>(count) / static_cast<double>(s.n());
}

Membership membership(const Sample& s, const BoxFamily& family) {
  Membership mb;
  mb.n = s.n();
  mb.m = family.m();
  mb.rows.resize(mb.m);
  mb.inside.assign(mb.n * mb.m, 0);
  mb.first_box.assign(mb.n, -1);
  for (std::size_t k = 0; k < mb.m; ++k) {
    if (family[k].dim() != s.q())
      throw Error(ErrorKind::invalid_input, "box " + std::to_string(k) +
                                                " dimension does not match sample");
  }
  for (std::size_t i = 0; i < mb.n; ++i) {
    for (std::size_t k = 0; k < mb.m; ++k) {
      if (family[k].contains(s, i)) {
        mb.inside[i * mb.m + k] = 1;
        mb.rows[k].push_back(i);
        if (mb.first_box[i] < 0) mb.first_box[i] = static_cast<std::ptrdiff_t>(k);
      }
    }
  }
  return mb;
}

}  // namespace ckt
