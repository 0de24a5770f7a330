#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "ckt/sample.hpp"

namespace ckt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lower = -kInf;
  double upper = kInf;
  bool lower_open = true;
  bool upper_open = true;

  bool contains(double v) const {
    const bool above = lower_open ? v > lower : v >= lower;
    const bool below = upper_open ? v < upper : v <= upper;
    return above && below;
  }
  bool empty() const { return lower > upper || (lower == upper && (lower_open || upper_open)); }
  bool operator==(const Interval&) const = default;
};

// Categorical constraint: the value must equal one of the integer codes.
struct CodeSet {
  std::vector<std::int64_t> codes;  // sorted, unique

  bool contains(double v) const;
  bool operator==(const CodeSet&) const = default;
};

using Constraint = std::variant<Interval, CodeSet>;

// Axis-aligned product of per-coordinate constraints over the q conditioning
// columns.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Constraint> constraints);

  static Box universal(std::size_t q);

  std::size_t dim() const { return c_.size(); }
  const Constraint& operator[](std::size_t j) const { return c_[j]; }
  const std::vector<Constraint>& constraints() const { return c_; }

  bool contains(std::span<const double> point) const;
  bool contains(const Sample& s, std::size_t row) const;

  // Intersections with (-inf, t] and (t, +inf) in coordinate j.
  Box split_lower(std::size_t j, double t) const;
  Box split_upper(std::size_t j, double t) const;

  // Exact set disjointness: some coordinate has disjoint constraints.
  bool disjoint_from(const Box& other) const;

  bool operator==(const Box&) const = default;

 private:
  std::vector<Constraint> c_;
};

Constraint intersect(const Constraint& a, const Constraint& b);
bool disjoint(const Constraint& a, const Constraint& b);

class BoxFamily {
 public:
  BoxFamily() = default;
  // Disjointness is checked exactly from the box geometry.
  explicit BoxFamily(std::vector<Box> boxes);
  // Disjointness declared by the caller (e.g. tree leaves).
  BoxFamily(std::vector<Box> boxes, bool disjoint);

  std::size_t m() const { return boxes_.size(); }
  const Box& operator[](std::size_t k) const { return boxes_[k]; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool disjoint() const { return disjoint_; }

 private:
  std::vector<Box> boxes_;
  bool disjoint_ = false;
};

// Row indices of the sample lying in the box, in increasing order.
std::vector<std::size_t> members(const Sample& s, const Box& box);
// (1/n) #{i : X_iJ in A_k and A_l}.
double overlap_fraction(const Sample& s, const Box& a, const Box& b);

// Per-box member lists plus a row -> first containing box lookup.
struct Membership {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<std::size_t>> rows;  // rows[k]: members of box k
  std::vector<std::uint8_t> inside;            // inside[i * m + k]
  std::vector<std::ptrdiff_t> first_box;       // smallest k containing row i, or -1

  bool in(std::size_t row, std::size_t k) const { return inside[row * m + k] != 0; }
};

Membership membership(const Sample& s, const BoxFamily& family);

}  // namespace ckt
