#pragma once

// Hand-rolled random inputs for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "ckt/box.hpp"
#include "ckt/sample.hpp"

namespace gen {

using Engine = std::mt19937_64;

struct SampleShape {
  std::size_t n_min = 4;
  std::size_t n_max = 200;
  std::size_t p_max = 3;
  std::size_t q_max = 2;
  bool ties = false;   // values on a coarse grid so ties are common
};

ckt::Sample sample(Engine& e, const SampleShape& shape);

// Random interval box: per coordinate, bounds drawn among observed values or
// left infinite, random openness.
ckt::Box interval_box(Engine& e, const ckt::Sample& s);

// A partition of the real line in conditioning coordinate j into m pieces, cut
// at distinct observed values.
ckt::BoxFamily partition(Engine& e, const ckt::Sample& s, std::size_t m, std::size_t j = 0);

// m random (possibly overlapping) boxes, each with at least `min_members`.
ckt::BoxFamily overlapping_family(Engine& e, const ckt::Sample& s, std::size_t m,
                                  std::size_t min_members);

std::vector<double> column(Engine& e, std::size_t n, bool ties);

}  // namespace gen
