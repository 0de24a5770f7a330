#include "ckt/sample.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ckt/error.hpp"

namespace ckt {

Sample::Sample(std::vector<std::vector<double>> conditioned,
               std::vector<std::vector<double>> conditioning,
               std::vector<std::string> conditioned_names,
               std::vector<std::string> conditioning_names,
               std::vector<std::size_t> conditioned_indices,
               std::vector<std::size_t> conditioning_indices)
    : x_(std::move(conditioned)),
      z_(std::move(conditioning)),
      x_names_(std::move(conditioned_names)),
      z_names_(std::move(conditioning_names)),
      x_index_(std::move(conditioned_indices)),
      z_index_(std::move(conditioning_indices)) {
  if (x_.size() < 2)
    throw Error(ErrorKind::invalid_input,
                "at least 2 conditioned columns required, got " + std::to_string(x_.size()));
  if (z_.empty()) throw Error(ErrorKind::invalid_input, "at least 1 conditioning column required");
  n_ = x_.front().size();
  for (const auto* group : {&x_, &z_})
    for (const auto& col : *group)
      if (col.size() != n_) throw Error(ErrorKind::invalid_input, "columns differ in length");
  if (n_ < 2)
    throw Error(ErrorKind::invalid_input, "at least 2 rows required, got " + std::to_string(n_));

  for (std::size_t a = 0; a < x_.size(); ++a)
    for (std::size_t i = 0; i < n_; ++i)
      if (!std::isfinite(x_[a][i]))
        throw Error(ErrorKind::invalid_input, "non-finite value at row " + std::to_string(i) +
                                                  ", conditioned column " + std::to_string(a));
  for (std::size_t j = 0; j < z_.size(); ++j)
    for (std::size_t i = 0; i < n_; ++i)
      if (std::isnan(z_[j][i]))
        throw Error(ErrorKind::invalid_input, "missing value at row " + std::to_string(i) +
                                                  ", conditioning column " + std::to_string(j));

  if (x_names_.empty())
    for (std::size_t a = 0; a < x_.size(); ++a) x_names_.push_back("X" + std::to_string(a + 1));
  if (z_names_.empty())
    for (std::size_t j = 0; j < z_.size(); ++j)
      z_names_.push_back("X" + std::to_string(x_.size() + j + 1));
  if (x_index_.empty())
    for (std::size_t a = 0; a < x_.size(); ++a) x_index_.push_back(a);
  if (z_index_.empty())
    for (std::size_t j = 0; j < z_.size(); ++j) z_index_.push_back(x_.size() + j);

  if (x_names_.size() != x_.size() || z_names_.size() != z_.size() ||
      x_index_.size() != x_.size() || z_index_.size() != z_.size())
    throw Error(ErrorKind::invalid_input, "column metadata does not match column count");
  std::set<std::size_t> seen;
  for (auto i : x_index_) seen.insert(i);
  for (auto j : z_index_)
    if (!seen.insert(j).second)
      throw Error(ErrorKind::invalid_input, "column " + std::to_string(j) + " used twice");
  if (seen.size() != x_index_.size() + z_index_.size())
    throw Error(ErrorKind::invalid_input, "duplicate conditioned column");
}

Sample::Sample(Unchecked, const Sample& like, std::vector<std::vector<double>> x,
               std::vector<std::vector<double>> z)
    : n_(x.empty() ? 0 : x.front().size()),
      x_(std::move(x)),
      z_(std::move(z)),
      x_names_(like.x_names_),
      z_names_(like.z_names_),
      x_index_(like.x_index_),
      z_index_(like.z_index_) {}

std::size_t Sample::conditioning_position(const std::string& name) const {
  auto it = std::find(z_names_.begin(), z_names_.end(), name);
  return static_cast<std::size_t>(it - z_names_.begin());
}

Sample Sample::subset(std::span<const std::size_t> rows) const {
  return recombine(rows, rows);
}

Sample Sample::recombine(std::span<const std::size_t> conditioned_rows,
                         std::span<const std::size_t> conditioning_rows) const {
  if (conditioned_rows.size() != conditioning_rows.size())
    throw Error(ErrorKind::invalid_input, "row lists differ in length");
  auto gather = [](const std::vector<std::vector<double>>& cols, std::span<const std::size_t> rows) {
    std::vector<std::vector<double>> out(cols.size(), std::vector<double>(rows.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t r = 0; r < rows.size(); ++r) out[c][r] = cols[c].at(rows[r]);
    return out;
  };
  return Sample(Unchecked{}, *this, gather(x_, conditioned_rows), gather(z_, conditioning_rows));
}

}  // namespace ckt
