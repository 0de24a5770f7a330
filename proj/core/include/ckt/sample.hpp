#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ckt {

enum class Role { conditioned, conditioning, ignored };

struct ColumnRole {
  std::string name;
  Role role = Role::ignored;
};

using ColumnRoles = std::vector<ColumnRole>;

// n observations of p conditioned and q conditioning variables. Only the used
// columns are kept, column-major, in file order within each group.
class Sample {
 public:
  Sample() = default;

  // Columns are given as one vector per variable; all must share the same
  // length. `conditioned_indices` / `conditioning_indices` are the original
  // (0-based) file positions; left empty they default to 0..p-1 and p..p+q-1.
  Sample(std::vector<std::vector<double>> conditioned,
         std::vector<std::vector<double>> conditioning,
         std::vector<std::string> conditioned_names = {},
         std::vector<std::string> conditioning_names = {},
         std::vector<std::size_t> conditioned_indices = {},
         std::vector<std::size_t> conditioning_indices = {});

  std::size_t n() const { return n_; }
  std::size_t p() const { return x_.size(); }
  std::size_t q() const { return z_.size(); }
  std::size_t d() const { return x_.size() + z_.size(); }

  std::span<const double> conditioned(std::size_t a) const { return x_[a]; }
  std::span<const double> conditioning(std::size_t j) const { return z_[j]; }
  double x(std::size_t row, std::size_t a) const { return x_[a][row]; }
  double z(std::size_t row, std::size_t j) const { return z_[j][row]; }

  const std::vector<std::string>& conditioned_names() const { return x_names_; }
  const std::vector<std::string>& conditioning_names() const { return z_names_; }
  const std::vector<std::size_t>& conditioned_indices() const { return x_index_; }
  const std::vector<std::size_t>& conditioning_indices() const { return z_index_; }

  // Position of a conditioning column by name, or q() if absent.
  std::size_t conditioning_position(const std::string& name) const;

  // Rows in the given order (duplicates allowed). The result may have fewer
  // than two rows; it is not re-validated.
  Sample subset(std::span<const std::size_t> rows) const;
  // Conditioned part from one row list, conditioning part from another.
  Sample recombine(std::span<const std::size_t> conditioned_rows,
                   std::span<const std::size_t> conditioning_rows) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<double>> x_;
  std::vector<std::vector<double>> z_;
  std::vector<std::string> x_names_;
  std::vector<std::string> z_names_;
  std::vector<std::size_t> x_index_;
  std::vector<std::size_t> z_index_;

  struct Unchecked {};
  Sample(Unchecked, const Sample& like, std::vector<std::vector<double>> x,
         std::vector<std::vector<double>> z);
};

}  // namespace ckt
