#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ckt {

enum class ErrorKind {
  invalid_input,
  insufficient_subsample,
  degenerate_box,
  singular_matrix,
  numerical,
  coverage,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// A box holds fewer than two observations, so no Kendall's tau exists for it.
class InsufficientSubsample : public Error {
 public:
  InsufficientSubsample(std::optional<std::size_t> box, std::size_t count);

  std::optional<std::size_t> box() const noexcept { return box_; }
  std::size_t count() const noexcept { return count_; }

 private:
  std::optional<std::size_t> box_;
  std::size_t count_;
};

}  // namespace ckt
