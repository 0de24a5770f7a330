#include "ckt/error.hpp"

namespace ckt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::insufficient_subsample: return "insufficient_subsample";
    case ErrorKind::degenerate_box: return "degenerate_box";
    case ErrorKind::singular_matrix: return "singular_matrix";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::coverage: return "coverage";
  }
  return "unknown";
}

namespace {

std::string insufficient_message(std::optional<std::size_t> box, std::size_t count) {
  std::string msg = "insufficient subsample";
  if (box) msg += " in box " + std::to_string(*box);
  msg += ": " + std::to_string(count) + " member(s), at least 2 required";
  return msg;
}

}  // namespace

InsufficientSubsample::InsufficientSubsample(std::optional<std::size_t> box, std::size_t count)
    : Error(ErrorKind::insufficient_subsample, insufficient_message(box, count)),
      box_(box),
      count_(count) {}

}  // namespace ckt
