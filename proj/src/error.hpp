#pragma once

#include <stdexcept>
#include <string>

namespace fairgf {

// Coarse class of a failure; maps onto process exit codes and C API codes.
enum class ErrorClass { validation = 1, io = 2, internal = 3 };

// Specific failure conditions named by the library contracts.
enum class ErrorKind {
  self_loop,
  duplicate_edge,
  index_out_of_range,
  isolated_node,
  not_symmetric,
  eigen_failure,
  dimension_mismatch,
  sensitive_not_binary,
  invalid_tau,
  all_frequencies_cut,
  empty_mask,
  empty_group,
  empty_positive_group,
  missing_column,
  unknown_node_id,
  too_few_nodes,
  invalid_config,
  parse_error,
  io_error,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  ErrorClass cls() const noexcept {
    switch (kind_) {
      case ErrorKind::io_error:
        return ErrorClass::io;
      case ErrorKind::eigen_failure:
        return ErrorClass::internal;
      default:
        return ErrorClass::validation;
    }
  }

private:
  ErrorKind kind_;
};

}  // namespace fairgf
