#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conered {

enum class ErrorCode {
  invalid_argument,
  io,
  parse,
  dimension_mismatch,
  zero_column,
  degenerate_vector,
  max_iterations,
  rank_too_large,
  bad_rank,
  iteration_limit,
  numerical_breakdown,
  degenerate_diagonal,
  insufficient_columns,
  duplicate_match,
  zero_noise,
  too_many_columns,
  k_smaller_than_r,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status family.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed input file. `line` is 1-based for text formats; `offset` is the
/// byte offset for binary formats.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset)
      : Error(ErrorCode::parse, what), line_(line), offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

}  // namespace conered
