#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tqb {

enum class Errc {
  degenerate_domain,
  domain_too_coarse,
  invalid_order,
  theta_degenerate,
  unknown_model,
  missing_parameter,
  unknown_parameter,
  invalid_boundary_plan,
  degenerate_boundary_pair,
  singular_matrix,
  dimension_mismatch,
  syntax,
  unknown_identifier,
  malformed_sum,
  evaluation_domain,
  zero_denominator,
  insufficient_peaks,
  invalid_argument,
  config,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by the expression parser; offset is the byte position in the source.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t offset, const std::string& what)
      : Error(code, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace tqb
