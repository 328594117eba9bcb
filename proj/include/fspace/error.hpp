#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fspace {

/// Domain error categories. The CLI maps every one of these to exit code 1;
/// the HTTP layer maps a few of them to specific status codes.
enum class Errc {
  syntax,
  invalid_argument,
  precondition,
  exhausted,
  overflow,
  not_deep_enough,
  straddling_seed,
  empty_box,
  not_normal_form,
  repair_impossible,
  search_failure,
  illegal_move,
  wrong_turn,
  not_found,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parse failure; `position` is the 0-based byte offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(Errc::syntax, what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace fspace
