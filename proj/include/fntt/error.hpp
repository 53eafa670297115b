#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fntt {

enum class Errc {
  modulus_too_small,
  not_invertible,
  moduli_not_coprime,
  index_too_large,
  verification_failed,
  invalid_length,
  length_mismatch,
  modulus_mismatch,
  bound_exceeded,
  headroom_violation,
  input_out_of_range,
  normalization_wrap,
  bad_input,
  parse_error,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::modulus_too_small: return "ModulusTooSmall";
    case Errc::not_invertible: return "NotInvertible";
    case Errc::moduli_not_coprime: return "ModuliNotCoprime";
    case Errc::index_too_large: return "IndexTooLarge";
    case Errc::verification_failed: return "VerificationFailed";
    case Errc::invalid_length: return "InvalidLength";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::modulus_mismatch: return "ModulusMismatch";
    case Errc::bound_exceeded: return "BoundExceeded";
    case Errc::headroom_violation: return "HeadroomViolation";
    case Errc::input_out_of_range: return "InputOutOfRange";
    case Errc::normalization_wrap: return "NormalizationWrap";
    case Errc::bad_input: return "BadInput";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a stable
/// code. `index` is set when the failure is tied to a position, e.g. the
/// first non-invertible spectral bin of a filter.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  Errc code_;
  std::optional<std::size_t> index_;
};

}  // namespace fntt
