#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace opideal {

enum class ErrorCode {
    InvalidInput,
    DimensionMismatch,
    NotHermitian,
    NotPositiveDefinite,
    Singular,
    NotInGroup,
    OutsideDomain,
    DegenerateElement,
    InvalidGroup,
    Schema,
};

const char* to_string(ErrorCode code) noexcept;

/// Error raised by every operation of the library on bad input.
///
/// `quantity()` carries the offending number when there is one (the
/// smallest eigenvalue of a non positive-definite matrix, a condition
/// number, a residual), so front ends can report it without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<double> quantity = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<double> quantity() const noexcept { return quantity_; }

private:
    ErrorCode code_;
    std::optional<double> quantity_;
};

} // namespace opideal
