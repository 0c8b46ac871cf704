#include "opideal/errors.hpp"

namespace opideal {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::NotHermitian: return "not_hermitian";
    case ErrorCode::NotPositiveDefinite: return "not_positive_definite";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::NotInGroup: return "not_in_group";
    case ErrorCode::OutsideDomain: return "outside_domain";
    case ErrorCode::DegenerateElement: return "degenerate_element";
    case ErrorCode::InvalidGroup: return "invalid_group";
    case ErrorCode::Schema: return "schema";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<double> quantity)
    : std::runtime_error(message), code_(code), quantity_(quantity)
{
}

} // namespace opideal
