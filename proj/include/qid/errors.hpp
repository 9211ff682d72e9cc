#pragma once

#include <stdexcept>
#include <string>

namespace qid {

/// Requested quadrature tolerance could not be certified within the
/// subdivision budget.
struct ToleranceNotReached : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A provably real quantity came back with an imaginary residue above the
/// accepted threshold. Signals a quadrature bug, not a model property.
struct RealityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Phase degree outside the supported factorial budget (or outside the
/// range a particular numerical path can certify).
struct UnsupportedN : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A density that is non-negative by construction evaluated below the
/// numerical floor.
struct NegativeDensity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rejection-sampling envelope was exceeded by an evaluated density value.
struct EnvelopeViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A grid node of a supposedly nonvanishing function is exactly zero.
struct ZeroCrossing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adjacent raw phases differ by >= pi; the continuous argument cannot be
/// tracked on this grid.
struct UnresolvablePhaseJump : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of the operation.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace qid
