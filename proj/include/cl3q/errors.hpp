#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cl3q {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field construction rejects p that is not an odd prime or e < 1.
struct NotOddPrime : Error {
    using Error::Error;
};
struct InvalidDegree : Error {
    using Error::Error;
};
struct DivisionByZero : Error {
    using Error::Error;
};

// Raised when a requested q exceeds the configured working bound.
struct CapacityExceeded : Error {
    using Error::Error;
};

// A computed combinatorial quantity disagrees with its forced value.
// This always indicates a bug (or a corrupted document), never bad user input.
struct StructureViolation : Error {
    using Error::Error;
};

struct EmptySet : Error {
    using Error::Error;
};

// A line-set size is not compatible with any integer class parameter.
struct SizeMismatch : Error {
    using Error::Error;
};

struct DomainNotClosed : Error {
    using Error::Error;
};
struct ClosureBudgetExceeded : Error {
    using Error::Error;
};

// A line-class document fails semantic validation: wrong schema version,
// incompatible field block, unknown or duplicate line tuple.
struct DocumentInvalid : Error {
    using Error::Error;
};

// Derivation step applied to a class that does not contain the lines to be
// removed, or already contains lines to be added. Carries witnesses.
struct PreconditionViolated : Error {
    std::vector<std::int32_t> missing_required;    // should be in the class, are not
    std::vector<std::int32_t> colliding_forbidden; // should be absent, are present
    std::size_t step_index = 0;

    PreconditionViolated(const std::string& what,
                         std::vector<std::int32_t> missing,
                         std::vector<std::int32_t> colliding,
                         std::size_t step)
        : Error(what),
          missing_required(std::move(missing)),
          colliding_forbidden(std::move(colliding)),
          step_index(step) {}
};

} // namespace cl3q
