#pragma once

#include <stdexcept>
#include <string>

namespace amub {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- finite fields ---
struct NotPrime : Error {
    explicit NotPrime(unsigned long long p)
        : Error("not a prime: " + std::to_string(p)) {}
};
struct OrderTooLarge : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct ZeroInverse : Error {
    ZeroInverse() : Error("multiplicative inverse of zero") {}
};

// --- designs ---
struct NotPrimePower : Error {
    explicit NotPrimePower(unsigned long long q)
        : Error("not a prime power: " + std::to_string(q)) {}
};
struct TooFewSquares : Error {
    using Error::Error;
};
struct SingleClass : Error {
    SingleClass() : Error("design has fewer than two parallel classes") {}
};

// --- planner ---
struct NotComposite : Error {
    explicit NotComposite(unsigned long long d)
        : Error("dimension is not composite: " + std::to_string(d)) {}
};
struct GapTooLarge : Error {
    using Error::Error;
};
struct NoRealHadamard : Error {
    using Error::Error;
};

// --- trims ---
struct OffsetsInvalid : Error {
    using Error::Error;
};

// --- basis assembly / analysis ---
struct MissingRealHadamard : Error {
    explicit MissingRealHadamard(std::size_t order)
        : Error("no real Hadamard matrix available for order " + std::to_string(order)) {}
};
struct EmptyDesign : Error {
    EmptyDesign() : Error("design has no parallel classes") {}
};
struct TooFewBases : Error {
    TooFewBases() : Error("spectrum needs at least two bases") {}
};
struct RouteUnsupported : Error {
    using Error::Error;
};
struct MismatchedProvenance : Error {
    using Error::Error;
};

}  // namespace amub
