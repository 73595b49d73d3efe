#pragma once

#include <stdexcept>
#include <string>

namespace molcs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |z| (or an analytically continued argument) outside the convergence disc.
struct DomainError : Error {
    using Error::Error;
};

struct InvalidLabel : Error {
    using Error::Error;
};

struct SpaceMismatch : Error {
    using Error::Error;
};

// Half-integer-shifting operator requested on an integer-only tower.
struct TowerMismatch : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

// Moebius denominator vanished or a Riccati trajectory ran off to infinity.
struct PoleError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace molcs
