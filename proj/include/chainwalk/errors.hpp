#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chainwalk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct IndexError : Error {
    using Error::Error;
};

struct ScaleError : Error {
    using Error::Error;
};

struct NotHermitianError : Error {
    using Error::Error;
};

struct NotUnitaryError : Error {
    using Error::Error;
};

struct DeterminantError : Error {
    using Error::Error;
};

// Thrown by project() when a qubit state has weight outside the single-excitation sector.
struct SectorLeakError : Error {
    SectorLeakError(const std::string &msg, double leaked) : Error(msg), leaked_norm(leaked) {}
    double leaked_norm = 0.0;
};

// Thrown by the subspace backend when a circuit contains a gate it cannot contract.
struct SectorError : Error {
    SectorError(const std::string &msg, std::size_t gate) : Error(msg), gate_index(gate) {}
    std::size_t gate_index = 0;
};

struct DistributionError : Error {
    using Error::Error;
};

struct UnsupportedGateError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace chainwalk
