#pragma once

#include <stdexcept>
#include <string>

namespace mpemba {

// Invalid user input: parameters, config keys, malformed files.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Lattice too short for the requested horizon (boundary reflections could reach the emitter).
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical tolerance could not be met (quadrature, propagator, Volterra step).
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Resonance lies outside the band |omega0 - omega_c| < 2J; golden rule has no propagating mode.
class ResonanceOutsideBandError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace mpemba
