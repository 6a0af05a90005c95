#pragma once

#include <stdexcept>
#include <string>

namespace topochain {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input that violates a documented precondition (non-Hermitian matrix,
// parameters outside the stated domain, beta < 0, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Spectrum gapless where a gapped one is required (winding, finite-T phase).
struct GaplessError : Error {
    using Error::Error;
};

// k-mesh too coarse: an unwrap increment or link overlap left the trusted
// range. Carries a suggestion to raise N_k.
struct MeshError : Error {
    using Error::Error;
};

// arg() requested of a complex number with near-vanishing modulus; the phase
// would be numerically meaningless.
struct IllConditionedArg : Error {
    using Error::Error;
};

// Config parsing / file IO problems (CLI layer).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace topochain
