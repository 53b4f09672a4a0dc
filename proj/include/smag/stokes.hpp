#pragma once

#include "smag/spectral.hpp"

namespace smag {

struct StokesConfig {
    double alpha = 1.0;
    double nu = 1.0;
};

// Quasi-static velocity: u(k) = nu^{-1} |k|^{-2 alpha} P (Div(b tensor b))(k)
// for k != 0, u(0) = 0. Input must be real, zero-mean, divergence-free.
SpectralVectorField solve_velocity(const SpectralVectorField& b, const StokesConfig& cfg);

// Same solve given an already-computed tensor divergence (zero-mean); shared
// by the stepper so its velocity agrees bitwise with solve_velocity.
SpectralVectorField velocity_from_tensor_divergence(const SpectralVectorField& t,
                                                    const StokesConfig& cfg);

// Zero-mean total pressure with grad(p) = (I - P) Div(b tensor b); together
// with u it closes nu Lambda^{2 alpha} u + grad(p) = Div(b tensor b).
SpectralScalar recover_pressure(const SpectralVectorField& b, const StokesConfig& cfg);

}  // namespace smag
