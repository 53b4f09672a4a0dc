#pragma once

#include <array>
#include <cstdint>
#include <variant>

#include "smag/spectral.hpp"

namespace smag {

//--- norms -------------------------------------------------------------

enum class NormKind { Lp, Sobolev, HomSobolev, LinfPhysical };

struct NormRequest {
    NormKind kind;
    double param = 0.0;

    static NormRequest lp(double p) { return {NormKind::Lp, p}; }
    static NormRequest sobolev(double s) { return {NormKind::Sobolev, s}; }
    static NormRequest hom_sobolev(double s) { return {NormKind::HomSobolev, s}; }
    static NormRequest linf() { return {NormKind::LinfPhysical, 0.0}; }
};

// Sobolev kinds are exact spectral sums; Lp uses rectangle-rule quadrature on
// the uniform grid (spectrally accurate for band-limited fields); LinfPhysical
// is the grid max. Vector fields use the pointwise Euclidean magnitude.
double norm(const SpectralScalar& f, const NormRequest& req);
double norm(const SpectralVectorField& f, const NormRequest& req);

// ratio = ||f||_Linf / (1 + ||f||_{H^{d/2}_dot} * log(e + ||f||_{H^s_dot})),
// finite for zero-mean f != 0; requires s > d/2.
double log_sobolev_check(const SpectralScalar& f, double s);

//--- initial conditions ------------------------------------------------

// b(x) = amplitude * polarization * sin(k.x); requires k.polarization = 0.
struct SingleMode {
    std::array<int, 3> k{0, 0, 0};
    double amplitude = 1.0;
    std::array<double, 3> polarization{0.0, 0.0, 0.0};
};

// b = (A sin x3 + C cos x2, B sin x1 + A cos x3, C sin x2 + B cos x1), d = 3.
struct ABC {
    double A = 1.0, B = 1.0, C = 1.0;
};

// b = (-sin x2, sin 2x1), d = 2.
struct OrszagTangLike {};

// Independent per-mode complex Gaussians on the shell k_min <= |k| <= k_max,
// Hermitian-symmetrized, Leray-projected, rescaled so ||b||_{H^s} hits
// target_norm. Coefficients are a pure function of (seed, k, component), so
// the same seed yields the same realization on any grid that contains the
// shell.
struct RandomBandLimited {
    int k_min = 1;
    int k_max = 4;
    std::uint64_t seed = 0;
    double target_norm = 1.0;
    double s = 1.0;
};

using InitialCondition = std::variant<SingleMode, ABC, OrszagTangLike, RandomBandLimited>;

// Always real, zero-mean, divergence-free; deterministic for a fixed seed.
SpectralVectorField make_initial(const InitialCondition& ic, const Grid& grid);

}  // namespace smag
