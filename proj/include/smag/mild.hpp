#pragma once

#include <vector>

#include "smag/evolve.hpp"
#include "smag/spectral.hpp"

namespace smag {

// Diagonal action of the fractional heat semigroup e^{-t Lambda^{2 beta}}.
struct SemigroupOp {
    double beta = 1.0;
    Grid grid;
};

// Per-mode multiplication by e^{-t |k|^{2 beta}}; t = 0 is the identity.
SpectralVectorField semigroup_apply(const SemigroupOp& op, double t, const SpectralVectorField& f);

// ||Lambda^gamma G(t) f||_{L^q} * t^{gamma/(2 beta) + (d/(2 beta))(1/p - 1/q)}
// / ||f||_{L^p}, the quantity the heat-smoothing estimates bound uniformly
// in t for zero-mean f.
double smoothing_ratio(const SemigroupOp& op, double t, const SpectralVectorField& f, double gamma,
                       double p, double q);

// int_0^t G(t-s) F(s) ds at t = t_grid.back(), with F piecewise linear
// between the sampled values (constant on [0, t_grid[0]] when the grid
// starts after 0). Exponential moments are integrated in closed form per
// mode, so the result is exact for forcing linear in time on the grid.
SpectralVectorField duhamel_integral(const SemigroupOp& op, const std::vector<double>& t_grid,
                                     const std::vector<SpectralVectorField>& forcing);

// Geometric grid on (0, T]: `points` samples, first at T/1024, last at T.
// The weighted norms concentrate difficulty near t = 0.
std::vector<double> picard_time_grid(double t_end, int points = 64);

struct PicardConfig {
    std::vector<double> t_grid;
    int max_iters = 50;
    double tol_rel = 1e-8;
    // scaling-critical exponents: 1/q = 1/p - (2 beta - 1)/(3d),
    // 1/r = 2/q - (2 alpha - 1)/d, sigma = (d/(2 beta))(1/p - 1/q)
    double p = 2.0;
    double q = 2.0;
    double r = 2.0;
    double sigma = 0.0;
};

struct PicardResult {
    int iterations = 0;
    std::vector<double> distances;  // F_T distance between successive iterates
    SampledPath trajectory;
    double contraction_ratio = 0.0;  // last ratio of successive distances
    bool converged = false;
};

// Fixed-point sweep of b <- G(t) b0 + int_0^t G(t-s) N(b(s)) ds on the
// config's time grid; requires the resistive normalization eta = 1. Throws
// NonContractive after three consecutive non-contracting sweeps.
PicardResult picard_solve(const SpectralVectorField& b0, const PicardConfig& cfg,
                          const SimParams& params);

// sup over samples of t^sigma ||b(t)||_{L^q}; nt_norm drops the weight.
double ft_norm(const SampledPath& path, double sigma, double q);
double ft_norm(const Trajectory& traj, double sigma, double q);
double nt_norm(const SampledPath& path, double p);
double nt_norm(const Trajectory& traj, double p);

}  // namespace smag
