#pragma once

#include <vector>

#include "smag/spectral.hpp"

namespace smag {

struct SimParams;
struct Trajectory;

// One row of the diagnostics stream. H and arnold_margin are meaningful only
// for d = 3 (serialized as null otherwise); diss_b backs the resistive
// balance residual and is never serialized.
struct DiagnosticsRecord {
    double t = 0.0;
    double M = 0.0;                // magnetic energy 1/2 ||b||_L2^2
    double H = 0.0;                // magnetic helicity (d = 3)
    double u_Ha2 = 0.0;            // ||u||^2_{Hdot^alpha}
    double u_Hd2p1 = 0.0;          // ||u||_{Hdot^{d/2+1}}
    double b_Hs = 0.0;
    double b_H1 = 0.0;
    double b_Lp = 0.0;
    double energy_residual = 0.0;  // balance residual of the latest interval
    double cont_integral = 0.0;    // running integral of u_Hd2p1
    double arnold_margin = 0.0;    // M - |H|/2 (d = 3)
    double diss_b = 0.0;           // ||b||^2_{Hdot^beta}, in-memory only
};

// H = integral of A . b with the zero-mean Coulomb-gauge potential
// A(k) = i k x b(k) / |k|^2; for curl eigenfields (curl b = lambda b),
// H = ||b||^2 / lambda.
double magnetic_helicity(const SpectralVectorField& b);

struct ResidualSeries {
    std::vector<double> per_interval;
    double max_abs = 0.0;
    double mean_abs = 0.0;
};

// (M_b - M_a)/(t_b - t_a) + (D_a + D_b)/2 with D = nu u_Ha2 + eta diss_b:
// the single balance form shared by the online recorder and the offline
// series, so the two agree bitwise.
double interval_residual(const DiagnosticsRecord& a, const DiagnosticsRecord& b, double nu,
                         double eta);

// Per-interval residual of dM/dt + nu ||u||^2_{Hdot^alpha} +
// eta ||b||^2_{Hdot^beta}, with the dissipation taken at the interval
// midpoint via the trapezoid average of the stored sample values.
ResidualSeries energy_balance_residual(const Trajectory& traj, const SimParams& params);

enum class ContinuationVerdict { Finite, GrowingFast };

struct ContinuationReport {
    double integral = 0.0;
    ContinuationVerdict verdict = ContinuationVerdict::Finite;
};

// Trapezoid accumulation of ||u||_{Hdot^{d/2+1}} over the sample times;
// GrowingFast when the last time-quartile carries more than half the total
// and its increments are still accelerating.
ContinuationReport continuation_monitor(const Trajectory& traj);

}  // namespace smag
