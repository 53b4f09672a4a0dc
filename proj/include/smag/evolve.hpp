#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smag/diagnostics.hpp"
#include "smag/fields.hpp"
#include "smag/spectral.hpp"

namespace smag {

struct SimParams {
    int d = 2;
    int n = 32;
    double alpha = 1.0;
    double beta = 1.0;
    double nu = 1.0;
    double eta = 1.0;
    double s = 1.0;            // exponent of the tracked H^s diagnostic
    double t_end = 1.0;
    double dt = 0.0;           // fixed-step mode when > 0
    double cfl_number = 0.0;   // adaptive mode when dt == 0
    int sample_every = 1;      // steps between diagnostics records
    std::uint64_t seed = 0;
    InitialCondition ic{SingleMode{{0, 1, 0}, 1.0, {1.0, 0.0, 0.0}}};
    int reproject_every = 1;   // steps between divergence re-projections
    bool store_fields = false; // retain sampled fields in the trajectory
    double lp_exponent = 2.0;  // p of the b_Lp diagnostic
};

void validate(const SimParams& params);

enum class RunStatus { Completed, BlowupSuspected, Diverged };

struct SampledPath {
    std::vector<double> times;
    std::vector<SpectralVectorField> fields;
};

struct Trajectory {
    std::vector<DiagnosticsRecord> records;
    std::optional<SampledPath> path;
    SpectralVectorField final_state;
    double final_time = 0.0;
    RunStatus status = RunStatus::Completed;
};

// N(b) = Div(b tensor u - u tensor b) with u the quasi-static velocity,
// dealiased; excludes the linear -eta Lambda^{2 beta} b term, which the
// stepper applies exactly through its integrating factor. Mean-free and
// divergence-free to machine precision.
SpectralVectorField rhs(const SpectralVectorField& b, const SimParams& params);

// Integrating-factor RK4 in the variable e^{t eta |k|^{2 beta}} b(k): exact
// for N = 0, classical RK4 when eta = 0.
SpectralVectorField step_ifrk4(const SpectralVectorField& b, double dt, const SimParams& params);

// Advances make_initial(params.ic) to t_end, re-projecting every
// reproject_every steps and recording diagnostics every sample_every steps
// (plus the initial and final states). Deterministic in serial mode.
Trajectory run(const SimParams& params);

// Same loop from a caller-supplied initial field (used by experiments).
Trajectory run(const SpectralVectorField& b0, const SimParams& params);

// Everything the loop needs to continue a run bitwise from mid-schedule:
// the clock, the step counter (which fixes the sampling and re-projection
// phases), the blow-up reference norm, and the last emitted record (which
// seeds the residual and continuation accumulators).
struct ResumePoint {
    double t = 0.0;
    long step = 0;
    double initial_hs = 0.0;
    DiagnosticsRecord last_record;
};

// Runs the normal schedule but stops after max_steps steps; the cut lands
// mid-schedule, so no unscheduled final record is emitted. rp captures the
// state needed to continue; with max_steps past the horizon it simply
// completes and rp describes the final state.
Trajectory run_partial(const SpectralVectorField& b0, const SimParams& params, long max_steps,
                       ResumePoint& rp);

// Continues a run from a resume point to t_end under the same parameters.
// Records start with the first sample after the cut (the seed record was
// already emitted by the interrupted run); concatenating the two record
// streams reproduces the uninterrupted run bitwise.
Trajectory run_resumed(const SpectralVectorField& b0, const ResumePoint& from,
                       const SimParams& params, ResumePoint& rp);

// cfl_number * (2 pi / n) / max(||u||_inf, 1e-8), capped at 0.1.
double cfl_dt(const SpectralVectorField& b, const SimParams& params);

}  // namespace smag
