#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "smag/evolve.hpp"

namespace smag {

// Zoom covariance: the base run at resolution n * lambda is compared against
// the run of the rescaled data lambda^{alpha+beta-1} b0(lambda x) at
// resolution n over the shrunken horizon t_end * lambda^{-2 beta}.
struct ScalingExperiment {
    int lambda = 2;
};

// Weighted decay series t^theta ||b(t)||_{L^p} with p from the critical
// family and theta = (d/(2 beta))(1/s_low - 1/p); s_low must satisfy
// 1 <= s_low and 1/p < 1/s_low < 2 beta/d + 2/q - 1/p.
struct DecayProbeExperiment {
    double s_low = 1.0;
};

// Log-Sobolev ratio over the lacunary family sum_{1<=|k|<=N} |k|^{-d/2} e^{ikx}
// for each shell bound N, evaluated on a grid of size 4N.
struct LogSobolevSweepExperiment {
    std::vector<int> shells{8, 16, 32, 64};
    double s = 2.0;
};

// Observed validity horizon vs data size: for each amplitude A the base data
// is scaled and evolved over [0, t_end / A^2] until ||b||_{H^s} first doubles
// (runs that never double are censored at their horizon, so pick t_end
// comfortably above the amplitude-1 doubling time); the log-log slope of
// that time against amplitude is reported. With alpha = 0 and eta = 0 the
// exact symmetry b -> A b(A^2 t) forces slope -2.
struct AmplitudeSweepExperiment {
    std::vector<double> amplitudes{2.0, 4.0, 8.0, 16.0};
};

// Picard fixed point vs time stepper at a few nodes of the mild time grid.
struct PicardCrossExperiment {
    int compare_points = 4;
};

using ExperimentKind = std::variant<ScalingExperiment, DecayProbeExperiment,
                                    LogSobolevSweepExperiment, AmplitudeSweepExperiment,
                                    PicardCrossExperiment>;

struct ExperimentSpec {
    ExperimentKind kind;
    SimParams base;
};

struct ExperimentReport {
    std::string kind;
    std::vector<double> abscissae;  // sample times, shell bounds, or amplitudes
    std::vector<double> series;     // tracked quantity at each abscissa
    double max_value = 0.0;
    // Amplitude sweep only; NaN otherwise.
    double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    // Decay probe only; NaN otherwise.
    double theta = std::numeric_limits<double>::quiet_NaN();
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace smag
