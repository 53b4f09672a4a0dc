#pragma once

#include <optional>
#include <string>
#include <vector>

namespace smag {

// Local well-posedness case split: CaseI covers alpha > d/2 with s >= 1,
// CaseII covers 0 <= alpha <= d/2 with s > d/2 + 1 - alpha. Boundary marks
// inputs within 1e-12 of a deciding threshold without sitting on it exactly.
enum class LwpCase { None, CaseI, CaseII, Boundary };

// Sign of the zoom power alpha + beta - 1 - d/p: positive is Sub, zero
// (exactly) is Critical, negative is Super; Boundary as above.
enum class ScalingClass { Sub, Critical, Super, Boundary };

struct RegimeReport {
    int d = 2;
    double alpha = 0.0;
    double beta = 0.0;
    double s = 0.0;
    double eta = 0.0;

    LwpCase lwp_case = LwpCase::None;
    double alpha_star = 0.0;               // alpha in CaseI, 2 alpha - d/2 in CaseII, else NaN
    bool low_regularity_velocity = false;  // CaseII with alpha_star <= 0
    bool global_nonresistive = false;      // alpha >= d/2 + 1 and s >= 1

    bool mild_admissible = false;
    std::vector<std::string> reasons;  // failed or boundary conditions, empty when admissible

    // critical Lebesgue family: p = d/(alpha+beta-1), 1/q = 1/p - (2 beta - 1)/(3d),
    // 1/r = 2/q - (2 alpha - 1)/d, sigma = (d/(2 beta))(1/p - 1/q); NaN when the
    // defining denominator is not positive
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double sigma = 0.0;
    // open window for the reciprocal 1/s of the auxiliary decay exponent:
    // 1/p < 1/s < 2 beta/d + 2/q - 1/p
    double theta_window_lo = 0.0;
    double theta_window_hi = 0.0;

    ScalingClass scaling_class = ScalingClass::Critical;
};

// Pure exponent arithmetic: inadmissibility is data, never an error. All
// threshold comparisons run in exact rational arithmetic on the binary
// values of the inputs; a strict inequality missed by 1e-12 or less is
// reported as a boundary instead of being silently classified.
RegimeReport classify(int d, double alpha, double beta, double s, double eta,
                      std::optional<double> p_opt = std::nullopt);

// Advisory existence horizon (c_cal * norm)^{-2} from the local theory.
double local_time_hint(double b0_hs_norm, double c_cal = 1.0);

}  // namespace smag
