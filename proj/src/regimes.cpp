#include "smag/regimes.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>

#include "smag/errors.hpp"

namespace smag {

namespace {

using Rat = boost::multiprecision::cpp_rational;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Exact three-way comparison with a 1e-12 uncertainty band: values off a
// threshold by that little (but not exactly on it) cannot be trusted to a
// strict inequality and are classified as Band.
enum class Cmp { Below, Band, Equal, Above };

Cmp compare_band(const Rat& lhs, const Rat& rhs) {
    static const Rat band(1e-12);
    if (lhs == rhs) return Cmp::Equal;
    const Rat diff = lhs > rhs ? Rat(lhs - rhs) : Rat(rhs - lhs);
    if (diff <= band) return Cmp::Band;
    return lhs < rhs ? Cmp::Below : Cmp::Above;
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace

RegimeReport classify(int d, double alpha, double beta, double s, double eta,
                      std::optional<double> p_opt) {
    if (d < 2) throw ConfigError("classify: the dimension must be at least 2");
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(s) || !std::isfinite(eta))
        throw ConfigError("classify: parameters must be finite");
    if (p_opt && !(*p_opt > 0.0 && std::isfinite(*p_opt)))
        throw ConfigError("classify: a supplied integrability exponent must be finite and positive");

    RegimeReport rep;
    rep.d = d;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.s = s;
    rep.eta = eta;
    rep.alpha_star = kNaN;

    const Rat a(alpha), b(beta), sob(s), dd(d);

    //--- local well-posedness case split ------------------------------------
    const Cmp a_half = compare_band(a, dd / 2);
    if (a_half == Cmp::Band) {
        rep.lwp_case = LwpCase::Boundary;
    } else if (a_half == Cmp::Above) {
        const Cmp s_one = compare_band(sob, Rat(1));
        if (s_one == Cmp::Band)
            rep.lwp_case = LwpCase::Boundary;
        else if (s_one == Cmp::Below)
            rep.lwp_case = LwpCase::None;
        else {
            rep.lwp_case = LwpCase::CaseI;
            rep.alpha_star = alpha;
        }
    } else {
        const Cmp s_reg = compare_band(sob, dd / 2 + 1 - a);
        if (s_reg == Cmp::Band)
            rep.lwp_case = LwpCase::Boundary;
        else if (s_reg != Cmp::Above)
            rep.lwp_case = LwpCase::None;  // needs s strictly above d/2 + 1 - alpha
        else {
            const Cmp a_zero = compare_band(a, Rat(0));
            if (a_zero == Cmp::Band)
                rep.lwp_case = LwpCase::Boundary;
            else if (a_zero == Cmp::Below)
                rep.lwp_case = LwpCase::None;
            else {
                rep.lwp_case = LwpCase::CaseII;
                rep.alpha_star = to_double(2 * a - dd / 2);
                rep.low_regularity_velocity = rep.alpha_star <= 0.0;
            }
        }
    }

    rep.global_nonresistive = a >= dd / 2 + 1 && sob >= 1;

    //--- mild admissibility ---------------------------------------------------
    bool admissible = true;
    bool boundary = false;
    const auto fail = [&](const char* why) {
        admissible = false;
        rep.reasons.emplace_back(why);
    };
    const auto band = [&](const char* why) {
        boundary = true;
        rep.reasons.emplace_back(std::string("boundary: ") + why);
    };

    const Cmp c_lo = compare_band(a, Rat(1) / 2);
    if (c_lo == Cmp::Band)
        band("alpha sits at 1/2");
    else if (c_lo != Cmp::Above)
        fail("alpha must exceed 1/2");

    const Cmp c_hi = compare_band(a, (dd + 1) / 2);
    if (c_hi == Cmp::Band)
        band("alpha sits at (d+1)/2");
    else if (c_hi != Cmp::Below)
        fail("alpha must stay below (d+1)/2");

    const Cmp c_beta = compare_band(b, Rat(1) / 2);
    if (c_beta == Cmp::Band)
        band("beta sits at 1/2");
    else if (c_beta != Cmp::Above)
        fail("beta must exceed 1/2");

    const Cmp c_sum = compare_band(a + b, dd + 1);
    if (c_sum == Cmp::Band)
        band("alpha + beta sits at d + 1");
    else if (c_sum != Cmp::Below)
        fail("alpha + beta must stay below d + 1");

    const Cmp c_trigger = compare_band(a, (dd + 2) / 4);
    if (c_trigger == Cmp::Above || c_trigger == Cmp::Band) {
        const Cmp c_growth = compare_band(3 * a + b, (3 * dd + 4) / 2);
        if (c_growth == Cmp::Band)
            band("3 alpha + beta sits at (3d+4)/2");
        else if (c_growth != Cmp::Below) {
            if (c_trigger == Cmp::Band)
                band("alpha at (d+2)/4 with 3 alpha + beta out of range");
            else
                fail("3 alpha + beta must stay below (3d+4)/2 for alpha above (d+2)/4");
        }
    }
    rep.mild_admissible = admissible && !boundary;

    //--- critical Lebesgue family ----------------------------------------------
    rep.p = rep.q = rep.r = rep.sigma = kNaN;
    rep.theta_window_lo = rep.theta_window_hi = kNaN;
    const Rat crit = a + b - 1;
    if (crit > 0) {
        const Rat p_inv = crit / dd;
        rep.p = to_double(dd / crit);
        const Rat q_inv = p_inv - (2 * b - 1) / (3 * dd);
        if (q_inv > 0) {
            rep.q = to_double(1 / q_inv);
            const Rat r_inv = 2 * q_inv - (2 * a - 1) / dd;
            rep.r = r_inv > 0 ? to_double(1 / r_inv) : kNaN;
            rep.sigma = to_double((dd / (2 * b)) * (p_inv - q_inv));
            rep.theta_window_lo = to_double(p_inv);
            rep.theta_window_hi = to_double(2 * b / dd + 2 * q_inv - p_inv);
        }
        // sanity implied by admissibility; surfaced as data if ever violated
        if (rep.mild_admissible) {
            const bool q_ok = q_inv > 0 && 1 / q_inv > Rat(2) && q_inv < p_inv;
            const bool r_ok = q_inv > 0 && 2 * q_inv - (2 * a - 1) / dd > 0 &&
                              2 * q_inv - (2 * a - 1) / dd < 1;
            if (!q_ok || !r_ok) {
                rep.mild_admissible = false;
                rep.reasons.emplace_back("internal: derived exponents left their range");
            }
        }
    }

    //--- scaling trichotomy ------------------------------------------------------
    if (p_opt) {
        const Rat expo = crit - dd / Rat(*p_opt);
        switch (compare_band(expo, Rat(0))) {
            case Cmp::Equal: rep.scaling_class = ScalingClass::Critical; break;
            case Cmp::Band: rep.scaling_class = ScalingClass::Boundary; break;
            case Cmp::Above: rep.scaling_class = ScalingClass::Sub; break;
            case Cmp::Below: rep.scaling_class = ScalingClass::Super; break;
        }
    } else {
        // the report's own p is critical by construction; without one, a
        // nonpositive scaling weight makes every finite p supercritical
        rep.scaling_class = crit > 0 ? ScalingClass::Critical : ScalingClass::Super;
    }

    return rep;
}

double local_time_hint(double b0_hs_norm, double c_cal) {
    if (!(b0_hs_norm > 0.0) || !std::isfinite(b0_hs_norm))
        throw ConfigError("local_time_hint: the norm must be finite and positive");
    if (!(c_cal > 0.0) || !std::isfinite(c_cal))
        throw ConfigError("local_time_hint: the calibration constant must be finite and positive");
    const double x = c_cal * b0_hs_norm;
    return 1.0 / (x * x);
}

}  // namespace smag
