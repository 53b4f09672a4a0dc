#include "smag/experiments.hpp"

#include <cmath>
#include <limits>

#include "smag/errors.hpp"
#include "smag/fields.hpp"
#include "smag/mild.hpp"
#include "smag/regimes.hpp"

namespace smag {

namespace {

SpectralVectorField scaled(const SpectralVectorField& v, double c) {
    SpectralVectorField out = v;
    for (int i = 0; i < out.components(); ++i)
        for (std::size_t j = 0; j < out.component(i).size(); ++j) out.component(i)[j] *= c;
    return out;
}

double rel_l2_diff(const SpectralVectorField& got, const SpectralVectorField& ref) {
    if (got.grid() != ref.grid())
        throw GridMismatch("rel_l2_diff: fields live on different grids");
    double num = 0.0, den = 0.0;
    for (int i = 0; i < got.components(); ++i)
        for (std::size_t j = 0; j < got.component(i).size(); ++j) {
            num += std::norm(got.component(i)[j] - ref.component(i)[j]);
            den += std::norm(ref.component(i)[j]);
        }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

// Pushes the fine field through the zoom map: the coarse mode lambda * m
// receives scale * fine(m); everything outside the coarse box is dropped.
SpectralVectorField map_to_coarse(const SpectralVectorField& fine, int lambda, double scale,
                                  const Grid& coarse) {
    SpectralVectorField out(coarse);
    const int bound = coarse.n / 2 - 1;
    fine.grid().for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const int K0 = lambda * k0, K1 = lambda * k1, K2 = lambda * k2;
        if (std::abs(K0) > bound || std::abs(K1) > bound || std::abs(K2) > bound) return;
        for (int c = 0; c < fine.components(); ++c)
            out.component(c).at_mode({K0, K1, K2}) = scale * fine.component(c)[flat];
    });
    return out;
}

void require_completed(const Trajectory& traj, const char* what) {
    if (traj.status != RunStatus::Completed)
        throw NumericError(std::string(what) + ": run terminated before its horizon");
}

ExperimentReport run_one(const ScalingExperiment& ex, const SimParams& base) {
    if (ex.lambda < 2) throw ConfigError("scaling: lambda must be an integer >= 2");
    if (!(base.dt > 0.0)) throw ConfigError("scaling: matched sampling needs a fixed step");

    SimParams fine = base;
    fine.n = base.n * ex.lambda;
    fine.store_fields = true;
    Trajectory rf = run(fine);
    require_completed(rf, "scaling (fine run)");

    const double shrink = std::pow(double(ex.lambda), -2.0 * base.beta);
    const double gain = std::pow(double(ex.lambda), base.alpha + base.beta - 1.0);
    const Grid gc(base.d, base.n);

    SimParams coarse = base;
    coarse.t_end = base.t_end * shrink;
    coarse.dt = base.dt * shrink;
    coarse.store_fields = true;
    SpectralVectorField r0 = map_to_coarse(rf.path->fields.front(), ex.lambda, gain, gc);
    dealias_in_place(r0);
    Trajectory rc = run(r0, coarse);
    require_completed(rc, "scaling (rescaled run)");

    if (rc.path->fields.size() != rf.path->fields.size())
        throw NumericError("scaling: the two runs fell out of step");

    ExperimentReport rep;
    rep.kind = "scaling";
    for (std::size_t j = 0; j < rc.path->fields.size(); ++j) {
        SpectralVectorField ref = map_to_coarse(rf.path->fields[j], ex.lambda, gain, gc);
        dealias_in_place(ref);
        const double mis = rel_l2_diff(rc.path->fields[j], ref);
        rep.abscissae.push_back(rc.path->times[j]);
        rep.series.push_back(mis);
        rep.max_value = std::max(rep.max_value, mis);
    }
    return rep;
}

ExperimentReport run_one(const DecayProbeExperiment& ex, const SimParams& base) {
    RegimeReport reg = classify(base.d, base.alpha, base.beta, base.s, base.eta);
    if (!std::isfinite(reg.p) || !std::isfinite(reg.q))
        throw ConfigError("decay probe: no critical Lebesgue family for these exponents");
    if (!(ex.s_low >= 1.0))
        throw InvalidExponent("decay probe: s_low must be a Lebesgue exponent >= 1");
    const double inv = 1.0 / ex.s_low;
    if (!(inv > reg.theta_window_lo && inv < reg.theta_window_hi))
        throw InvalidExponent("decay probe: 1/s_low outside the admissible window");

    SimParams p = base;
    p.lp_exponent = reg.p;
    Trajectory traj = run(p);
    require_completed(traj, "decay probe");

    ExperimentReport rep;
    rep.kind = "decay_probe";
    rep.theta = (base.d / (2.0 * base.beta)) * (inv - 1.0 / reg.p);
    for (const DiagnosticsRecord& r : traj.records) {
        const double v = std::pow(r.t, rep.theta) * r.b_Lp;
        rep.abscissae.push_back(r.t);
        rep.series.push_back(v);
        rep.max_value = std::max(rep.max_value, v);
    }
    return rep;
}

ExperimentReport run_one(const LogSobolevSweepExperiment& ex, const SimParams& base) {
    if (ex.shells.empty()) throw ConfigError("log-sobolev sweep: shell list is empty");
    ExperimentReport rep;
    rep.kind = "log_sobolev_sweep";
    for (int N : ex.shells) {
        if (N < 2) throw ConfigError("log-sobolev sweep: shell bounds must be >= 2");
        const Grid g(base.d, 4 * N);
        SpectralScalar f(g);
        g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
            const int k2n = k0 * k0 + k1 * k1 + k2 * k2;
            if (k2n >= 1 && k2n <= N * N) f[flat] = std::pow(double(k2n), -0.25 * base.d);
        });
        const double ratio = log_sobolev_check(f, ex.s);
        rep.abscissae.push_back(double(N));
        rep.series.push_back(ratio);
        rep.max_value = std::max(rep.max_value, ratio);
    }
    return rep;
}

// Validity time of one run: the first sample where ||b||_{H^s} has doubled,
// censored at the run's final time when it never does.
double validity_time(const Trajectory& traj) {
    const double threshold = 2.0 * traj.records.front().b_Hs;
    for (const DiagnosticsRecord& r : traj.records)
        if (r.b_Hs >= threshold) return r.t;
    return traj.final_time;
}

ExperimentReport run_one(const AmplitudeSweepExperiment& ex, const SimParams& base) {
    if (ex.amplitudes.size() < 2)
        throw ConfigError("amplitude sweep: need at least two amplitudes to fit a slope");
    for (double a : ex.amplitudes)
        if (!(a > 0.0)) throw ConfigError("amplitude sweep: amplitudes must be positive");
    if (base.dt > 0.0)
        throw ConfigError("amplitude sweep: needs the adaptive stepper (set cfl_number)");

    const SpectralVectorField b0 = make_initial(base.ic, Grid(base.d, base.n));

    ExperimentReport rep;
    rep.kind = "amplitude_sweep";
    for (double a : ex.amplitudes) {
        SimParams p = base;
        p.t_end = base.t_end / (a * a);  // horizon shrinks with the expected law
        p.sample_every = 1;
        p.store_fields = false;
        Trajectory traj = run(scaled(b0, a), p);
        const double tv = validity_time(traj);
        rep.abscissae.push_back(a);
        rep.series.push_back(tv);
        rep.max_value = std::max(rep.max_value, tv);
    }

    double xm = 0.0, ym = 0.0;
    const std::size_t m = ex.amplitudes.size();
    for (std::size_t i = 0; i < m; ++i) {
        xm += std::log(rep.abscissae[i]);
        ym += std::log(rep.series[i]);
    }
    xm /= double(m);
    ym /= double(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(rep.abscissae[i]) - xm;
        sxy += dx * (std::log(rep.series[i]) - ym);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw ConfigError("amplitude sweep: amplitudes must not all coincide");
    rep.fitted_exponent = sxy / sxx;
    return rep;
}

ExperimentReport run_one(const PicardCrossExperiment& ex, const SimParams& base) {
    if (!(base.dt > 0.0)) throw ConfigError("picard cross-check: needs a fixed step");
    RegimeReport reg = classify(base.d, base.alpha, base.beta, base.s, base.eta);
    if (!std::isfinite(reg.p) || !std::isfinite(reg.q) || !std::isfinite(reg.r) ||
        !std::isfinite(reg.sigma))
        throw ConfigError("picard cross-check: no critical Lebesgue family for these exponents");

    PicardConfig cfg;
    cfg.t_grid = picard_time_grid(base.t_end);
    cfg.p = reg.p;
    cfg.q = reg.q;
    cfg.r = reg.r;
    cfg.sigma = reg.sigma;
    const int points = int(cfg.t_grid.size());
    if (ex.compare_points < 1 || ex.compare_points > points)
        throw ConfigError("picard cross-check: compare_points out of range");

    const SpectralVectorField b0 = make_initial(base.ic, Grid(base.d, base.n));
    PicardResult pr = picard_solve(b0, cfg, base);
    if (!pr.converged) throw NumericError("picard cross-check: iteration did not converge");

    ExperimentReport rep;
    rep.kind = "picard_cross";
    for (int j = 0; j < ex.compare_points; ++j) {
        const int idx = (j + 1) * points / ex.compare_points - 1;
        SimParams p = base;
        p.t_end = cfg.t_grid[idx];
        p.store_fields = false;
        Trajectory traj = run(b0, p);
        require_completed(traj, "picard cross-check");
        const double diff = rel_l2_diff(pr.trajectory.fields[idx], traj.final_state);
        rep.abscissae.push_back(cfg.t_grid[idx]);
        rep.series.push_back(diff);
        rep.max_value = std::max(rep.max_value, diff);
    }
    return rep;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    return std::visit([&](const auto& kind) { return run_one(kind, spec.base); }, spec.kind);
}

}  // namespace smag
