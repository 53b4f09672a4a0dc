#include "smag/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "smag/errors.hpp"
#include "smag/stokes.hpp"

namespace smag {

namespace {

//--- integrating-factor tables ------------------------------------------

// e^{-eta (dt/2) |k|^{2 beta}} and its square, cached per (grid, eta, beta, dt)
struct StepFactors {
    std::vector<double> half;
    std::vector<double> full;
};

const StepFactors& factors_for(const Grid& g, double eta, double beta, double dt) {
    using Key = std::tuple<int, int, double, double, double>;
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<StepFactors>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(Key{g.d, g.n, eta, beta, dt});
    if (it == cache.end()) {
        auto f = std::make_unique<StepFactors>();
        f->half.resize(g.size());
        f->full.resize(g.size());
        const double c = eta * 0.5 * dt;
        g.for_modes([&](std::size_t i, int k0, int k1, int k2) {
            const double kk = double(k0) * k0 + double(k1) * k1 + double(k2) * k2;
            const double e = std::exp(-c * std::pow(kk, beta));
            f->half[i] = e;
            f->full[i] = e * e;
        });
        it = cache.emplace(Key{g.d, g.n, eta, beta, dt}, std::move(f)).first;
    }
    return *it->second;
}

SpectralVectorField scaled_by(const std::vector<double>& fac, const SpectralVectorField& v) {
    SpectralVectorField out = v;
    for (int i = 0; i < out.components(); ++i) {
        auto* c = out.component(i).data();
        for (std::size_t x = 0; x < out.component(i).size(); ++x) c[x] *= fac[x];
    }
    return out;
}

// Stage combinations run fused, one pass per argument field; every output
// element is an independent expression, so fusion only trims memory traffic.

// fac[x] * (a[x] + w y[x])
SpectralVectorField scaled_sum(const std::vector<double>& fac, const SpectralVectorField& a,
                               double w, const SpectralVectorField& y) {
    SpectralVectorField out(a.grid());
    for (int i = 0; i < a.components(); ++i) {
        auto* o = out.component(i).data();
        const auto* ac = a.component(i).data();
        const auto* yc = y.component(i).data();
        for (std::size_t x = 0; x < a.component(i).size(); ++x) o[x] = fac[x] * (ac[x] + w * yc[x]);
    }
    return out;
}

// fac[x] * a[x] + w y[x]
SpectralVectorField scaled_plus(const std::vector<double>& fac, const SpectralVectorField& a,
                                double w, const SpectralVectorField& y) {
    SpectralVectorField out(a.grid());
    for (int i = 0; i < a.components(); ++i) {
        auto* o = out.component(i).data();
        const auto* ac = a.component(i).data();
        const auto* yc = y.component(i).data();
        for (std::size_t x = 0; x < a.component(i).size(); ++x) o[x] = fac[x] * ac[x] + w * yc[x];
    }
    return out;
}

// a[x] + w y[x]
SpectralVectorField sum_scaled(const SpectralVectorField& a, double w,
                               const SpectralVectorField& y) {
    SpectralVectorField out(a.grid());
    for (int i = 0; i < a.components(); ++i) {
        auto* o = out.component(i).data();
        const auto* ac = a.component(i).data();
        const auto* yc = y.component(i).data();
        for (std::size_t x = 0; x < a.component(i).size(); ++x) o[x] = ac[x] + w * yc[x];
    }
    return out;
}

SpectralVectorField quasi_static_velocity(const SpectralVectorField& b, const SimParams& p) {
    return velocity_from_tensor_divergence(
        div_tensor_symmetric_phys(inverse_transform_field(b), b.grid()),
        StokesConfig{p.alpha, p.nu});
}

SpectralVectorField step_impl(const SpectralVectorField& b, double dt, const SimParams& p) {
    const StepFactors& f = factors_for(b.grid(), p.eta, p.beta, dt);
    const double h = dt;

    SpectralVectorField k1 = rhs(b, p);
    SpectralVectorField k2 = rhs(scaled_sum(f.half, b, 0.5 * h, k1), p);
    SpectralVectorField k3 = rhs(scaled_plus(f.half, b, 0.5 * h, k2), p);
    SpectralVectorField e2b = scaled_by(f.full, b);
    SpectralVectorField ek3 = scaled_by(f.half, k3);
    SpectralVectorField k4 = rhs(sum_scaled(e2b, h, ek3), p);

    SpectralVectorField out(b.grid());
    const double w = h / 6.0;
    for (int i = 0; i < out.components(); ++i) {
        auto* o = out.component(i).data();
        const auto* c1 = k1.component(i).data();
        const auto* c2 = k2.component(i).data();
        const auto* c3 = ek3.component(i).data();
        const auto* c4 = k4.component(i).data();
        const auto* eb = e2b.component(i).data();
        for (std::size_t x = 0; x < out.component(i).size(); ++x) {
            const std::complex<double> acc =
                f.full[x] * c1[x] + 2.0 * (f.half[x] * c2[x]) + 2.0 * c3[x] + c4[x];
            o[x] = eb[x] + w * acc;
        }
    }
    if (!all_finite(out))
        throw NonFiniteField("step_ifrk4: non-finite coefficients after the update");
    return out;
}

//--- the main loop --------------------------------------------------------

Trajectory run_loop(SpectralVectorField b, const SimParams& p, const ResumePoint* seed,
                    long cut, ResumePoint* rp_out) {
    Trajectory traj;
    if (p.store_fields) traj.path.emplace();

    std::optional<DiagnosticsRecord> prev;
    auto add_record = [&](double tt) {
        DiagnosticsRecord r;
        r.t = tt;
        const double l2 = norm(b, NormRequest::hom_sobolev(0.0));
        r.M = 0.5 * l2 * l2;
        SpectralVectorField u = quasi_static_velocity(b, p);
        const double ua = norm(u, NormRequest::hom_sobolev(p.alpha));
        r.u_Ha2 = ua * ua;
        r.u_Hd2p1 = norm(u, NormRequest::hom_sobolev(0.5 * p.d + 1.0));
        r.b_Hs = norm(b, NormRequest::sobolev(p.s));
        r.b_H1 = norm(b, NormRequest::sobolev(1.0));
        r.b_Lp = norm(b, NormRequest::lp(p.lp_exponent));
        const double hb = norm(b, NormRequest::hom_sobolev(p.beta));
        r.diss_b = hb * hb;
        if (p.d == 3) {
            r.H = magnetic_helicity(b);
            r.arnold_margin = r.M - 0.5 * std::abs(r.H);
        }
        if (prev) {
            r.cont_integral =
                prev->cont_integral + 0.5 * (r.u_Hd2p1 + prev->u_Hd2p1) * (r.t - prev->t);
            r.energy_residual = interval_residual(*prev, r, p.nu, p.eta);
        }
        traj.records.push_back(r);
        prev = r;
        if (traj.path) {
            traj.path->times.push_back(tt);
            traj.path->fields.push_back(b);
        }
    };

    double t = 0.0;
    double hs0 = norm(b, NormRequest::sobolev(p.s));
    long k = 0;
    if (seed) {
        t = seed->t;
        k = seed->step;
        hs0 = seed->initial_hs;
        prev = seed->last_record;
    } else {
        add_record(t);
    }

    const bool fixed = p.dt > 0.0;
    long nsteps = 0;
    if (fixed) {
        nsteps = static_cast<long>(std::ceil(p.t_end / p.dt - 1e-9));
        if (nsteps < 1) nsteps = 1;
        while (nsteps > 1 && !(p.t_end - double(nsteps - 1) * p.dt > 0.0)) --nsteps;
    }

    bool stopped_by_cut = false;
    while (fixed ? k < nsteps : t < p.t_end) {
        if (cut >= 0 && k >= cut) {
            stopped_by_cut = true;
            break;
        }
        double h, t_next;
        if (fixed) {
            if (k + 1 == nsteps) {
                h = p.t_end - double(nsteps - 1) * p.dt;
                t_next = p.t_end;
            } else {
                h = p.dt;
                t_next = double(k + 1) * p.dt;
            }
        } else {
            const double hc = cfl_dt(b, p);
            if (hc < 1e-12) {
                traj.status = RunStatus::BlowupSuspected;
                break;
            }
            const double rem = p.t_end - t;
            if (hc >= rem) {
                h = rem;
                t_next = p.t_end;
            } else {
                h = hc;
                t_next = t + hc;
            }
        }
        try {
            b = step_impl(b, h, p);
        } catch (const NonFiniteField&) {
            traj.status = RunStatus::Diverged;
            break;
        }
        t = t_next;
        ++k;
        if (k % p.reproject_every == 0) b = leray_project(b);
        const double hs = norm(b, NormRequest::sobolev(p.s));
        if (!(hs <= 1e6 * std::max(hs0, 1e-12))) {
            traj.status = RunStatus::BlowupSuspected;
            break;
        }
        const bool done = fixed ? k >= nsteps : t >= p.t_end;
        if (!done && k % p.sample_every == 0) add_record(t);
    }

    if (!stopped_by_cut && (!prev || prev->t != t)) add_record(t);
    if (rp_out) {
        rp_out->t = t;
        rp_out->step = k;
        rp_out->initial_hs = hs0;
        rp_out->last_record = prev ? *prev : DiagnosticsRecord{};
    }
    traj.final_time = t;
    traj.final_state = std::move(b);
    return traj;
}

}  // namespace

void validate(const SimParams& p) {
    Grid g(p.d, p.n);
    (void)g;
    if (p.alpha < 0.0) throw InvalidExponent("SimParams: alpha must be >= 0");
    if (!(p.beta > 0.0)) throw InvalidExponent("SimParams: beta must be positive");
    if (!(p.nu > 0.0)) throw ConfigError("SimParams: nu must be positive");
    if (p.eta < 0.0) throw ConfigError("SimParams: eta must be >= 0");
    if (p.s < 0.0) throw InvalidExponent("SimParams: s must be >= 0");
    if (!(p.t_end > 0.0)) throw NegativeTime("SimParams: t_end must be positive");
    if (p.dt < 0.0 || p.cfl_number < 0.0)
        throw ConfigError("SimParams: dt and cfl_number must not be negative");
    if ((p.dt > 0.0) == (p.cfl_number > 0.0))
        throw ConfigError("SimParams: set exactly one of dt and cfl_number");
    if (p.cfl_number > 1.0) throw ConfigError("SimParams: cfl_number must lie in (0, 1]");
    if (p.sample_every < 1) throw ConfigError("SimParams: sample_every must be >= 1");
    if (p.reproject_every < 1) throw ConfigError("SimParams: reproject_every must be >= 1");
    if (p.lp_exponent < 1.0) throw ConfigError("SimParams: lp_exponent must be >= 1");
}

SpectralVectorField rhs(const SpectralVectorField& b, const SimParams& params) {
    const Grid& g = b.grid();
    const auto phys_b = inverse_transform_field(b);
    SpectralVectorField u = velocity_from_tensor_divergence(
        div_tensor_symmetric_phys(phys_b, g), StokesConfig{params.alpha, params.nu});
    const auto phys_u = inverse_transform_field(u);
    return div_tensor_antisymmetric_phys(phys_b, phys_u, g);
}

SpectralVectorField step_ifrk4(const SpectralVectorField& b, double dt, const SimParams& params) {
    if (!(dt > 0.0)) throw ConfigError("step_ifrk4: dt must be positive");
    return step_impl(b, dt, params);
}

namespace {

void check_initial(const SpectralVectorField& b0, const SimParams& params) {
    if (b0.grid() != Grid(params.d, params.n))
        throw GridMismatch("run: initial field does not match the configured grid");
    const double scale = max_abs_coeff(b0);
    for (int i = 0; i < b0.components(); ++i)
        if (std::abs(b0.component(i).at_mode({0, 0, 0})) > 1e-12 * scale)
            throw NonzeroMean("run: initial field must have zero mean");
    if (relative_divergence(b0) > 1e-10)
        throw NonDivergenceFreeInput("run: initial field must be divergence-free");
}

}  // namespace

Trajectory run(const SimParams& params) {
    validate(params);
    return run_loop(make_initial(params.ic, Grid(params.d, params.n)), params, nullptr, -1,
                    nullptr);
}

Trajectory run(const SpectralVectorField& b0, const SimParams& params) {
    validate(params);
    check_initial(b0, params);
    return run_loop(b0, params, nullptr, -1, nullptr);
}

Trajectory run_partial(const SpectralVectorField& b0, const SimParams& params, long max_steps,
                       ResumePoint& rp) {
    validate(params);
    check_initial(b0, params);
    if (max_steps < 0) throw ConfigError("run_partial: max_steps must be >= 0");
    return run_loop(b0, params, nullptr, max_steps, &rp);
}

Trajectory run_resumed(const SpectralVectorField& b0, const ResumePoint& from,
                       const SimParams& params, ResumePoint& rp) {
    validate(params);
    if (b0.grid() != Grid(params.d, params.n))
        throw GridMismatch("run_resumed: field does not match the configured grid");
    if (!all_finite(b0)) throw NonFiniteField("run_resumed: non-finite coefficients");
    if (from.t < 0.0 || from.step < 0)
        throw ConfigError("run_resumed: resume point precedes the start of the run");
    return run_loop(b0, params, &from, -1, &rp);
}

double cfl_dt(const SpectralVectorField& b, const SimParams& params) {
    SpectralVectorField u = quasi_static_velocity(b, params);
    const auto phys = inverse_transform_field(u);
    double m2 = 0.0;
    for (std::size_t x = 0; x < phys.front().size(); ++x) {
        double acc = 0.0;
        for (const auto& comp : phys) acc += comp[x] * comp[x];
        m2 = std::max(m2, acc);
    }
    const double umax = std::sqrt(m2);
    return std::min(params.cfl_number * b.grid().spacing() / std::max(umax, 1e-8), 0.1);
}

}  // namespace smag
