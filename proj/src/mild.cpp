#include "smag/mild.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "smag/errors.hpp"
#include "smag/fields.hpp"

namespace smag {

namespace {

//--- exponential quadrature weights ------------------------------------------

// Weights for int_0^h e^{-lambda (h-s)} F(s) ds with F linear on [0, h] and
// x = lambda h: the older endpoint gets g1 = (1 - (1+x) e^{-x})/x^2, the
// newer g2 = (x - 1 + e^{-x})/x^2, and g1 + g2 = (1 - e^{-x})/x. The closed
// forms cancel catastrophically near 0, so small x switches to the series.
std::pair<double, double> linear_exp_weights(double x) {
    if (x < 0.5) {
        double g1 = 0.0, g2 = 0.0;
        double term = 1.0;  // (-x)^n / n!
        for (int n = 0; n < 24; ++n) {
            g1 += term / double(n + 2);
            g2 += term / double((n + 1) * (n + 2));
            term *= -x / double(n + 1);
            if (std::abs(term) < 1e-20) break;
        }
        return {g1, g2};
    }
    const double ex = std::exp(-x);
    const double xx = x * x;
    return {(1.0 - (1.0 + x) * ex) / xx, (x - 1.0 + ex) / xx};
}

void check_op(const SemigroupOp& op) {
    if (!(op.beta > 0.0)) throw InvalidExponent("semigroup: beta must be positive");
}

// Accumulates one forcing interval of length h onto acc: the surviving part
// of acc decays by e^{-lambda h} and the linear interpolant of (fa, fb) is
// integrated exactly per mode.
void advance_interval(const SemigroupOp& op, SpectralVectorField& acc,
                      const SpectralVectorField& fa, const SpectralVectorField& fb, double h) {
    const Grid& g = op.grid;
    g.for_modes([&](std::size_t fl, int k0, int k1, int k2) {
        const double kk = double(k0 * k0 + k1 * k1 + k2 * k2);
        const double x = h * std::pow(kk, op.beta);
        const auto [g1, g2] = linear_exp_weights(x);
        const double decay = std::exp(-x);
        for (int c = 0; c < g.d; ++c) {
            auto& out = acc.component(c)[fl];
            out = decay * out + h * (g1 * fa.component(c)[fl] + g2 * fb.component(c)[fl]);
        }
    });
}

void check_duhamel_grid(const SemigroupOp& op, const std::vector<double>& t_grid,
                        const std::vector<SpectralVectorField>& forcing) {
    check_op(op);
    if (t_grid.empty()) throw ConfigError("duhamel_integral: empty time grid");
    if (forcing.size() != t_grid.size())
        throw GridMismatch("duhamel_integral: one forcing sample per grid time is required");
    if (t_grid.front() < 0.0)
        throw NegativeTime("duhamel_integral: the time grid must start at or after 0");
    for (std::size_t j = 0; j + 1 < t_grid.size(); ++j)
        if (!(t_grid[j] < t_grid[j + 1]))
            throw ConfigError("duhamel_integral: the time grid must be strictly increasing");
    for (const auto& f : forcing)
        if (f.grid() != op.grid)
            throw GridMismatch("duhamel_integral: forcing sample grid differs from the operator");
}

// int_0^{t_j} G(t_j - s) F(s) ds for every grid node, by one forward sweep.
std::vector<SpectralVectorField> duhamel_all_nodes(const SemigroupOp& op,
                                                   const std::vector<double>& t_grid,
                                                   const std::vector<SpectralVectorField>& forcing) {
    std::vector<SpectralVectorField> out;
    out.reserve(t_grid.size());
    SpectralVectorField acc(op.grid);
    if (t_grid.front() > 0.0)
        advance_interval(op, acc, forcing.front(), forcing.front(), t_grid.front());
    out.push_back(acc);
    for (std::size_t j = 1; j < t_grid.size(); ++j) {
        advance_interval(op, acc, forcing[j - 1], forcing[j], t_grid[j] - t_grid[j - 1]);
        out.push_back(acc);
    }
    return out;
}

void check_close(double got, double want, const char* message) {
    if (std::abs(got - want) > 1e-12) throw ConfigError(message);
}

}  // namespace

//--- semigroup ----------------------------------------------------------------

SpectralVectorField semigroup_apply(const SemigroupOp& op, double t, const SpectralVectorField& f) {
    check_op(op);
    if (t < 0.0) throw NegativeTime("semigroup_apply: negative evolution time");
    if (f.grid() != op.grid)
        throw GridMismatch("semigroup_apply: field grid differs from the operator grid");
    SpectralVectorField out = f;
    const Grid& g = op.grid;
    g.for_modes([&](std::size_t fl, int k0, int k1, int k2) {
        const double kk = double(k0 * k0 + k1 * k1 + k2 * k2);
        if (kk == 0.0) return;  // the mean never decays
        const double m = std::exp(-t * std::pow(kk, op.beta));
        for (int c = 0; c < g.d; ++c) out.component(c)[fl] *= m;
    });
    return out;
}

double smoothing_ratio(const SemigroupOp& op, double t, const SpectralVectorField& f, double gamma,
                       double p, double q) {
    check_op(op);
    if (q < p) throw ExponentOrder("smoothing_ratio: q must not be smaller than p");
    if (!(t > 0.0)) throw NegativeTime("smoothing_ratio: t must be positive");
    if (gamma < 0.0) throw InvalidExponent("smoothing_ratio: gamma must be nonnegative");
    SpectralVectorField gf = semigroup_apply(op, t, f);
    if (gamma != 0.0) gf = fractional_laplacian(gf, gamma);
    const double den = norm(f, NormRequest::lp(p));
    if (den == 0.0) return 0.0;
    const double num = norm(gf, NormRequest::lp(q));
    const double d = double(op.grid.d);
    const double weight = gamma / (2.0 * op.beta) + (d / (2.0 * op.beta)) * (1.0 / p - 1.0 / q);
    return num * std::pow(t, weight) / den;
}

//--- Duhamel quadrature ---------------------------------------------------------

SpectralVectorField duhamel_integral(const SemigroupOp& op, const std::vector<double>& t_grid,
                                     const std::vector<SpectralVectorField>& forcing) {
    check_duhamel_grid(op, t_grid, forcing);
    return duhamel_all_nodes(op, t_grid, forcing).back();
}

std::vector<double> picard_time_grid(double t_end, int points) {
    if (!(t_end > 0.0)) throw NegativeTime("picard_time_grid: the horizon must be positive");
    if (points < 2) throw ConfigError("picard_time_grid: at least two samples are required");
    const double ratio = std::pow(1.0 / 1024.0, 1.0 / double(points - 1));
    std::vector<double> ts(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        ts[std::size_t(i)] = t_end * std::pow(ratio, double(points - 1 - i));
    ts.back() = t_end;
    return ts;
}

//--- weighted trajectory norms --------------------------------------------------

double ft_norm(const SampledPath& path, double sigma, double q) {
    if (sigma < 0.0) throw InvalidExponent("ft_norm: sigma must be nonnegative");
    if (path.times.empty() || path.fields.size() != path.times.size())
        throw EmptyTrajectory("ft_norm: the path carries no sampled fields");
    double sup = 0.0;
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        const double t = path.times[i];
        if (t < 0.0) throw NegativeTime("ft_norm: negative sample time");
        sup = std::max(sup, std::pow(t, sigma) * norm(path.fields[i], NormRequest::lp(q)));
    }
    return sup;
}

double ft_norm(const Trajectory& traj, double sigma, double q) {
    if (!traj.path) throw EmptyTrajectory("ft_norm: the run did not store fields");
    return ft_norm(*traj.path, sigma, q);
}

double nt_norm(const SampledPath& path, double p) { return ft_norm(path, 0.0, p); }

double nt_norm(const Trajectory& traj, double p) {
    if (!traj.path) throw EmptyTrajectory("nt_norm: the run did not store fields");
    return nt_norm(*traj.path, p);
}

//--- Picard iteration ------------------------------------------------------------

PicardResult picard_solve(const SpectralVectorField& b0, const PicardConfig& cfg,
                          const SimParams& params) {
    const Grid g(params.d, params.n);
    if (b0.grid() != g) throw GridMismatch("picard_solve: initial field grid differs from params");
    if (params.alpha < 0.0) throw InvalidExponent("picard_solve: alpha must be nonnegative");
    if (!(params.beta > 0.0)) throw InvalidExponent("picard_solve: beta must be positive");
    if (!(params.nu > 0.0)) throw ConfigError("picard_solve: nu must be positive");
    if (params.eta != 1.0)
        throw ConfigError("picard_solve: the mild iteration fixes the resistive scale eta = 1");
    if (cfg.max_iters < 1) throw ConfigError("picard_solve: max_iters must be at least 1");
    if (!(cfg.tol_rel > 0.0)) throw ConfigError("picard_solve: tol_rel must be positive");
    if (cfg.t_grid.empty()) throw ConfigError("picard_solve: empty time grid");
    if (!(cfg.t_grid.front() > 0.0)) throw ConfigError("picard_solve: grid times must be positive");
    for (std::size_t j = 0; j + 1 < cfg.t_grid.size(); ++j)
        if (!(cfg.t_grid[j] < cfg.t_grid[j + 1]))
            throw ConfigError("picard_solve: the time grid must be strictly increasing");
    if (!(cfg.p >= 1.0) || !(cfg.q >= 1.0) || !(cfg.r >= 1.0))
        throw InvalidExponent("picard_solve: Lebesgue exponents must be at least 1");
    const double d = double(params.d);
    check_close(1.0 / cfg.q, 1.0 / cfg.p - (2.0 * params.beta - 1.0) / (3.0 * d),
                "picard_solve: q is not the scaling companion of p");
    check_close(1.0 / cfg.r, 2.0 / cfg.q - (2.0 * params.alpha - 1.0) / d,
                "picard_solve: r does not match the velocity exponent relation");
    check_close(cfg.sigma, (d / (2.0 * params.beta)) * (1.0 / cfg.p - 1.0 / cfg.q),
                "picard_solve: sigma does not match the time weight");

    const double scale = max_abs_coeff(b0);
    for (int c = 0; c < g.d; ++c) {
        const auto mean = b0.component(c).at_mode({0, 0, 0});
        if (std::abs(mean) > 1e-12 * std::max(scale, 1e-300))
            throw NonzeroMean("picard_solve: initial field must have zero mean");
    }
    if (relative_divergence(b0) > 1e-10)
        throw NonDivergenceFreeInput("picard_solve: initial field must be divergence-free");

    const SemigroupOp op{params.beta, g};
    const std::size_t m = cfg.t_grid.size();

    std::vector<SpectralVectorField> base;
    base.reserve(m);
    for (double t : cfg.t_grid) base.push_back(semigroup_apply(op, t, b0));
    std::vector<SpectralVectorField> cur = base;

    const auto weighted_q = [&](const SpectralVectorField& f, double t) {
        return std::pow(t, cfg.sigma) * norm(f, NormRequest::lp(cfg.q));
    };

    PicardResult res;
    int bad_sweeps = 0;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        std::vector<SpectralVectorField> forcing;
        forcing.reserve(m);
        for (const auto& f : cur) forcing.push_back(rhs(f, params));
        auto correction = duhamel_all_nodes(op, cfg.t_grid, forcing);

        std::vector<SpectralVectorField> next = std::move(correction);
        double dist = 0.0;
        double cur_ft = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (int c = 0; c < g.d; ++c)
                for (std::size_t fl = 0; fl < g.size(); ++fl)
                    next[i].component(c)[fl] += base[i].component(c)[fl];
            if (!all_finite(next[i]))
                throw NonFiniteField("picard_solve: iterate left double range");
            SpectralVectorField diff = next[i];
            for (int c = 0; c < g.d; ++c)
                for (std::size_t fl = 0; fl < g.size(); ++fl)
                    diff.component(c)[fl] -= cur[i].component(c)[fl];
            dist = std::max(dist, weighted_q(diff, cfg.t_grid[i]));
            cur_ft = std::max(cur_ft, weighted_q(cur[i], cfg.t_grid[i]));
        }

        res.distances.push_back(dist);
        res.iterations = it;
        if (res.distances.size() >= 2) {
            const double prev = res.distances[res.distances.size() - 2];
            res.contraction_ratio = prev > 0.0 ? dist / prev : 0.0;
            bad_sweeps = res.contraction_ratio >= 1.0 ? bad_sweeps + 1 : 0;
            if (bad_sweeps >= 3)
                throw NonContractive("picard_solve: three consecutive sweeps failed to contract");
        }
        cur = std::move(next);
        if (dist <= cfg.tol_rel * cur_ft) {
            res.converged = true;
            break;
        }
    }

    res.trajectory.times = cfg.t_grid;
    res.trajectory.fields = std::move(cur);
    return res;
}

}  // namespace smag
