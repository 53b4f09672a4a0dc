#include "smag/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

#include "smag/errors.hpp"
#include "smag/evolve.hpp"

namespace smag {

double magnetic_helicity(const SpectralVectorField& b) {
    if (b.grid().d != 3) throw WrongDimension("magnetic_helicity: field must be three-dimensional");
    const Grid& g = b.grid();
    const SpectralScalar& b0 = b.component(0);
    const SpectralScalar& b1 = b.component(1);
    const SpectralScalar& b2 = b.component(2);
    const std::complex<double> iu{0.0, 1.0};
    double h = 0.0;
    g.for_modes([&](std::size_t f, int k0, int k1, int k2) {
        const double kk = double(k0) * k0 + double(k1) * k1 + double(k2) * k2;
        if (kk == 0.0) return;
        const std::complex<double> c0 = double(k1) * b2[f] - double(k2) * b1[f];
        const std::complex<double> c1 = double(k2) * b0[f] - double(k0) * b2[f];
        const std::complex<double> c2 = double(k0) * b1[f] - double(k1) * b0[f];
        const std::complex<double> dot =
            iu * c0 * std::conj(b0[f]) + iu * c1 * std::conj(b1[f]) + iu * c2 * std::conj(b2[f]);
        h += dot.real() / kk;
    });
    return h;
}

double interval_residual(const DiagnosticsRecord& a, const DiagnosticsRecord& b, double nu,
                         double eta) {
    const double da = nu * a.u_Ha2 + eta * a.diss_b;
    const double db = nu * b.u_Ha2 + eta * b.diss_b;
    return (b.M - a.M) / (b.t - a.t) + 0.5 * (da + db);
}

ResidualSeries energy_balance_residual(const Trajectory& traj, const SimParams& params) {
    if (traj.records.size() < 2)
        throw InsufficientSamples("energy_balance_residual: need at least two samples");
    ResidualSeries out;
    out.per_interval.reserve(traj.records.size() - 1);
    double acc = 0.0;
    for (std::size_t j = 1; j < traj.records.size(); ++j) {
        const double r =
            interval_residual(traj.records[j - 1], traj.records[j], params.nu, params.eta);
        out.per_interval.push_back(r);
        out.max_abs = std::max(out.max_abs, std::abs(r));
        acc += std::abs(r);
    }
    out.mean_abs = acc / double(out.per_interval.size());
    return out;
}

ContinuationReport continuation_monitor(const Trajectory& traj) {
    ContinuationReport rep;
    const auto& rs = traj.records;
    if (rs.size() < 2) return rep;
    for (std::size_t j = 1; j < rs.size(); ++j)
        rep.integral += 0.5 * (rs[j].u_Hd2p1 + rs[j - 1].u_Hd2p1) * (rs[j].t - rs[j - 1].t);
    if (rs.size() < 8) return rep;

    const double span = rs.back().t - rs.front().t;
    const double q3 = rs.front().t + 0.75 * span;
    const double q7 = rs.front().t + 0.875 * span;
    double last_quartile = 0.0;
    double last_eighth = 0.0;
    for (std::size_t j = 1; j < rs.size(); ++j) {
        const double mid = 0.5 * (rs[j].t + rs[j - 1].t);
        const double inc = 0.5 * (rs[j].u_Hd2p1 + rs[j - 1].u_Hd2p1) * (rs[j].t - rs[j - 1].t);
        if (mid >= q3) last_quartile += inc;
        if (mid >= q7) last_eighth += inc;
    }
    // growing fast: the tail dominates the total and is still accelerating
    // (its second half outweighs its first)
    if (last_quartile > 0.5 * rep.integral && last_eighth > 0.5 * last_quartile)
        rep.verdict = ContinuationVerdict::GrowingFast;
    return rep;
}

}  // namespace smag
