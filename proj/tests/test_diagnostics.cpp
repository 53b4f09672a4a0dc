#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "smag/diagnostics.hpp"
#include "smag/errors.hpp"
#include "smag/evolve.hpp"
#include "smag/fields.hpp"
#include "smag/spectral.hpp"
#include "smag/stokes.hpp"

using namespace smag;

namespace {

constexpr double kTwoPiCubed = 248.05021344239853;  // (2 pi)^3

SpectralVectorField scaled(const SpectralVectorField& v, double c) {
    SpectralVectorField out = v;
    for (int i = 0; i < out.components(); ++i)
        for (std::size_t x = 0; x < out.component(i).size(); ++x) out.component(i)[x] *= c;
    return out;
}

Trajectory synthetic_path(int count, double t_end, double (*u_of_t)(double)) {
    Trajectory traj;
    traj.records.resize(count);
    for (int j = 0; j < count; ++j) {
        const double t = t_end * double(j) / double(count - 1);
        traj.records[j].t = t;
        traj.records[j].u_Hd2p1 = u_of_t(t);
    }
    traj.final_time = t_end;
    return traj;
}

}  // namespace

TEST_CASE("helicity of curl eigenfields equals the energy") {
    Grid g(3, 16);
    SUBCASE("unit ABC") {
        SpectralVectorField b = make_initial(ABC{1.0, 1.0, 1.0}, g);
        const double h = magnetic_helicity(b);
        CHECK(h == doctest::Approx(3.0 * kTwoPiCubed).epsilon(1e-12));
        // Beltrami data saturates the Arnold bound: M = |H|/2
        const double l2 = norm(b, NormRequest::hom_sobolev(0.0));
        CHECK(0.5 * l2 * l2 == doctest::Approx(0.5 * h).epsilon(1e-12));
    }
    SUBCASE("anisotropic ABC") {
        SpectralVectorField b = make_initial(ABC{0.7, 1.3, 0.4}, g);
        const double expect = (0.49 + 1.69 + 0.16) * kTwoPiCubed;
        CHECK(magnetic_helicity(b) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("helicity vanishes on mirror-symmetric data") {
    Grid g(3, 16);
    SpectralVectorField b = make_initial(SingleMode{{0, 0, 1}, 1.0, {1.0, 0.0, 0.0}}, g);
    CHECK(magnetic_helicity(b) == 0.0);
}

TEST_CASE("helicity is quadratic under scaling") {
    Grid g(3, 16);
    SpectralVectorField b = make_initial(RandomBandLimited{1, 4, 7, 1.0, 1.0}, g);
    const double h = magnetic_helicity(b);
    CHECK(std::abs(h) > 1e-6);  // generic data has nonzero helicity
    CHECK(magnetic_helicity(scaled(b, 2.0)) == doctest::Approx(4.0 * h).epsilon(1e-13));
    CHECK(magnetic_helicity(scaled(b, -1.0)) == doctest::Approx(h).epsilon(1e-13));
}

TEST_CASE("helicity requires three dimensions") {
    SpectralVectorField b = make_initial(OrszagTangLike{}, Grid(2, 16));
    CHECK_THROWS_AS(magnetic_helicity(b), WrongDimension);
}

TEST_CASE("helicity is conserved along an ideal run") {
    SimParams p;
    p.d = 3;
    p.n = 16;
    p.alpha = 1.0;
    p.eta = 0.0;
    p.ic = RandomBandLimited{1, 3, 11, 1.0, 1.0};
    p.dt = 1e-3;
    p.t_end = 0.02;
    p.sample_every = 5;
    Trajectory traj = run(p);
    REQUIRE(traj.records.size() >= 3);
    const double h0 = traj.records.front().H;
    const double m0 = traj.records.front().M;
    for (const auto& r : traj.records) {
        CHECK(std::abs(r.H - h0) <= 2e-8 * m0);
        CHECK(r.arnold_margin == r.M - 0.5 * std::abs(r.H));
        CHECK(r.arnold_margin >= 0.0);
    }
}

TEST_CASE("planar runs carry no helicity fields") {
    SimParams p;
    p.d = 2;
    p.n = 16;
    p.ic = OrszagTangLike{};
    p.dt = 1e-2;
    p.t_end = 0.05;
    Trajectory traj = run(p);
    for (const auto& r : traj.records) {
        CHECK(r.H == 0.0);
        CHECK(r.arnold_margin == 0.0);
    }
}

TEST_CASE("record scalars match direct recomputation") {
    SimParams p;
    p.d = 3;
    p.n = 16;
    p.alpha = 1.5;
    p.beta = 1.0;
    p.eta = 0.5;
    p.s = 1.2;
    p.lp_exponent = 3.0;
    p.ic = RandomBandLimited{1, 3, 19, 1.0, 1.2};
    p.dt = 1e-2;
    p.t_end = 0.05;
    Trajectory traj = run(p);
    REQUIRE(!traj.records.empty());

    SpectralVectorField b0 = make_initial(p.ic, Grid(p.d, p.n));
    const DiagnosticsRecord& r0 = traj.records.front();
    const double l2 = norm(b0, NormRequest::hom_sobolev(0.0));
    CHECK(r0.M == 0.5 * l2 * l2);
    CHECK(r0.b_Hs == norm(b0, NormRequest::sobolev(p.s)));
    CHECK(r0.b_H1 == norm(b0, NormRequest::sobolev(1.0)));
    CHECK(r0.b_Lp == norm(b0, NormRequest::lp(p.lp_exponent)));
    CHECK(r0.H == magnetic_helicity(b0));

    SpectralVectorField u0 = solve_velocity(b0, StokesConfig{p.alpha, p.nu});
    const double ua = norm(u0, NormRequest::hom_sobolev(p.alpha));
    CHECK(r0.u_Ha2 == ua * ua);
    CHECK(r0.u_Hd2p1 == norm(u0, NormRequest::hom_sobolev(0.5 * p.d + 1.0)));
    CHECK(r0.cont_integral == 0.0);
    CHECK(r0.energy_residual == 0.0);
}

TEST_CASE("balance residual series mirrors the online records") {
    SimParams p;
    p.d = 2;
    p.n = 32;
    p.alpha = 1.0;
    p.beta = 1.0;
    p.eta = 1.0;
    p.ic = RandomBandLimited{1, 4, 23, 1.0, 1.0};
    p.dt = 1e-3;
    p.t_end = 0.02;
    p.sample_every = 4;
    Trajectory traj = run(p);
    ResidualSeries res = energy_balance_residual(traj, p);
    REQUIRE(res.per_interval.size() == traj.records.size() - 1);
    double mx = 0.0, acc = 0.0;
    for (std::size_t j = 0; j < res.per_interval.size(); ++j) {
        CHECK(res.per_interval[j] == traj.records[j + 1].energy_residual);
        mx = std::max(mx, std::abs(res.per_interval[j]));
        acc += std::abs(res.per_interval[j]);
    }
    CHECK(res.max_abs == mx);
    CHECK(res.mean_abs == doctest::Approx(acc / double(res.per_interval.size())).epsilon(1e-15));
}

TEST_CASE("balance residual edge cases") {
    SUBCASE("stationary zero field") {
        SimParams p;
        p.d = 2;
        p.n = 16;
        p.ic = SingleMode{{0, 1, 0}, 0.0, {1.0, 0.0, 0.0}};
        p.dt = 1e-2;
        p.t_end = 0.05;
        Trajectory traj = run(p);
        ResidualSeries res = energy_balance_residual(traj, p);
        for (double r : res.per_interval) CHECK(r == 0.0);
        CHECK(res.max_abs == 0.0);
        CHECK(res.mean_abs == 0.0);
    }
    SUBCASE("a single sample has no interval") {
        Trajectory traj;
        traj.records.resize(1);
        SimParams p;
        CHECK_THROWS_AS(energy_balance_residual(traj, p), InsufficientSamples);
    }
}

TEST_CASE("continuation monitor") {
    SUBCASE("zero velocity gives a zero integral") {
        SimParams p;
        p.d = 2;
        p.n = 32;
        p.ic = SingleMode{{0, 1, 0}, 1.0, {1.0, 0.0, 0.0}};
        p.dt = 1e-2;
        p.t_end = 0.1;
        Trajectory traj = run(p);
        ContinuationReport rep = continuation_monitor(traj);
        CHECK(rep.integral == 0.0);
        CHECK(rep.verdict == ContinuationVerdict::Finite);
    }
    SUBCASE("integral agrees with the running record") {
        SimParams p;
        p.d = 2;
        p.n = 32;
        p.alpha = 1.0;
        p.ic = RandomBandLimited{1, 4, 29, 2.0, 1.0};
        p.dt = 1e-3;
        p.t_end = 0.02;
        p.sample_every = 2;
        Trajectory traj = run(p);
        ContinuationReport rep = continuation_monitor(traj);
        CHECK(rep.integral == traj.records.back().cont_integral);
        for (std::size_t j = 1; j < traj.records.size(); ++j)
            CHECK(traj.records[j].cont_integral >= traj.records[j - 1].cont_integral);
    }
    SUBCASE("near-singular growth is flagged") {
        Trajectory traj = synthetic_path(201, 1.0, [](double t) {
            return std::pow(1.02 - t, -0.9);
        });
        CHECK(continuation_monitor(traj).verdict == ContinuationVerdict::GrowingFast);
    }
    SUBCASE("mild growth stays finite") {
        Trajectory traj = synthetic_path(201, 1.0, [](double t) { return 1.0 + t; });
        CHECK(continuation_monitor(traj).verdict == ContinuationVerdict::Finite);
    }
    SUBCASE("short series are never flagged") {
        Trajectory traj = synthetic_path(4, 1.0, [](double t) {
            return std::pow(1.02 - t, -0.9);
        });
        CHECK(continuation_monitor(traj).verdict == ContinuationVerdict::Finite);
    }
}
