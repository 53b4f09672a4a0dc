#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "smag/spectral.hpp"

using namespace smag;
using oracle::cplx;
const double PI = M_PI;

namespace {

std::vector<double> sample_grid(const Grid& g, double (*fn)(double, double)) {
    std::vector<double> out(g.size());
    const double h = g.spacing();
    for (int j0 = 0; j0 < g.n; ++j0)
        for (int j1 = 0; j1 < g.n; ++j1) out[std::size_t(j0) * g.n + j1] = fn(h * j0, h * j1);
    return out;
}

}  // namespace

TEST_CASE("forward transform of cos(x1) hits the +-(1,0) modes") {
    Grid g(2, 16);
    auto f = sample_grid(g, [](double x, double) { return std::cos(x); });
    SpectralScalar s = forward_transform(f, g);
    // f_hat(+-(1,0)) = (2pi)^{d/2}/2 = pi under the stated convention.
    CHECK(std::abs(s.at_mode({1, 0, 0}) - cplx{PI, 0.0}) < 1e-13);
    CHECK(std::abs(s.at_mode({-1, 0, 0}) - cplx{PI, 0.0}) < 1e-13);
    double off = 0.0;
    g.for_modes([&](std::size_t flat, int k0, int k1, int) {
        if (!(std::abs(k0) == 1 && k1 == 0)) off = std::max(off, std::abs(s[flat]));
    });
    CHECK(off < 1e-14);
}

TEST_CASE("zero field transforms to zero coefficients") {
    Grid g(2, 16);
    std::vector<double> f(g.size(), 0.0);
    SpectralScalar s = forward_transform(f, g);
    g.for_modes([&](std::size_t flat, int, int, int) { CHECK(std::abs(s[flat]) == 0.0); });
}

TEST_CASE("transform matches the direct discrete sum on n = 8") {
    Grid g(2, 8);
    SpectralScalar f = oracle::random_hermitian_scalar(g, g.dealias_cutoff(), 11);
    std::vector<double> phys = inverse_transform(f);
    auto direct = oracle::forward_dft(phys, g);
    SpectralScalar back = forward_transform(phys, g);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        err = std::max(err, std::abs(back[i] - direct[i]));
        scale = std::max(scale, std::abs(direct[i]));
    }
    CHECK(err < 1e-12 * scale);

    SUBCASE("3d as well") {
        Grid g3(3, 8);
        SpectralScalar f3 = oracle::random_hermitian_scalar(g3, 2, 12);
        std::vector<double> phys3 = inverse_transform(f3);
        auto direct3 = oracle::forward_dft(phys3, g3);
        SpectralScalar back3 = forward_transform(phys3, g3);
        double err3 = 0.0, scale3 = 0.0;
        for (std::size_t i = 0; i < g3.size(); ++i) {
            err3 = std::max(err3, std::abs(back3[i] - direct3[i]));
            scale3 = std::max(scale3, std::abs(direct3[i]));
        }
        CHECK(err3 < 1e-12 * scale3);
    }
}

TEST_CASE("round trip is the identity to 1e-12 relative") {
    for (int d : {2, 3}) {
        Grid g(d, 16);
        SpectralScalar f = oracle::random_hermitian_scalar(g, g.dealias_cutoff(), 21 + d);
        SpectralScalar rt = forward_transform(inverse_transform(f), g);
        double err = 0.0, scale = 0.0;
        g.for_modes([&](std::size_t flat, int, int, int) {
            err = std::max(err, std::abs(rt[flat] - f[flat]));
            scale = std::max(scale, std::abs(f[flat]));
        });
        CHECK(err < 1e-12 * scale);
    }
}

TEST_CASE("Parseval: spectral sum equals physical quadrature") {
    Grid g(2, 32);
    SpectralScalar f = oracle::random_hermitian_scalar(g, g.dealias_cutoff(), 31);
    double spec = 0.0;
    g.for_modes([&](std::size_t flat, int, int, int) { spec += std::norm(f[flat]); });
    auto phys = inverse_transform(f);
    double quad = 0.0;
    for (double v : phys) quad += v * v;
    quad *= g.cell_volume();
    CHECK(spec == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("forward transform output is exactly Hermitian") {
    Grid g(2, 16);
    std::vector<double> f(g.size());
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    for (auto& v : f) v = gauss(rng);
    SpectralScalar s = forward_transform(f, g);
    CHECK(hermitian_asymmetry(s) == 0.0);
}

TEST_CASE("fractional laplacian scales the sqrt(2) shell by sqrt(2)") {
    Grid g(2, 16);
    SpectralScalar f(g);
    f.at_mode({1, 1, 0}) = cplx{0.5, 0.25};
    f.at_mode({-1, -1, 0}) = std::conj(f.at_mode({1, 1, 0}));
    SpectralScalar out = fractional_laplacian(f, 1.0);
    CHECK(std::abs(out.at_mode({1, 1, 0}) - std::sqrt(2.0) * f.at_mode({1, 1, 0})) < 1e-15);
    CHECK(std::abs(out.at_mode({-1, -1, 0}) - std::sqrt(2.0) * f.at_mode({-1, -1, 0})) < 1e-15);
}

TEST_CASE("fractional laplacian: gamma = 0 is the identity on zero-mean fields") {
    Grid g(2, 16);
    SpectralScalar f = oracle::random_hermitian_scalar(g, 4, 41);
    SpectralScalar out = fractional_laplacian(f, 0.0);
    g.for_modes([&](std::size_t flat, int, int, int) { CHECK(out[flat] == f[flat]); });
}

TEST_CASE("riesz potential inverts the laplacian power on zero-mean fields") {
    Grid g(2, 16);
    SpectralScalar f = oracle::random_hermitian_scalar(g, 4, 43);
    SpectralScalar rt = fractional_laplacian(fractional_laplacian(f, 0.7), -0.7);
    double err = 0.0, scale = 0.0;
    g.for_modes([&](std::size_t flat, int, int, int) {
        err = std::max(err, std::abs(rt[flat] - f[flat]));
        scale = std::max(scale, std::abs(f[flat]));
    });
    CHECK(err < 1e-12 * scale);
}

TEST_CASE("negative order on nonzero mean is rejected") {
    Grid g(2, 16);
    SpectralScalar f(g);
    f.at_mode({0, 0, 0}) = cplx{1.0, 0.0};
    CHECK_THROWS_AS(fractional_laplacian(f, -1.0), NegativeOrderOnNonzeroMean);
}

TEST_CASE("laplacian powers compose: gamma1 then gamma2 equals gamma1+gamma2") {
    Grid g(2, 16);
    SpectralScalar f = oracle::random_hermitian_scalar(g, 5, 47);
    SpectralScalar a = fractional_laplacian(fractional_laplacian(f, 0.6), 0.9);
    SpectralScalar b = fractional_laplacian(f, 1.5);
    double err = 0.0, scale = 0.0;
    g.for_modes([&](std::size_t flat, int, int, int) {
        err = std::max(err, std::abs(a[flat] - b[flat]));
        scale = std::max(scale, std::abs(b[flat]));
    });
    CHECK(err < 1e-12 * scale);
}

TEST_CASE("leray projection annihilates gradients") {
    Grid g(2, 16);
    // v = grad(sin(x1+x2)): phi_hat(+-(1,1)) = -+ i pi, v_hat = i k phi_hat.
    SpectralScalar phi(g);
    phi.at_mode({1, 1, 0}) = cplx{0.0, -PI};
    phi.at_mode({-1, -1, 0}) = cplx{0.0, PI};
    SpectralVectorField v(g);
    for (int ax = 0; ax < 2; ++ax) v.component(ax) = derivative(phi, ax);
    SpectralVectorField pv = leray_project(v);
    CHECK(max_abs_coeff(pv) < 1e-14 * max_abs_coeff(v));
}

TEST_CASE("leray projection fixes divergence-free fields") {
    Grid g(2, 16);
    // (sin x2, 0) is solenoidal.
    SpectralVectorField v(g);
    v.component(0).at_mode({0, 1, 0}) = cplx{0.0, -PI};
    v.component(0).at_mode({0, -1, 0}) = cplx{0.0, PI};
    SpectralVectorField pv = leray_project(v);
    for (int i = 0; i < 2; ++i)
        g.for_modes([&](std::size_t flat, int, int, int) {
            CHECK(std::abs(pv.component(i)[flat] - v.component(i)[flat]) < 1e-14);
        });
}

TEST_CASE("leray projection output has zero divergence mode by mode") {
    for (int d : {2, 3}) {
        Grid g(d, 16);
        SpectralVectorField v = oracle::random_hermitian_field(g, 5, 53 + d);
        SpectralVectorField pv = leray_project(v);
        CHECK(relative_divergence(pv) < 1e-14);
        SUBCASE("idempotent") {
            SpectralVectorField ppv = leray_project(pv);
            double err = 0.0;
            for (int i = 0; i < d; ++i)
                g.for_modes([&](std::size_t flat, int, int, int) {
                    err = std::max(err,
                                   std::abs(ppv.component(i)[flat] - pv.component(i)[flat]));
                });
            CHECK(err < 1e-14 * max_abs_coeff(pv));
        }
        SUBCASE("L2 contraction") {
            double before = 0.0, after = 0.0;
            for (int i = 0; i < d; ++i)
                g.for_modes([&](std::size_t flat, int, int, int) {
                    before += std::norm(v.component(i)[flat]);
                    after += std::norm(pv.component(i)[flat]);
                });
            CHECK(after <= before * (1.0 + 1e-14));
        }
    }
}

TEST_CASE("leray projection requires zero mean") {
    Grid g(2, 16);
    SpectralVectorField v(g);
    v.component(0).at_mode({0, 0, 0}) = cplx{1.0, 0.0};
    CHECK_THROWS_AS(leray_project(v), NonzeroMean);
}

TEST_CASE("dealias zeroes exactly the modes beyond floor(n/3)") {
    Grid g(2, 16);
    CHECK(g.dealias_cutoff() == 5);
    SpectralScalar f(g);
    f.at_mode({5, 0, 0}) = cplx{1.0, 0.0};   // retained
    f.at_mode({6, 0, 0}) = cplx{1.0, 0.0};   // zeroed
    f.at_mode({8, 0, 0}) = cplx{1.0, 0.0};   // Nyquist, zeroed
    f.at_mode({0, -5, 0}) = cplx{2.0, 0.0};  // retained
    SpectralScalar out = dealias(f);
    CHECK(out.at_mode({5, 0, 0}) == cplx{1.0, 0.0});
    CHECK(out.at_mode({6, 0, 0}) == cplx{0.0, 0.0});
    CHECK(out.at_mode({8, 0, 0}) == cplx{0.0, 0.0});
    CHECK(out.at_mode({0, -5, 0}) == cplx{2.0, 0.0});
}

TEST_CASE("div tensor of two single modes matches the hand convolution") {
    Grid g(2, 16);
    // a = (0, cos x1), c = (sin x2, 0):
    // Div(a (x) c) = (d2(cos x1 sin x2), 0) = (cos x1 cos x2, 0).
    SpectralVectorField a(g), c(g);
    a.component(1).at_mode({1, 0, 0}) = cplx{PI, 0.0};
    a.component(1).at_mode({-1, 0, 0}) = cplx{PI, 0.0};
    c.component(0).at_mode({0, 1, 0}) = cplx{0.0, -PI};
    c.component(0).at_mode({0, -1, 0}) = cplx{0.0, PI};
    SpectralVectorField out = nonlinear_div_tensor(a, c);
    oracle::ModeMap expect;
    const double quarter = PI / 2.0;  // (2pi)^{d/2} / 4 on each of the four corners
    expect[{1, 1, 0}] = cplx{quarter, 0.0};
    expect[{1, -1, 0}] = cplx{quarter, 0.0};
    expect[{-1, 1, 0}] = cplx{quarter, 0.0};
    expect[{-1, -1, 0}] = cplx{quarter, 0.0};
    CHECK(oracle::max_mode_error(out.component(0), expect) < 1e-13);
    CHECK(max_abs_coeff(out) == doctest::Approx(quarter).epsilon(1e-13));
    double c1max = 0.0;
    g.for_modes([&](std::size_t flat, int, int, int) {
        c1max = std::max(c1max, std::abs(out.component(1)[flat]));
    });
    CHECK(c1max < 1e-14);
}

TEST_CASE("div tensor equals the lattice-convolution oracle and is alias-free") {
    for (int d : {2, 3}) {
        Grid g(d, 16);
        SpectralVectorField a = oracle::random_hermitian_field(g, g.dealias_cutoff(), 61 + d);
        SpectralVectorField c = oracle::random_hermitian_field(g, g.dealias_cutoff(), 71 + d);
        SpectralVectorField out = nonlinear_div_tensor(a, c);
        auto expect = oracle::div_tensor(a, c, g.dealias_cutoff());
        double scale = max_abs_coeff(out) + 1e-30;
        for (int j = 0; j < d; ++j)
            CHECK(oracle::max_mode_error(out.component(j), expect[j]) < 1e-12 * scale);
    }
}

TEST_CASE("div tensor vanishes for the shear configuration") {
    Grid g(2, 16);
    SpectralVectorField a(g);
    a.component(0).at_mode({0, 1, 0}) = cplx{0.0, -PI};
    a.component(0).at_mode({0, -1, 0}) = cplx{0.0, PI};
    SpectralVectorField out = nonlinear_div_tensor(a, a);
    CHECK(max_abs_coeff(out) < 1e-14);
}

TEST_CASE("div tensor of zero fields is zero") {
    Grid g(2, 16);
    SpectralVectorField z(g);
    SpectralVectorField out = nonlinear_div_tensor(z, z);
    CHECK(max_abs_coeff(out) == 0.0);
}

TEST_CASE("symmetric and antisymmetric fused products agree with the general op") {
    for (int d : {2, 3}) {
        Grid g(d, 16);
        SpectralVectorField b = oracle::random_hermitian_field(g, g.dealias_cutoff(), 81 + d);
        SpectralVectorField u = oracle::random_hermitian_field(g, g.dealias_cutoff(), 91 + d);
        SpectralVectorField sym = div_tensor_symmetric(b);
        SpectralVectorField ref = nonlinear_div_tensor(b, b);
        double scale = max_abs_coeff(ref) + 1e-30;
        for (int j = 0; j < d; ++j)
            g.for_modes([&](std::size_t flat, int, int, int) {
                CHECK(std::abs(sym.component(j)[flat] - ref.component(j)[flat]) <
                      1e-12 * scale);
            });
        SpectralVectorField anti = div_tensor_antisymmetric(b, u);
        SpectralVectorField ref1 = nonlinear_div_tensor(b, u);
        SpectralVectorField ref2 = nonlinear_div_tensor(u, b);
        double scale2 = max_abs_coeff(ref1) + max_abs_coeff(ref2) + 1e-30;
        for (int j = 0; j < d; ++j)
            g.for_modes([&](std::size_t flat, int, int, int) {
                cplx want = ref1.component(j)[flat] - ref2.component(j)[flat];
                CHECK(std::abs(anti.component(j)[flat] - want) < 1e-12 * scale2);
            });
    }
}

TEST_CASE("derivative multiplier differentiates single modes") {
    Grid g(2, 16);
    SpectralScalar f(g);
    f.at_mode({0, 3, 0}) = cplx{1.0, 0.0};
    f.at_mode({0, -3, 0}) = cplx{1.0, 0.0};
    SpectralScalar df = derivative(f, 1);
    CHECK(std::abs(df.at_mode({0, 3, 0}) - cplx{0.0, 3.0}) < 1e-15);
    CHECK(std::abs(df.at_mode({0, -3, 0}) - cplx{0.0, -3.0}) < 1e-15);
    SpectralScalar dx = derivative(f, 0);
    CHECK(max_abs_coeff([&] {
              SpectralVectorField w(g);
              w.component(0) = dx;
              return w;
          }()) == 0.0);
}

TEST_CASE("curl of a single-mode Beltrami field is the field itself") {
    Grid g(3, 16);
    // b = (0, sin x1, cos x1) satisfies curl b = b.
    SpectralVectorField b(g);
    const double half = std::pow(2.0 * M_PI, 1.5) / 2.0;
    b.component(1).at_mode({1, 0, 0}) = cplx{0.0, -half};
    b.component(1).at_mode({-1, 0, 0}) = cplx{0.0, half};
    b.component(2).at_mode({1, 0, 0}) = cplx{half, 0.0};
    b.component(2).at_mode({-1, 0, 0}) = cplx{half, 0.0};
    SpectralVectorField cb = curl3(b);
    double err = 0.0;
    for (int i = 0; i < 3; ++i)
        g.for_modes([&](std::size_t flat, int, int, int) {
            err = std::max(err, std::abs(cb.component(i)[flat] - b.component(i)[flat]));
        });
    CHECK(err < 1e-13);
    CHECK(relative_divergence(b) < 1e-14);
}

TEST_CASE("operations keep real fields real") {
    Grid g(2, 16);
    SpectralVectorField v = oracle::random_hermitian_field(g, 5, 101);
    SpectralVectorField w = nonlinear_div_tensor(v, leray_project(v));
    for (int i = 0; i < 2; ++i) CHECK(hermitian_asymmetry(w.component(i)) < 1e-11);
    // Physical image of a Hermitian spectrum has no imaginary leak: transform
    // back and forth and compare.
    SpectralScalar rt = forward_transform(inverse_transform(w.component(0)), g);
    double err = 0.0;
    g.for_modes([&](std::size_t flat, int, int, int) {
        err = std::max(err, std::abs(rt[flat] - w.component(0)[flat]));
    });
    CHECK(err < 1e-11 * (max_abs_coeff(w) + 1e-30));
}
