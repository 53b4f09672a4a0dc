#include <cmath>
#include <cstdint>

#include "smag/errors.hpp"
#include "smag/fields.hpp"

namespace smag {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Coefficient randomness is a pure function of (seed, mode, component), never
// of iteration order or grid size, so realizations agree across resolutions.
std::uint64_t mode_hash(std::uint64_t seed, int k0, int k1, int k2, int comp, int which) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xffull;
            h *= 1099511628211ull;
        }
    };
    mix(seed);
    mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(k0)));
    mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(k1)));
    mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(k2)));
    mix(static_cast<std::uint64_t>(comp));
    mix(static_cast<std::uint64_t>(which));
    return splitmix64(h);
}

std::complex<double> gaussian_coeff(std::uint64_t seed, int k0, int k1, int k2, int comp) {
    const std::uint64_t h1 = mode_hash(seed, k0, k1, k2, comp, 0);
    const std::uint64_t h2 = mode_hash(seed, k0, k1, k2, comp, 1);
    const double u1 = double((h1 >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = double(h2 >> 11) * 0x1.0p-53;        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

SpectralVectorField build_single_mode(const SingleMode& ic, const Grid& g) {
    if (g.d == 2 && (ic.k[2] != 0 || ic.polarization[2] != 0.0))
        throw DimensionMismatch("single mode: third component unavailable in 2-D");
    if (ic.k[0] == 0 && ic.k[1] == 0 && ic.k[2] == 0)
        throw ConfigError("single mode: wavevector must be nonzero");
    for (int i = 0; i < g.d; ++i)
        if (std::abs(ic.k[i]) > g.n / 2 - 1)
            throw GridMismatch("single mode: wavevector outside the representable band");

    double kdot = 0.0, kmag2 = 0.0, pmag2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        kdot += double(ic.k[i]) * ic.polarization[i];
        kmag2 += double(ic.k[i]) * ic.k[i];
        pmag2 += ic.polarization[i] * ic.polarization[i];
    }
    if (pmag2 == 0.0) throw ConfigError("single mode: polarization must be nonzero");
    if (std::abs(kdot) > 1e-12 * std::sqrt(kmag2 * pmag2))
        throw NonDivergenceFreeInput("single mode: polarization must be orthogonal to k");

    SpectralVectorField b(g);
    const double a = ic.amplitude * std::pow(2.0 * M_PI, g.d / 2.0) / 2.0;
    for (int i = 0; i < g.d; ++i) {
        b.component(i).at_mode({ic.k[0], ic.k[1], ic.k[2]}) = {0.0, -a * ic.polarization[i]};
        b.component(i).at_mode({-ic.k[0], -ic.k[1], -ic.k[2]}) = {0.0, a * ic.polarization[i]};
    }
    return b;
}

SpectralVectorField build_abc(const ABC& ic, const Grid& g) {
    if (g.d != 3) throw DimensionMismatch("ABC flow requires d = 3");
    SpectralVectorField b(g);
    const double s = std::pow(2.0 * M_PI, 1.5) / 2.0;
    auto put_sin = [&](int comp, std::array<int, 3> k, double amp) {
        b.component(comp).at_mode(k) = {0.0, -amp * s};
        b.component(comp).at_mode({-k[0], -k[1], -k[2]}) = {0.0, amp * s};
    };
    auto put_cos = [&](int comp, std::array<int, 3> k, double amp) {
        b.component(comp).at_mode(k) = {amp * s, 0.0};
        b.component(comp).at_mode({-k[0], -k[1], -k[2]}) = {amp * s, 0.0};
    };
    put_sin(0, {0, 0, 1}, ic.A);
    put_cos(0, {0, 1, 0}, ic.C);
    put_sin(1, {1, 0, 0}, ic.B);
    put_cos(1, {0, 0, 1}, ic.A);
    put_sin(2, {0, 1, 0}, ic.C);
    put_cos(2, {1, 0, 0}, ic.B);
    return b;
}

SpectralVectorField build_orszag_tang(const Grid& g) {
    if (g.d != 2) throw DimensionMismatch("Orszag-Tang-like field requires d = 2");
    SpectralVectorField b(g);
    b.component(0).at_mode({0, 1, 0}) = {0.0, M_PI};
    b.component(0).at_mode({0, -1, 0}) = {0.0, -M_PI};
    b.component(1).at_mode({2, 0, 0}) = {0.0, -M_PI};
    b.component(1).at_mode({-2, 0, 0}) = {0.0, M_PI};
    return b;
}

SpectralVectorField build_random(const RandomBandLimited& ic, const Grid& g) {
    if (ic.k_min < 1 || ic.k_max < ic.k_min)
        throw InvalidExponent("random band: need 1 <= k_min <= k_max");
    if (ic.k_max > g.n / 2 - 1) throw GridMismatch("random band: shell exceeds the grid");

    SpectralVectorField b(g);
    const long lo2 = long(ic.k_min) * ic.k_min;
    const long hi2 = long(ic.k_max) * ic.k_max;
    g.for_modes([&](std::size_t, int k0, int k1, int k2) {
        const bool canonical = k0 > 0 || (k0 == 0 && (k1 > 0 || (k1 == 0 && k2 > 0)));
        if (!canonical) return;
        const long kk = long(k0) * k0 + long(k1) * k1 + long(k2) * k2;
        if (kk < lo2 || kk > hi2) return;
        for (int i = 0; i < g.d; ++i) {
            const std::complex<double> c = gaussian_coeff(ic.seed, k0, k1, k2, i);
            b.component(i).at_mode({k0, k1, k2}) = c;
            b.component(i).at_mode({-k0, -k1, -k2}) = std::conj(c);
        }
    });

    b = leray_project(b);
    const double nr = norm(b, NormRequest::sobolev(ic.s));
    if (nr == 0.0) throw NumericError("random band: degenerate realization");
    const double scale = ic.target_norm / nr;
    for (int i = 0; i < g.d; ++i)
        for (std::size_t x = 0; x < b.component(i).size(); ++x) b.component(i)[x] *= scale;
    return b;
}

}  // namespace

SpectralVectorField make_initial(const InitialCondition& ic, const Grid& grid) {
    return std::visit(
        [&grid](const auto& recipe) -> SpectralVectorField {
            using T = std::decay_t<decltype(recipe)>;
            if constexpr (std::is_same_v<T, SingleMode>) return build_single_mode(recipe, grid);
            if constexpr (std::is_same_v<T, ABC>) return build_abc(recipe, grid);
            if constexpr (std::is_same_v<T, OrszagTangLike>) return build_orszag_tang(grid);
            if constexpr (std::is_same_v<T, RandomBandLimited>) return build_random(recipe, grid);
        },
        ic);
}

}  // namespace smag
