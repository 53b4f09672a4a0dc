#include "smag/stokes.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "smag/errors.hpp"

namespace smag {

namespace {

// One multiplier table per (grid, alpha, nu); shared so the stepper's
// velocity agrees bitwise with standalone solves.
std::shared_ptr<const std::vector<double>> velocity_multiplier(const Grid& g,
                                                               const StokesConfig& cfg) {
    using Key = std::tuple<int, int, double, double>;
    static std::mutex mtx;
    static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    const Key key{g.d, g.n, cfg.alpha, cfg.nu};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto table = std::make_shared<std::vector<double>>(g.size(), 0.0);
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const double k2n = double(k0) * k0 + double(k1) * k1 + double(k2) * k2;
        if (k2n > 0.0) (*table)[flat] = std::pow(k2n, -cfg.alpha) / cfg.nu;
    });
    cache.emplace(key, table);
    return table;
}

void validate(const StokesConfig& cfg) {
    if (!(cfg.nu > 0.0)) throw ConfigError("stokes: nu must be positive");
    if (!(cfg.alpha >= 0.0)) throw InvalidExponent("stokes: alpha must be nonnegative");
}

void validate_input(const SpectralVectorField& b) {
    const double scale = max_abs_coeff(b);
    if (scale == 0.0) return;
    const std::size_t zero = b.grid().flat_of_mode({0, 0, 0});
    for (int i = 0; i < b.components(); ++i)
        if (std::abs(b.component(i)[zero]) > 1e-12 * scale)
            throw NonzeroMean("stokes: input must have zero mean");
    if (relative_divergence(b) > 1e-10)
        throw NonDivergenceFreeInput("stokes: input must be divergence-free");
}

}  // namespace

SpectralVectorField velocity_from_tensor_divergence(const SpectralVectorField& t,
                                                    const StokesConfig& cfg) {
    validate(cfg);
    const Grid& g = t.grid();
    auto mult = velocity_multiplier(g, cfg);
    SpectralVectorField u(g);
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const double k2n = double(k0) * k0 + double(k1) * k1 + double(k2) * k2;
        if (k2n == 0.0) return;
        std::complex<double> dot = double(k0) * t.component(0)[flat];
        dot += double(k1) * t.component(1)[flat];
        if (g.d == 3) dot += double(k2) * t.component(2)[flat];
        dot /= k2n;
        const double m = (*mult)[flat];
        u.component(0)[flat] = m * (t.component(0)[flat] - double(k0) * dot);
        u.component(1)[flat] = m * (t.component(1)[flat] - double(k1) * dot);
        if (g.d == 3) u.component(2)[flat] = m * (t.component(2)[flat] - double(k2) * dot);
    });
    return u;
}

SpectralVectorField solve_velocity(const SpectralVectorField& b, const StokesConfig& cfg) {
    validate(cfg);
    validate_input(b);
    return velocity_from_tensor_divergence(div_tensor_symmetric(b), cfg);
}

SpectralScalar recover_pressure(const SpectralVectorField& b, const StokesConfig& cfg) {
    validate(cfg);
    validate_input(b);
    const Grid& g = b.grid();
    SpectralVectorField t = div_tensor_symmetric(b);
    SpectralScalar p(g);
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const double k2n = double(k0) * k0 + double(k1) * k1 + double(k2) * k2;
        if (k2n == 0.0) return;
        std::complex<double> dot = double(k0) * t.component(0)[flat];
        dot += double(k1) * t.component(1)[flat];
        if (g.d == 3) dot += double(k2) * t.component(2)[flat];
        p[flat] = std::complex<double>{0.0, -1.0} * dot / k2n;
    });
    return p;
}

}  // namespace smag
