#include "smag/spectral.hpp"

#include <fftw3.h>
#if defined(__GLIBC__) || defined(__linux__)
#include <malloc.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "smag/errors.hpp"

namespace smag {

namespace {

// Cached FFTW plans per (d, n). Transforms execute through r2c/c2r on the
// workspace buffers; the full-spectrum storage contract is restored by
// explicit mirroring, which also makes Hermitian symmetry exact.
struct FftWorkspace {
    Grid grid;
    std::size_t half_size = 0;  // n^{d-1} * (n/2 + 1)
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    std::mutex mtx;

    explicit FftWorkspace(const Grid& g) : grid(g) {
        const int n = g.n;
        half_size = (g.d == 2 ? std::size_t(n) : std::size_t(n) * n) * (n / 2 + 1);
        real_buf = fftw_alloc_real(g.size());
        cplx_buf = fftw_alloc_complex(half_size);
        int dims[3] = {n, n, n};
        // FFTW_ESTIMATE keeps plan selection deterministic across runs.
        r2c = fftw_plan_dft_r2c(g.d, dims, real_buf, cplx_buf, FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r(g.d, dims, cplx_buf, real_buf, FFTW_ESTIMATE);
    }
    ~FftWorkspace() {
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
        fftw_free(real_buf);
        fftw_free(cplx_buf);
    }

    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;
};

FftWorkspace& workspace_for(const Grid& g) {
    static std::mutex registry_mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<FftWorkspace>> registry;
#if defined(__GLIBC__)
    // Coefficient blocks run to megabytes and are allocated and freed once per
    // stage; raising the mmap threshold keeps them on the heap so freed blocks
    // recycle without fresh page faults. Allocator policy only, values untouched.
    static const bool malloc_tuned = [] {
        mallopt(M_MMAP_THRESHOLD, 256 * 1024 * 1024);
        mallopt(M_TRIM_THRESHOLD, 256 * 1024 * 1024);
        return true;
    }();
    (void)malloc_tuned;
#endif
    std::lock_guard<std::mutex> lock(registry_mtx);
    auto key = std::make_pair(g.d, g.n);
    auto it = registry.find(key);
    if (it == registry.end())
        it = registry.emplace(key, std::make_unique<FftWorkspace>(g)).first;
    return *it->second;
}

inline std::complex<double> cload(const fftw_complex& c) { return {c[0], c[1]}; }

}  // namespace

SpectralScalar forward_transform(const std::vector<double>& field, const Grid& grid) {
    if (field.size() != grid.size())
        throw DimensionMismatch("forward_transform: array length != n^d");
    FftWorkspace& ws = workspace_for(grid);
    std::lock_guard<std::mutex> lock(ws.mtx);

    std::memcpy(ws.real_buf, field.data(), sizeof(double) * field.size());
    fftw_execute(ws.r2c);

    SpectralScalar out(grid);
    const int n = grid.n;
    const int h = n / 2 + 1;
    const double scale = std::pow(2.0 * M_PI, grid.d / 2.0) / std::pow(double(n), grid.d);
    const std::size_t planes = grid.d == 2 ? std::size_t(n) : std::size_t(n) * n;

    // Lower half (last-axis index iz <= n/2) copied, upper half mirrored so
    // c(-k) = conj(c(k)) holds exactly for interior iz.
    for (std::size_t p = 0; p < planes; ++p) {
        const std::size_t row_out = p * n;
        const std::size_t row_in = p * h;
        // mirror plane index for the leading axes
        std::size_t pm;
        if (grid.d == 2) {
            const std::size_t i0 = p;
            pm = i0 == 0 ? 0 : std::size_t(n) - i0;
        } else {
            const std::size_t i0 = p / n, i1 = p % n;
            const std::size_t m0 = i0 == 0 ? 0 : std::size_t(n) - i0;
            const std::size_t m1 = i1 == 0 ? 0 : std::size_t(n) - i1;
            pm = m0 * n + m1;
        }
        for (int iz = 0; iz < h; ++iz)
            out[row_out + iz] = scale * cload(ws.cplx_buf[row_in + iz]);
        for (int iz = h; iz < n; ++iz)
            out[row_out + iz] = std::conj(scale * cload(ws.cplx_buf[pm * h + (n - iz)]));
    }

    // The iz = 0 and iz = n/2 planes carry their own conjugate pairing across
    // the leading axes; canonicalize so symmetry is exact there too.
    for (int iz : {0, n / 2}) {
        for (std::size_t p = 0; p < planes; ++p) {
            std::size_t pm;
            if (grid.d == 2) {
                pm = p == 0 ? 0 : std::size_t(n) - p;
            } else {
                const std::size_t i0 = p / n, i1 = p % n;
                const std::size_t m0 = i0 == 0 ? 0 : std::size_t(n) - i0;
                const std::size_t m1 = i1 == 0 ? 0 : std::size_t(n) - i1;
                pm = m0 * n + m1;
            }
            if (p == pm) {
                auto& c = out[p * n + iz];
                c = {c.real(), 0.0};
            } else if (p > pm) {
                out[p * n + iz] = std::conj(out[pm * std::size_t(n) + iz]);
            }
        }
    }
    return out;
}

std::vector<double> inverse_transform(const SpectralScalar& f) {
    const Grid& grid = f.grid();
    FftWorkspace& ws = workspace_for(grid);
    std::lock_guard<std::mutex> lock(ws.mtx);

    const int n = grid.n;
    const int h = n / 2 + 1;
    const double scale = std::pow(2.0 * M_PI, -grid.d / 2.0);
    const std::size_t planes = grid.d == 2 ? std::size_t(n) : std::size_t(n) * n;
    for (std::size_t p = 0; p < planes; ++p)
        for (int iz = 0; iz < h; ++iz) {
            const std::complex<double> v = scale * f[p * n + iz];
            ws.cplx_buf[p * h + iz][0] = v.real();
            ws.cplx_buf[p * h + iz][1] = v.imag();
        }
    fftw_execute(ws.c2r);
    return std::vector<double>(ws.real_buf, ws.real_buf + grid.size());
}

SpectralVectorField forward_transform_field(const std::vector<std::vector<double>>& comps,
                                            const Grid& grid) {
    if (static_cast<int>(comps.size()) != grid.d)
        throw DimensionMismatch("forward_transform_field: wrong component count");
    SpectralVectorField out(grid);
    for (int i = 0; i < grid.d; ++i) out.component(i) = forward_transform(comps[i], grid);
    return out;
}

std::vector<std::vector<double>> inverse_transform_field(const SpectralVectorField& v) {
    std::vector<std::vector<double>> out;
    out.reserve(v.components());
    for (int i = 0; i < v.components(); ++i) out.push_back(inverse_transform(v.component(i)));
    return out;
}

SpectralScalar fractional_laplacian(const SpectralScalar& f, double gamma) {
    const Grid& g = f.grid();
    if (gamma < 0.0) {
        const double mean = std::abs(f[g.flat_of_mode({0, 0, 0})]);
        double scale = 0.0;
        g.for_modes([&](std::size_t flat, int, int, int) {
            scale = std::max(scale, std::abs(f[flat]));
        });
        if (mean > 1e-12 * scale)
            throw NegativeOrderOnNonzeroMean("fractional_laplacian: gamma < 0 needs zero mean");
    }
    SpectralScalar out(g);
    if (gamma == 0.0) {
        out = f;
        return out;
    }
    const double half = gamma / 2.0;
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const double k2n = double(k0) * k0 + double(k1) * k1 + double(k2) * k2;
        out[flat] = k2n == 0.0 ? std::complex<double>{0.0, 0.0} : std::pow(k2n, half) * f[flat];
    });
    return out;
}

SpectralVectorField fractional_laplacian(const SpectralVectorField& v, double gamma) {
    SpectralVectorField out(v.grid());
    for (int i = 0; i < v.components(); ++i)
        out.component(i) = fractional_laplacian(v.component(i), gamma);
    return out;
}

SpectralVectorField leray_project(const SpectralVectorField& v) {
    const Grid& g = v.grid();
    const int d = g.d;
    double mean = 0.0;
    const std::size_t zero_flat = g.flat_of_mode({0, 0, 0});
    for (int i = 0; i < d; ++i) mean = std::max(mean, std::abs(v.component(i)[zero_flat]));
    const double scale = max_abs_coeff(v);
    if (mean > 1e-12 * scale) throw NonzeroMean("leray_project: input must have zero mean");

    SpectralVectorField out = v;
    for (int i = 0; i < d; ++i) out.component(i)[zero_flat] = {0.0, 0.0};
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const double k2n = double(k0) * k0 + double(k1) * k1 + double(k2) * k2;
        if (k2n == 0.0) return;
        std::complex<double> dot = double(k0) * out.component(0)[flat];
        dot += double(k1) * out.component(1)[flat];
        if (d == 3) dot += double(k2) * out.component(2)[flat];
        dot /= k2n;
        out.component(0)[flat] -= double(k0) * dot;
        out.component(1)[flat] -= double(k1) * dot;
        if (d == 3) out.component(2)[flat] -= double(k2) * dot;
    });
    return out;
}

void dealias_in_place(SpectralScalar& f) {
    const Grid& g = f.grid();
    const int cut = g.dealias_cutoff();
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        if (std::abs(k0) > cut || std::abs(k1) > cut || std::abs(k2) > cut)
            f[flat] = {0.0, 0.0};
    });
}

void dealias_in_place(SpectralVectorField& v) {
    for (int i = 0; i < v.components(); ++i) dealias_in_place(v.component(i));
}

SpectralScalar dealias(const SpectralScalar& f) {
    SpectralScalar out = f;
    dealias_in_place(out);
    return out;
}

SpectralVectorField dealias(const SpectralVectorField& v) {
    SpectralVectorField out = v;
    dealias_in_place(out);
    return out;
}

SpectralScalar derivative(const SpectralScalar& f, int axis) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.d) throw DimensionMismatch("derivative: bad axis");
    SpectralScalar out(g);
    const int nyq = g.n / 2;
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const int k = axis == 0 ? k0 : axis == 1 ? k1 : k2;
        // Nyquist mode has no well-defined odd derivative; zero keeps realness.
        out[flat] = k == nyq ? std::complex<double>{0.0, 0.0}
                             : std::complex<double>{0.0, double(k)} * f[flat];
    });
    return out;
}

SpectralScalar divergence(const SpectralVectorField& v) {
    const Grid& g = v.grid();
    SpectralScalar out(g);
    const int nyq = g.n / 2;
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        std::complex<double> acc{0.0, 0.0};
        const int ks[3] = {k0, k1, k2};
        for (int i = 0; i < g.d; ++i)
            if (ks[i] != nyq) acc += std::complex<double>{0.0, double(ks[i])} * v.component(i)[flat];
        out[flat] = acc;
    });
    return out;
}

SpectralVectorField curl3(const SpectralVectorField& v) {
    const Grid& g = v.grid();
    if (g.d != 3) throw WrongDimension("curl3: d must be 3");
    SpectralVectorField out(g);
    const int nyq = g.n / 2;
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const double kk0 = k0 == nyq ? 0.0 : double(k0);
        const double kk1 = k1 == nyq ? 0.0 : double(k1);
        const double kk2 = k2 == nyq ? 0.0 : double(k2);
        const std::complex<double> i{0.0, 1.0};
        const auto v0 = v.component(0)[flat], v1 = v.component(1)[flat], v2 = v.component(2)[flat];
        out.component(0)[flat] = i * (kk1 * v2 - kk2 * v1);
        out.component(1)[flat] = i * (kk2 * v0 - kk0 * v2);
        out.component(2)[flat] = i * (kk0 * v1 - kk1 * v0);
    });
    return out;
}

namespace {

// Accumulates out_j += d_j-less form: out[j] += ik_i * spec for one (i, j)
// pair, skipping the Nyquist line on axis i.
void accumulate_derivative(SpectralVectorField& out, int j, int axis, const SpectralScalar& spec) {
    const Grid& g = out.grid();
    const int nyq = g.n / 2;
    SpectralScalar& tgt = out.component(j);
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        const int k = axis == 0 ? k0 : axis == 1 ? k1 : k2;
        if (k == nyq) return;
        tgt[flat] += std::complex<double>{0.0, double(k)} * spec[flat];
    });
}

std::vector<double> pointwise_product(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

}  // namespace

SpectralVectorField div_tensor_symmetric_phys(const std::vector<std::vector<double>>& pb,
                                              const Grid& g) {
    const int d = g.d;
    SpectralVectorField out(g);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            SpectralScalar pij = forward_transform(pointwise_product(pb[i], pb[j]), g);
            accumulate_derivative(out, j, i, pij);
            if (i != j) accumulate_derivative(out, i, j, pij);
        }
    dealias_in_place(out);
    return out;
}

SpectralVectorField div_tensor_antisymmetric_phys(const std::vector<std::vector<double>>& pb,
                                                   const std::vector<std::vector<double>>& pu,
                                                   const Grid& g) {
    const int d = g.d;
    SpectralVectorField out(g);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            // m_ij = b_i u_j - u_i b_j; m_ji = -m_ij, diagonal vanishes.
            std::vector<double> m(g.size());
            for (std::size_t x = 0; x < g.size(); ++x) m[x] = pb[i][x] * pu[j][x] - pu[i][x] * pb[j][x];
            SpectralScalar mij = forward_transform(m, g);
            accumulate_derivative(out, j, i, mij);
            SpectralScalar mji(g);
            g.for_modes([&](std::size_t flat, int, int, int) { mji[flat] = -mij[flat]; });
            accumulate_derivative(out, i, j, mji);
        }
    dealias_in_place(out);
    return out;
}

SpectralVectorField nonlinear_div_tensor(const SpectralVectorField& a,
                                         const SpectralVectorField& c) {
    const Grid& g = a.grid();
    if (g != c.grid()) throw GridMismatch("nonlinear_div_tensor: grids differ");
    const int d = g.d;
    auto pa = inverse_transform_field(a);
    auto pc = inverse_transform_field(c);
    SpectralVectorField out(g);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            SpectralScalar pij = forward_transform(pointwise_product(pa[i], pc[j]), g);
            accumulate_derivative(out, j, i, pij);
        }
    dealias_in_place(out);
    return out;
}

SpectralVectorField div_tensor_symmetric(const SpectralVectorField& b) {
    return div_tensor_symmetric_phys(inverse_transform_field(b), b.grid());
}

SpectralVectorField div_tensor_antisymmetric(const SpectralVectorField& b,
                                             const SpectralVectorField& u) {
    if (b.grid() != u.grid()) throw GridMismatch("div_tensor_antisymmetric: grids differ");
    return div_tensor_antisymmetric_phys(inverse_transform_field(b),
                                         inverse_transform_field(u), b.grid());
}

double max_abs_coeff(const SpectralVectorField& v) {
    double m = 0.0;
    for (int i = 0; i < v.components(); ++i) {
        const SpectralScalar& c = v.component(i);
        for (std::size_t x = 0; x < c.size(); ++x) m = std::max(m, std::abs(c[x]));
    }
    return m;
}

double relative_divergence(const SpectralVectorField& v) {
    const Grid& g = v.grid();
    double div_max = 0.0, coeff_max = 0.0;
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        std::complex<double> dot = double(k0) * v.component(0)[flat];
        dot += double(k1) * v.component(1)[flat];
        double mag2 = std::norm(v.component(0)[flat]) + std::norm(v.component(1)[flat]);
        if (g.d == 3) {
            dot += double(k2) * v.component(2)[flat];
            mag2 += std::norm(v.component(2)[flat]);
        }
        div_max = std::max(div_max, std::abs(dot));
        coeff_max = std::max(coeff_max, std::sqrt(mag2));
    });
    return coeff_max == 0.0 ? 0.0 : div_max / coeff_max;
}

double hermitian_asymmetry(const SpectralScalar& f) {
    const Grid& g = f.grid();
    double asym = 0.0, scale = 0.0;
    g.for_modes([&](std::size_t flat, int k0, int k1, int k2) {
        scale = std::max(scale, std::abs(f[flat]));
        const std::complex<double> mirror = f[g.flat_of_mode({-k0, -k1, -k2})];
        asym = std::max(asym, std::abs(mirror - std::conj(f[flat])));
    });
    return scale == 0.0 ? 0.0 : asym / scale;
}

bool all_finite(const SpectralVectorField& v) {
    for (int i = 0; i < v.components(); ++i) {
        const SpectralScalar& c = v.component(i);
        for (std::size_t x = 0; x < c.size(); ++x)
            if (!std::isfinite(c[x].real()) || !std::isfinite(c[x].imag())) return false;
    }
    return true;
}

}  // namespace smag
