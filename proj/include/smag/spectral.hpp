#pragma once

#include <complex>
#include <vector>

#include "smag/grid.hpp"

namespace smag {

// Fourier coefficients of a real scalar field with the convention
//   f_hat(k) = (2pi)^{-d/2} int_T^d f(x) e^{-ik.x} dx,
// under which Parseval reads ||f||_L2^2 = sum_k |f_hat(k)|^2.
class SpectralScalar {
public:
    SpectralScalar() = default;
    explicit SpectralScalar(const Grid& g) : grid_(g), c_(g.size(), {0.0, 0.0}) {}

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return c_.size(); }

    std::complex<double>& operator[](std::size_t i) { return c_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return c_[i]; }

    std::complex<double>& at_mode(const std::array<int, 3>& k) { return c_[grid_.flat_of_mode(k)]; }
    const std::complex<double>& at_mode(const std::array<int, 3>& k) const {
        return c_[grid_.flat_of_mode(k)];
    }

    std::complex<double>* data() { return c_.data(); }
    const std::complex<double>* data() const { return c_.data(); }

private:
    Grid grid_;
    std::vector<std::complex<double>> c_;
};

class SpectralVectorField {
public:
    SpectralVectorField() = default;
    explicit SpectralVectorField(const Grid& g) : grid_(g), comps_(g.d, SpectralScalar(g)) {}

    const Grid& grid() const { return grid_; }
    int components() const { return static_cast<int>(comps_.size()); }

    SpectralScalar& component(int i) { return comps_[i]; }
    const SpectralScalar& component(int i) const { return comps_[i]; }

private:
    Grid grid_;
    std::vector<SpectralScalar> comps_;
};

// --- transforms ------------------------------------------------------------

// Physical values on the row-major grid -> coefficients (rectangle rule,
// spectrally exact for band-limited data). Output is exactly Hermitian.
SpectralScalar forward_transform(const std::vector<double>& field, const Grid& grid);

// Coefficients -> physical values. Uses the k3 >= 0 half spectrum; callers
// maintain Hermitian symmetry so this inverts forward_transform.
std::vector<double> inverse_transform(const SpectralScalar& f);

SpectralVectorField forward_transform_field(const std::vector<std::vector<double>>& comps,
                                            const Grid& grid);
std::vector<std::vector<double>> inverse_transform_field(const SpectralVectorField& v);

// --- multipliers and projections -------------------------------------------

// Multiplier |k|^gamma. gamma < 0 requires zero mean; the k = 0 mode maps to
// 0 for gamma != 0 and is preserved for gamma = 0.
SpectralScalar fractional_laplacian(const SpectralScalar& f, double gamma);
SpectralVectorField fractional_laplacian(const SpectralVectorField& v, double gamma);

// Multiplier I - k(x)k/|k|^2 on zero-mean fields; output is divergence-free.
SpectralVectorField leray_project(const SpectralVectorField& v);

// Zeroes every coefficient with any |k_i| > floor(n/3).
SpectralScalar dealias(const SpectralScalar& f);
SpectralVectorField dealias(const SpectralVectorField& v);
void dealias_in_place(SpectralScalar& f);
void dealias_in_place(SpectralVectorField& v);

// d/dx_axis as the ik_axis multiplier; the Nyquist mode is zeroed so real
// fields stay real.
SpectralScalar derivative(const SpectralScalar& f, int axis);

SpectralScalar divergence(const SpectralVectorField& v);
SpectralVectorField curl3(const SpectralVectorField& v);

// --- nonlinear products -----------------------------------------------------

// Div(a (x) c): component j = sum_i d_i(a_i c_j), computed pseudo-spectrally
// and dealiased. Equals (a.grad)c for divergence-free a.
SpectralVectorField nonlinear_div_tensor(const SpectralVectorField& a,
                                         const SpectralVectorField& c);

// Div(b (x) b) using the symmetric product structure (d(d+1)/2 transforms).
SpectralVectorField div_tensor_symmetric(const SpectralVectorField& b);

// Div(b (x) u - u (x) b) using antisymmetry (d(d-1)/2 transforms).
SpectralVectorField div_tensor_antisymmetric(const SpectralVectorField& b,
                                             const SpectralVectorField& u);

// Same products from already-inverted physical components, letting a caller
// that needs both tensors share one set of inverse transforms. Each physical
// array must match the grid layout of inverse_transform.
SpectralVectorField div_tensor_symmetric_phys(const std::vector<std::vector<double>>& phys_b,
                                              const Grid& g);
SpectralVectorField div_tensor_antisymmetric_phys(const std::vector<std::vector<double>>& phys_b,
                                                  const std::vector<std::vector<double>>& phys_u,
                                                  const Grid& g);

// --- diagnostics on raw spectra ---------------------------------------------

double max_abs_coeff(const SpectralVectorField& v);
// max_k |k . v_hat(k)| / max_k |v_hat(k)|; 0 for the zero field.
double relative_divergence(const SpectralVectorField& v);
double hermitian_asymmetry(const SpectralScalar& f);
bool all_finite(const SpectralVectorField& v);

}  // namespace smag
