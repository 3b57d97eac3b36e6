#pragma once

#include <vector>

#include "fjko/fft.hpp"
#include "fjko/grid.hpp"

namespace fjko {

/// DFT coefficients of a real field, unitary in the sense that
/// sobolev_norm_sq(u, 0) equals the continuum integral of u^2 for mean-zero u.
struct SpectralField {
    Grid grid;
    Spectrum coeffs;
};

SpectralField analyze(const Grid& grid, const Field& values);
Field synthesize(const SpectralField& f);

/// |xi|^2 per FFT mode with the physical scaling xi = 2*pi*k/L.
std::vector<double> mode_freq_sq(const Grid& grid);

/// Multiplier of d/dx_axis: i*xi_axis, with the Nyquist mode zeroed so real
/// fields stay real and grad/div remain exact adjoints.
Spectrum deriv_multiplier(const Grid& grid, int axis);

/// (-Laplace)^r as the Fourier multiplier |xi|^{2r}; the zero mode maps to 0
/// for every r, the torus analogue of the mean-zero convention.
Field frac_laplacian(const Grid& grid, const Field& u, double r);

/// Homogeneous Sobolev seminorm squared, sum over nonzero modes of |xi|^{2r} |u_hat|^2.
double sobolev_norm_sq(const Grid& grid, const Field& u, double r);

/// Matching bilinear form; sobolev_inner(u,u,r) == sobolev_norm_sq(u,r).
double sobolev_inner(const Grid& grid, const Field& u, const Field& v, double r);

/// (cell_volume * sum |u|^p)^{1/p}; p = infinity gives max |u|.
double lp_norm(const Grid& grid, const Field& u, double p);

std::vector<Field> gradient(const Grid& grid, const Field& u);
Field divergence(const Grid& grid, const std::vector<Field>& components);

/// u^beta * grad (-Laplace)^{-s} u, the flux whose divergence drives the
/// nonlinear equation. Gradient and inverse fractional Laplacian are spectral,
/// the pointwise power acts in physical space.
std::vector<Field> nonlocal_flux(const Grid& grid, const Field& u, double beta, double s);

/// Evaluate the trigonometric interpolant of a field on another grid with the
/// same d and L (zero-padding / truncation in frequency).
Field resample(const Grid& from, const Field& u, const Grid& to);

}  // namespace fjko
