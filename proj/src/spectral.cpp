#include "fjko/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fjko {

namespace {

void check_s_range(double s, int d) {
    const double cap = std::min(1.0, 0.5 * d);
    if (!(s > 0.0 && s < cap)) throw std::invalid_argument("s must satisfy s < min(1, d/2)");
}

}  // namespace

SpectralField analyze(const Grid& grid, const Field& values) {
    return SpectralField{grid, fft_forward(grid, values)};
}

Field synthesize(const SpectralField& f) { return fft_inverse(f.grid, f.coeffs); }

std::vector<double> mode_freq_sq(const Grid& grid) {
    const double base = 2.0 * std::numbers::pi / grid.length;
    std::vector<double> out(grid.size());
    if (grid.d == 1) {
        for (int k = 0; k < grid.n; ++k) {
            const double x = base * signed_index(k, grid.n);
            out[k] = x * x;
        }
    } else {
        for (int ky = 0; ky < grid.n; ++ky) {
            const double y = base * signed_index(ky, grid.n);
            for (int kx = 0; kx < grid.n; ++kx) {
                const double x = base * signed_index(kx, grid.n);
                out[static_cast<std::size_t>(ky) * grid.n + kx] = x * x + y * y;
            }
        }
    }
    return out;
}

Spectrum deriv_multiplier(const Grid& grid, int axis) {
    if (axis < 0 || axis >= grid.d) throw std::invalid_argument("deriv_multiplier: bad axis");
    const double base = 2.0 * std::numbers::pi / grid.length;
    Spectrum out(grid.size(), Complex(0.0, 0.0));
    auto freq = [&](int k) -> double {
        const int kk = signed_index(k, grid.n);
        if (kk == -grid.n / 2) return 0.0;  // Nyquist zeroed
        return base * kk;
    };
    if (grid.d == 1) {
        for (int k = 0; k < grid.n; ++k) out[k] = Complex(0.0, freq(k));
    } else {
        for (int ky = 0; ky < grid.n; ++ky)
            for (int kx = 0; kx < grid.n; ++kx)
                out[static_cast<std::size_t>(ky) * grid.n + kx] =
                    Complex(0.0, axis == 0 ? freq(kx) : freq(ky));
    }
    return out;
}

Field frac_laplacian(const Grid& grid, const Field& u, double r) {
    if (!(r > -1.0 && r <= 1.0)) throw std::invalid_argument("frac_laplacian: r must lie in (-1, 1]");
    Spectrum c = fft_forward(grid, u);
    const std::vector<double> fsq = mode_freq_sq(grid);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = fsq[i] == 0.0 ? Complex(0.0, 0.0) : c[i] * std::pow(fsq[i], r);
    return fft_inverse(grid, c);
}

double sobolev_norm_sq(const Grid& grid, const Field& u, double r) {
    const Spectrum c = fft_forward(grid, u);
    const std::vector<double> fsq = mode_freq_sq(grid);
    const double vol = grid.d == 1 ? grid.length : grid.length * grid.length;
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (fsq[i] != 0.0) acc += std::pow(fsq[i], r) * std::norm(c[i]);
    return vol * acc;
}

double sobolev_inner(const Grid& grid, const Field& u, const Field& v, double r) {
    const Spectrum cu = fft_forward(grid, u);
    const Spectrum cv = fft_forward(grid, v);
    const std::vector<double> fsq = mode_freq_sq(grid);
    const double vol = grid.d == 1 ? grid.length : grid.length * grid.length;
    double acc = 0.0;
    for (std::size_t i = 0; i < cu.size(); ++i)
        if (fsq[i] != 0.0) acc += std::pow(fsq[i], r) * (cu[i] * std::conj(cv[i])).real();
    return vol * acc;
}

double lp_norm(const Grid& grid, const Field& u, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : u) m = std::max(m, std::abs(x));
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double acc = 0.0;
    for (double x : u) acc += std::pow(std::abs(x), p);
    return std::pow(grid.cell_volume() * acc, 1.0 / p);
}

std::vector<Field> gradient(const Grid& grid, const Field& u) {
    const Spectrum c = fft_forward(grid, u);
    std::vector<Field> out;
    out.reserve(grid.d);
    for (int a = 0; a < grid.d; ++a) {
        const Spectrum mult = deriv_multiplier(grid, a);
        Spectrum ca(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) ca[i] = c[i] * mult[i];
        out.push_back(fft_inverse(grid, ca));
    }
    return out;
}

Field divergence(const Grid& grid, const std::vector<Field>& components) {
    if (static_cast<int>(components.size()) != grid.d)
        throw std::invalid_argument("divergence: component count must equal d");
    Spectrum acc(grid.size(), Complex(0.0, 0.0));
    for (int a = 0; a < grid.d; ++a) {
        const Spectrum c = fft_forward(grid, components[a]);
        const Spectrum mult = deriv_multiplier(grid, a);
        for (std::size_t i = 0; i < c.size(); ++i) acc[i] += c[i] * mult[i];
    }
    return fft_inverse(grid, acc);
}

std::vector<Field> nonlocal_flux(const Grid& grid, const Field& u, double beta, double s) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("nonlocal_flux: beta must lie in (0, 1]");
    check_s_range(s, grid.d);
    double lo = 0.0;
    for (double x : u) lo = std::min(lo, x);
    if (lo < -1e-9) throw std::invalid_argument("nonlocal_flux: negative density beyond tolerance");

    const Field pressure = frac_laplacian(grid, u, -s);
    std::vector<Field> v = gradient(grid, pressure);
    for (int a = 0; a < grid.d; ++a)
        for (std::size_t i = 0; i < v[a].size(); ++i)
            v[a][i] *= std::pow(std::max(u[i], 0.0), beta);
    return v;
}

Field resample(const Grid& from, const Field& u, const Grid& to) {
    if (from.d != to.d || from.length != to.length)
        throw std::invalid_argument("resample: grids must share d and L");
    if (from.n == to.n) return u;
    const Spectrum c = fft_forward(from, u);
    Spectrum out(to.size(), Complex(0.0, 0.0));
    const int half = std::min(from.n, to.n) / 2;
    auto wrap = [](int kk, int n) { return kk >= 0 ? kk : kk + n; };
    if (from.d == 1) {
        for (int k = 0; k < from.n; ++k) {
            const int kk = signed_index(k, from.n);
            if (kk >= -half + 1 && kk <= half - 1)
                out[wrap(kk, to.n)] = c[k];
        }
    } else {
        for (int ky = 0; ky < from.n; ++ky) {
            const int sy = signed_index(ky, from.n);
            if (sy <= -half || sy >= half) continue;
            for (int kx = 0; kx < from.n; ++kx) {
                const int sx = signed_index(kx, from.n);
                if (sx <= -half || sx >= half) continue;
                out[static_cast<std::size_t>(wrap(sy, to.n)) * to.n + wrap(sx, to.n)] =
                    c[static_cast<std::size_t>(ky) * from.n + kx];
            }
        }
    }
    return fft_inverse(to, out);
}

}  // namespace fjko
