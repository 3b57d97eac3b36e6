#include "fjko/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace fjko {
namespace {

struct PlanPair {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t size = 0;

    ~PlanPair() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

std::mutex g_mutex;
std::map<std::pair<int, int>, PlanPair> g_plans;

PlanPair& plan_for(const Grid& grid) {
    auto key = std::make_pair(grid.d, grid.n);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    PlanPair& p = g_plans[key];
    p.size = grid.size();
    p.buf = fftw_alloc_complex(p.size);
    // FFTW_ESTIMATE keeps planning deterministic run to run.
    if (grid.d == 1) {
        p.fwd = fftw_plan_dft_1d(grid.n, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_1d(grid.n, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        p.fwd = fftw_plan_dft_2d(grid.n, grid.n, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_2d(grid.n, grid.n, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!p.fwd || !p.bwd) throw std::runtime_error("fft: plan creation failed");
    return p;
}

}  // namespace

Spectrum fft_forward(const Grid& grid, const Field& values) {
    if (values.size() != grid.size()) throw std::invalid_argument("fft_forward: size mismatch");
    std::lock_guard<std::mutex> lock(g_mutex);
    PlanPair& p = plan_for(grid);
    for (std::size_t i = 0; i < p.size; ++i) {
        p.buf[i][0] = values[i];
        p.buf[i][1] = 0.0;
    }
    fftw_execute(p.fwd);
    Spectrum out(p.size);
    const double scale = 1.0 / static_cast<double>(p.size);
    for (std::size_t i = 0; i < p.size; ++i) out[i] = Complex(p.buf[i][0] * scale, p.buf[i][1] * scale);
    return out;
}

Field fft_inverse(const Grid& grid, const Spectrum& coeffs) {
    if (coeffs.size() != grid.size()) throw std::invalid_argument("fft_inverse: size mismatch");
    std::lock_guard<std::mutex> lock(g_mutex);
    PlanPair& p = plan_for(grid);
    for (std::size_t i = 0; i < p.size; ++i) {
        p.buf[i][0] = coeffs[i].real();
        p.buf[i][1] = coeffs[i].imag();
    }
    fftw_execute(p.bwd);
    Field out(p.size);
    for (std::size_t i = 0; i < p.size; ++i) out[i] = p.buf[i][0];
    return out;
}

}  // namespace fjko
