#pragma once

#include <vector>

#include "phaseless/lattices.hpp"
#include "phaseless/types.hpp"
#include "phaseless/windows.hpp"

namespace phaseless::stft {

// V_w f(x, omega) = integral of f(t) conj(w(t-x)) e^{-2 pi i omega t} dt by the
// rectangle rule on f's grid (spectrally accurate for Gaussian-decay windows).
// Preconditions: the grid covers the shifted window (x inside the grid and
// |w| <= 1e-12 at both grid edges) and |omega| stays at or below the grid's
// Nyquist frequency.
cplx stft_point(const Signal& f, const windows::WindowSpec& w, double x, double omega);

struct TFSampleSet {
    lattices::PointSet points;       // 2-D (x, omega) sample positions
    std::vector<double> magnitudes;  // |V_w f| at each point, same order
};

// Magnitude-only samples over a point set; order matches the input. Coverage
// failures are reported with the offending point index.
TFSampleSet sample_phaseless(const Signal& f, const windows::WindowSpec& w,
                             const lattices::PointSet& pts);

struct SpectrogramGrid {
    GridSpec xgrid;             // time shifts, one row per entry
    GridSpec wgrid;             // frequencies, FFT-compatible with the signal grid
    std::vector<double> power;  // row-major |V_w f(x_i, omega_j)|^2

    double at(std::size_t i, std::size_t j) const { return power[i * wgrid.count + j]; }
};

// Full spectrogram via one windowed FFT per row. Rows whose window pokes out of
// the grid are kept (they matter only where f itself has decayed).
SpectrogramGrid spectrogram_grid(const Signal& f, const windows::WindowSpec& w,
                                 const GridSpec& xgrid, const GridSpec& wgrid);

// f_s(t) = f(t - s) conj(f(t)) on f's own grid; off-grid shifts interpolate f
// linearly and treat points beyond the grid as zero.
Signal tensor_product(const Signal& f, double s);

// Orthonormal Hermite function h_n sampled on a grid (unit L2 norm under the
// rectangle rule up to quadrature error).
std::vector<double> hermite_values(int n, const GridSpec& g);

// Expansion coefficients c_n = <f, h_n> for n < n_basis, and the synthesis map
// back to a grid.
std::vector<cplx> hermite_coeffs(const Signal& f, int n_basis);
Signal hermite_synthesize(const std::vector<cplx>& coeffs, const GridSpec& g);

// Fractional Fourier transform by Hermite expansion: coefficient n picks up
// e^{-i n theta}, so theta = pi/2 reproduces fourier_transform on signals the
// basis represents well. Requires relative expansion residual < 1e-6.
Signal frft(const Signal& f, double theta, int n_basis = 48);

// F f(omega) = integral of f(t) e^{-2 pi i omega t} dt, on the dual grid.
Signal fourier_transform(const Signal& f);

struct MetaplecticGaussian {
    cplx c;            // image of the standard Gaussian is C e^{-pi c t^2}
    double amplitude;  // C = (2 Re c)^{1/4}: unit L2 norm, real positive at 0
};

MetaplecticGaussian metaplectic_gaussian(const lattices::SL2Mat& S);

}
