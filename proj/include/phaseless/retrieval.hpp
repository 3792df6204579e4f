#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phaseless/stft.hpp"
#include "phaseless/types.hpp"
#include "phaseless/windows.hpp"

namespace phaseless::retrieval {

struct CorrelationGrid {
    GridSpec xgrid;            // window-shift axis
    GridSpec shift_grid;       // tensor-shift axis, dual of the spectrogram frequency axis
    std::vector<cplx> values;  // shift-major: values[is * xgrid.count + ix] = Q(x_ix, s_is)

    cplx at(std::size_t is, std::size_t ix) const { return values[is * xgrid.count + ix]; }
};

// Q(x, s) = forward Fourier transform in omega of the spectrogram row at x.
// For window w it equals <f_s, T_x w_s> with f_s, w_s the tensor products at
// shift s. Requires Q to decay below 1e-10 (relative) at the shift boundary.
CorrelationGrid spectro_to_correlation(const stft::SpectrogramGrid& spec);

struct AmbiguityGrid {
    GridSpec shift_grid;       // tensor-shift axis
    GridSpec ygrid;            // dual of the window-shift axis
    std::vector<cplx> values;  // shift-major: values[is * ygrid.count + iy] = A(s_is, y_iy)

    cplx at(std::size_t is, std::size_t iy) const { return values[is * ygrid.count + iy]; }
};

// Divides the x-Fourier transform of Q(., s) by conj(F(w_s)) row by row, which
// yields A(s, y) = F(f_s)(y). Convention note: A(s, y) = conj(V(s, -y)) where
// V is the STFT of f with f itself as window. Bins where the denominator
// magnitude falls at or below eps_rel times its global maximum are zeroed: the
// reference is global, not per-row, because row maxima decay with |s| and a
// per-row reference would amplify noise where the row carries no energy. The
// default balances two floors: a larger cutoff truncates the ambiguity tail of
// high-order Hermite content, a smaller one amplifies spectrogram rounding
// noise in the near-cutoff bins.
AmbiguityGrid deconvolve(const CorrelationGrid& corr, const windows::WindowSpec& w,
                         double eps_rel = 1e-8);

// Inverts the ambiguity data to a signal: recovers f_s(t) by inverse transform
// in y, anchors at t* = argmax of f_0 (= |f|^2), sets f(t*) = +sqrt(f_0(t*))
// — the canonical representative of the global-phase orbit — and reads
// f(t* - s) = f_s(t*) / conj(f(t*)).
Signal ambiguity_to_signal(const AmbiguityGrid& amb);

struct PhaseAlignment {
    cplx tau;    // unit-modulus phase minimizing ||f - tau g||
    double err;  // ||f - tau g|| / ||f||
};

PhaseAlignment phase_align(const Signal& f, const Signal& g);

struct FitConfig {
    int n_basis = 4;
    int restarts = 8;
    int max_iters = 400;
    double tol = 1e-9;  // stop when the descent-gradient norm falls below this
    std::uint64_t seed = 0;
    GridSpec grid = centered_grid(8.0, 1024);  // synthesis grid for candidates
};

struct FitReport {
    std::string status;  // "converged", "stalled" (line search exhausted), or "max_iters"
    double loss = 0.0;
    int n_iters = 0;
    std::vector<cplx> coeffs;  // Hermite coefficients of the best candidate
    std::optional<double> aligned_error;
    std::uint64_t seed = 0;
};

// Minimizes sum over samples of (|V_w f_c|^2 - m^2)^2 over complex Hermite
// coefficients c (real and imaginary parts as independent variables) by
// multi-start gradient descent with backtracking line search. The best restart
// is chosen by (loss, restart index), so the result is deterministic for a
// fixed seed regardless of thread count.
FitReport fit_from_samples(const stft::TFSampleSet& samples, const windows::WindowSpec& w,
                           const FitConfig& cfg, const Signal* truth = nullptr);

// The objective fit_from_samples minimizes, evaluated at the given coefficients
// (basis size = coeffs.size()), and optionally its gradient packed as
// d/dRe c_n + i d/dIm c_n. Exposed for convergence diagnostics.
double fit_objective(const stft::TFSampleSet& samples, const windows::WindowSpec& w,
                     const GridSpec& grid, const std::vector<cplx>& coeffs,
                     std::vector<cplx>* grad = nullptr);

struct DistinguishReport {
    double max_dev = 0.0;  // max | |V_w f| - |V_w h| | over the point set
    double argmax_x = 0.0;
    double argmax_omega = 0.0;
    double aligned_distance = 0.0;  // min over unit tau of ||f - tau h|| / ||f||
};

DistinguishReport distinguish(const Signal& f, const Signal& h, const windows::WindowSpec& w,
                              const lattices::PointSet& pts);

// Full pipeline: spectrogram -> correlation -> deconvolve -> signal, on the
// FFT-dual grids derived from f's own grid. Returns the canonical
// representative, equal to f up to global phase when f is well covered.
Signal reconstruct(const Signal& f, const windows::WindowSpec& w, double eps_rel = 1e-8);

}
