#include "phaseless/stft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "phaseless/fft.hpp"
#include "phaseless/parallel.hpp"

namespace phaseless::stft {

namespace {

constexpr double COVER_TOL = 1e-12;

void check_coverage(const std::vector<cplx>& prof, const GridSpec& g, double x) {
    // Small edges alone do not prove coverage: a window centered far outside
    // the grid also has tiny values at both edges. Require the center inside.
    if (x < g.start || x > g.back() || std::abs(prof.front()) > COVER_TOL ||
        std::abs(prof.back()) > COVER_TOL)
        throw precondition_error("stft: grid does not cover the window shifted to x = " +
                                 std::to_string(x));
}

void check_nyquist(const Signal& f, double omega) {
    if (std::abs(omega) > 0.5 / f.dt * (1.0 + 1e-9))
        throw precondition_error("stft: omega = " + std::to_string(omega) +
                                 " exceeds the grid Nyquist frequency");
}

// dt * sum_k f_k conj(prof_k) e^{-2 pi i omega t_k}. The phasor recurrence
// drifts by O(N eps), far below the quadrature tolerance.
cplx accumulate(const Signal& f, const std::vector<cplx>& prof, double omega) {
    cplx ph = std::polar(1.0, -TWO_PI * omega * f.t0);
    const cplx rot = std::polar(1.0, -TWO_PI * omega * f.dt);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        acc += f.values[k] * std::conj(prof[k]) * ph;
        ph *= rot;
    }
    return f.dt * acc;
}

}

cplx stft_point(const Signal& f, const windows::WindowSpec& w, double x, double omega) {
    validate(f);
    check_nyquist(f, omega);
    thread_local std::vector<cplx> prof;
    windows::window_profile(w, f.grid(), x, prof);
    check_coverage(prof, f.grid(), x);
    return accumulate(f, prof, omega);
}

TFSampleSet sample_phaseless(const Signal& f, const windows::WindowSpec& w,
                             const lattices::PointSet& pts) {
    validate(f);
    if (pts.dim != 2)
        throw precondition_error("sample_phaseless: points must be 2-D (x, omega)");
    TFSampleSet out;
    out.points = pts;
    out.magnitudes.resize(pts.points.size());
    const GridSpec g = f.grid();
    parallel_for(pts.points.size(), [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> prof;
        double x_prev = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                const auto& c = pts.points[i].coords;
                if (c.size() != 2)
                    throw precondition_error("point is not 2-D");
                check_nyquist(f, c[1]);
                if (c[0] != x_prev) {  // consecutive points often share x
                    windows::window_profile(w, g, c[0], prof);
                    check_coverage(prof, g, c[0]);
                    x_prev = c[0];
                }
                out.magnitudes[i] = std::abs(accumulate(f, prof, c[1]));
            } catch (const precondition_error& e) {
                throw precondition_error("sample_phaseless: point " + std::to_string(i) + ": " +
                                         e.what());
            }
        }
    });
    return out;
}

SpectrogramGrid spectrogram_grid(const Signal& f, const windows::WindowSpec& w,
                                 const GridSpec& xgrid, const GridSpec& wgrid) {
    validate(f);
    if (xgrid.count == 0 || wgrid.count == 0)
        throw precondition_error("spectrogram_grid: empty grid");
    SpectrogramGrid out;
    out.xgrid = xgrid;
    out.wgrid = wgrid;
    out.power.resize(xgrid.count * wgrid.count);
    const GridSpec g = f.grid();
    parallel_for(xgrid.count, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> prof, windowed(f.size());
        for (std::size_t i = lo; i < hi; ++i) {
            windows::window_profile(w, g, xgrid.value(i), prof);
            for (std::size_t k = 0; k < f.size(); ++k)
                windowed[k] = f.values[k] * std::conj(prof[k]);
            const std::vector<cplx> row = dft_uniform(windowed, g, wgrid, -1);
            for (std::size_t j = 0; j < wgrid.count; ++j)
                out.power[i * wgrid.count + j] = std::norm(row[j]);
        }
    });
    return out;
}

Signal tensor_product(const Signal& f, double s) {
    validate(f);
    const std::size_t n = f.size();
    if (std::abs(s) >= f.dt * static_cast<double>(n - 1))
        throw precondition_error("tensor_product: shifted grid does not overlap");
    Signal out{f.t0, f.dt, std::vector<cplx>(n)};
    const double u0 = -s / f.dt;  // f(t_k - s) sits at fractional index k + u0
    for (std::size_t k = 0; k < n; ++k) {
        const double u = static_cast<double>(k) + u0;
        const double fl = std::floor(u);
        const std::int64_t j = static_cast<std::int64_t>(fl);
        const double frac = u - fl;
        const auto pick = [&](std::int64_t idx) -> cplx {
            return (idx >= 0 && idx < static_cast<std::int64_t>(n))
                       ? f.values[static_cast<std::size_t>(idx)]
                       : cplx(0.0);
        };
        cplx shifted;
        if (frac < 1e-9)
            shifted = pick(j);  // grid-aligned shift: no interpolation error
        else if (frac > 1.0 - 1e-9)
            shifted = pick(j + 1);
        else
            shifted = (1.0 - frac) * pick(j) + frac * pick(j + 1);
        out.values[k] = shifted * std::conj(f.values[k]);
    }
    return out;
}

std::vector<double> hermite_values(int n, const GridSpec& g) {
    if (n < 0) throw precondition_error("hermite_values: order must be >= 0");
    static const double P0 = std::pow(2.0, 0.25);
    static const double TWO_ROOT_PI = 2.0 * std::sqrt(PI);
    std::vector<double> out(g.count);
    for (std::size_t k = 0; k < g.count; ++k) {
        const double t = g.value(k);
        double prev = 0.0, cur = P0;
        for (int j = 0; j < n; ++j) {
            const double nxt = (TWO_ROOT_PI * t * cur - std::sqrt(static_cast<double>(j)) * prev) /
                               std::sqrt(static_cast<double>(j + 1));
            prev = cur;
            cur = nxt;
        }
        out[k] = cur * std::exp(-PI * t * t);
    }
    return out;
}

std::vector<cplx> hermite_coeffs(const Signal& f, int n_basis) {
    validate(f);
    if (n_basis < 1) throw precondition_error("hermite_coeffs: basis size must be >= 1");
    std::vector<cplx> c(static_cast<std::size_t>(n_basis), cplx(0.0));
    static const double P0 = std::pow(2.0, 0.25);
    static const double TWO_ROOT_PI = 2.0 * std::sqrt(PI);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double t = f.time(k);
        const cplx sample = f.values[k] * std::exp(-PI * t * t);
        double prev = 0.0, cur = P0;
        for (int j = 0; j < n_basis; ++j) {
            c[static_cast<std::size_t>(j)] += sample * cur;
            const double nxt = (TWO_ROOT_PI * t * cur - std::sqrt(static_cast<double>(j)) * prev) /
                               std::sqrt(static_cast<double>(j + 1));
            prev = cur;
            cur = nxt;
        }
    }
    for (auto& v : c) v *= f.dt;
    return c;
}

Signal hermite_synthesize(const std::vector<cplx>& coeffs, const GridSpec& g) {
    if (coeffs.empty()) throw precondition_error("hermite_synthesize: no coefficients");
    static const double P0 = std::pow(2.0, 0.25);
    static const double TWO_ROOT_PI = 2.0 * std::sqrt(PI);
    Signal out{g.start, g.step, std::vector<cplx>(g.count)};
    for (std::size_t k = 0; k < g.count; ++k) {
        const double t = g.value(k);
        double prev = 0.0, cur = P0;
        cplx acc = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            acc += coeffs[j] * cur;
            const double nxt = (TWO_ROOT_PI * t * cur - std::sqrt(static_cast<double>(j)) * prev) /
                               std::sqrt(static_cast<double>(j + 1));
            prev = cur;
            cur = nxt;
        }
        out.values[k] = acc * std::exp(-PI * t * t);
    }
    return out;
}

Signal frft(const Signal& f, double theta, int n_basis) {
    validate(f);
    const double nrm = norm_l2(f);
    if (nrm == 0.0) return f;
    std::vector<cplx> c = hermite_coeffs(f, n_basis);
    const Signal recon = hermite_synthesize(c, f.grid());
    double resid2 = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) resid2 += std::norm(f.values[k] - recon.values[k]);
    const double resid = std::sqrt(f.dt * resid2) / nrm;
    if (resid > 1e-6)
        throw numeric_error("frft: Hermite expansion residual " + std::to_string(resid) +
                            " exceeds 1e-6; increase n_basis or refine the grid");
    for (std::size_t n = 0; n < c.size(); ++n)
        c[n] *= std::polar(1.0, -static_cast<double>(n) * theta);
    return hermite_synthesize(c, f.grid());
}

Signal fourier_transform(const Signal& f) {
    validate(f);
    const GridSpec g = f.grid();
    const GridSpec dual = dual_grid(g);
    return Signal{dual.start, dual.step, dft_uniform(f.values, g, dual, -1)};
}

MetaplecticGaussian metaplectic_gaussian(const lattices::SL2Mat& S) {
    const double p = S.p();
    const cplx c = p * cplx(1.0, S.a * S.c + S.b * S.d);
    return MetaplecticGaussian{c, std::pow(2.0 * p, 0.25)};
}

}
