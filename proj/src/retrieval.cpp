#include "phaseless/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phaseless/fft.hpp"
#include "phaseless/parallel.hpp"

namespace phaseless::retrieval {

namespace {

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const cplx& z : v) m = std::max(m, std::abs(z));
    return m;
}

double normal(Rng& rng) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    return std::sqrt(-2.0 * std::log1p(-u)) * std::cos(TWO_PI * v);
}

// Least-squares objective on the squared magnitudes: L(c) = sum_i r_i^2 with
// r_i = |sum_n c_n G_in|^2 - m_i^2. grad (optional) receives the gradient with
// respect to (Re c, Im c) packed as complex numbers: grad_n = dL/dRe + i dL/dIm.
struct Objective {
    std::size_t n_samples = 0;
    std::size_t n_basis = 0;
    std::vector<cplx> G;     // row-major n_samples x n_basis
    std::vector<double> m2;  // squared sample magnitudes

    double loss(const std::vector<cplx>& c, std::vector<cplx>* grad) const {
        if (grad) std::fill(grad->begin(), grad->end(), cplx(0.0));
        double total = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            const cplx* row = &G[i * n_basis];
            cplx v = 0.0;
            for (std::size_t n = 0; n < n_basis; ++n) v += c[n] * row[n];
            const double r = std::norm(v) - m2[i];
            total += r * r;
            if (grad) {
                const cplx scale = 4.0 * r * v;
                for (std::size_t n = 0; n < n_basis; ++n)
                    (*grad)[n] += scale * std::conj(row[n]);
            }
        }
        return total;
    }
};

Objective build_objective(const stft::TFSampleSet& samples, const windows::WindowSpec& w,
                          const GridSpec& grid, std::size_t nb) {
    const std::size_t ns = samples.points.points.size();
    if (ns == 0 || samples.magnitudes.size() != ns)
        throw precondition_error("fit: empty or inconsistent sample set");

    Objective obj;
    obj.n_samples = ns;
    obj.n_basis = nb;
    obj.G.resize(ns * nb);
    obj.m2.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) obj.m2[i] = samples.magnitudes[i] * samples.magnitudes[i];

    std::vector<Signal> basis(nb);
    for (std::size_t n = 0; n < nb; ++n) {
        const std::vector<double> h = stft::hermite_values(static_cast<int>(n), grid);
        basis[n] = Signal{grid.start, grid.step, std::vector<cplx>(h.begin(), h.end())};
    }

    // G_in = V_w h_n at sample point i; consecutive points often share x, so the
    // window profile is reused across both the point run and the basis index.
    parallel_for(ns, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> prof;
        double x_prev = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& c = samples.points.points[i].coords;
            if (c.size() != 2)
                throw precondition_error("fit: sample points must be 2-D");
            if (c[0] != x_prev) {
                windows::window_profile(w, grid, c[0], prof);
                x_prev = c[0];
            }
            const cplx ph0 = std::polar(1.0, -TWO_PI * c[1] * grid.start);
            const cplx rot = std::polar(1.0, -TWO_PI * c[1] * grid.step);
            for (std::size_t n = 0; n < nb; ++n) {
                cplx ph = ph0, acc = 0.0;
                const Signal& hn = basis[n];
                for (std::size_t k = 0; k < hn.size(); ++k) {
                    acc += hn.values[k] * std::conj(prof[k]) * ph;
                    ph *= rot;
                }
                obj.G[i * nb + n] = grid.step * acc;
            }
        }
    });
    return obj;
}

struct RestartResult {
    double loss = std::numeric_limits<double>::infinity();
    int n_iters = 0;
    std::string status = "max_iters";
    std::vector<cplx> coeffs;
};

RestartResult run_descent(const Objective& obj, const FitConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> c(obj.n_basis);
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(obj.n_basis));
    for (auto& z : c) z = scale * cplx(normal(rng), normal(rng));

    std::vector<cplx> grad(obj.n_basis), trial(obj.n_basis), trial_grad(obj.n_basis);
    double L = obj.loss(c, &grad);
    double eta = 0.1;
    RestartResult res;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        double gnorm2 = 0.0;
        for (const cplx& g : grad) gnorm2 += std::norm(g);
        if (std::sqrt(gnorm2) < cfg.tol) {
            res.status = "converged";
            break;
        }
        bool moved = false;
        for (int bt = 0; bt < 60 && !moved; ++bt) {
            for (std::size_t n = 0; n < obj.n_basis; ++n) trial[n] = c[n] - eta * grad[n];
            const double Lt = obj.loss(trial, &trial_grad);
            if (Lt <= L - 1e-4 * eta * gnorm2) {
                c.swap(trial);
                grad.swap(trial_grad);
                L = Lt;
                eta = std::min(eta * 1.5, 1e3);
                moved = true;
            } else {
                eta *= 0.5;
            }
        }
        if (!moved) {
            res.status = "stalled";
            break;
        }
    }
    res.loss = L;
    res.n_iters = it;
    res.coeffs = std::move(c);
    return res;
}

}

CorrelationGrid spectro_to_correlation(const stft::SpectrogramGrid& spec) {
    if (spec.xgrid.count == 0 || spec.wgrid.count == 0)
        throw precondition_error("spectro_to_correlation: empty spectrogram");
    CorrelationGrid out;
    out.xgrid = spec.xgrid;
    out.shift_grid = dual_grid(spec.wgrid);
    const std::size_t nx = spec.xgrid.count;
    const std::size_t ns = out.shift_grid.count;
    out.values.resize(nx * ns);
    parallel_for(nx, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> row(spec.wgrid.count);
        for (std::size_t ix = lo; ix < hi; ++ix) {
            for (std::size_t j = 0; j < spec.wgrid.count; ++j)
                row[j] = spec.at(ix, j);
            const std::vector<cplx> q = dft_uniform(row, spec.wgrid, out.shift_grid, -1);
            for (std::size_t is = 0; is < ns; ++is) out.values[is * nx + ix] = q[is];
        }
    });

    double gmax = 0.0, edge = 0.0;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        edge = std::max({edge, std::abs(out.at(0, ix)), std::abs(out.at(ns - 1, ix))});
    }
    gmax = max_abs(out.values);
    if (gmax > 0.0 && edge > 1e-10 * gmax)
        throw precondition_error(
            "spectro_to_correlation: correlation has not decayed at the shift boundary; "
            "widen the frequency grid");
    return out;
}

AmbiguityGrid deconvolve(const CorrelationGrid& corr, const windows::WindowSpec& w,
                         double eps_rel) {
    if (!(eps_rel > 0.0 && eps_rel < 1.0))
        throw precondition_error("deconvolve: eps_rel must lie in (0, 1)");
    if (corr.xgrid.count == 0 || corr.shift_grid.count == 0)
        throw precondition_error("deconvolve: empty correlation grid");
    AmbiguityGrid out;
    out.shift_grid = corr.shift_grid;
    out.ygrid = dual_grid(corr.xgrid);
    const std::size_t nx = corr.xgrid.count;
    const std::size_t ny = out.ygrid.count;
    const std::size_t ns = corr.shift_grid.count;
    out.values.resize(ns * ny);
    std::vector<cplx> denom(ns * ny);

    parallel_for(ns, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> prof0, profs, wprod(nx), qrow(nx);
        windows::window_profile(w, corr.xgrid, 0.0, prof0);
        for (std::size_t is = lo; is < hi; ++is) {
            const double s = corr.shift_grid.value(is);
            windows::window_profile(w, corr.xgrid, s, profs);
            for (std::size_t k = 0; k < nx; ++k) wprod[k] = profs[k] * std::conj(prof0[k]);
            const std::vector<cplx> d = dft_uniform(wprod, corr.xgrid, out.ygrid, -1);
            for (std::size_t iy = 0; iy < ny; ++iy) denom[is * ny + iy] = std::conj(d[iy]);

            for (std::size_t ix = 0; ix < nx; ++ix) qrow[ix] = corr.at(is, ix);
            const std::vector<cplx> num = dft_uniform(qrow, corr.xgrid, out.ygrid, -1);
            for (std::size_t iy = 0; iy < ny; ++iy) out.values[is * ny + iy] = num[iy];
        }
    });

    const double dmax = max_abs(denom);
    if (dmax == 0.0)
        throw precondition_error("deconvolve: window tensor-product spectrum vanishes");
    const double cutoff = eps_rel * dmax;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (std::abs(denom[i]) > cutoff)
            out.values[i] /= denom[i];
        else
            out.values[i] = 0.0;
    }
    return out;
}

Signal ambiguity_to_signal(const AmbiguityGrid& amb) {
    const std::size_t ns = amb.shift_grid.count;
    const std::size_t ny = amb.ygrid.count;
    if (ns == 0 || ny == 0) throw precondition_error("ambiguity_to_signal: empty grid");

    std::size_t zero_row = ns;
    for (std::size_t is = 0; is < ns; ++is)
        if (std::abs(amb.shift_grid.value(is)) < 1e-9) zero_row = is;
    if (zero_row == ns)
        throw precondition_error("ambiguity_to_signal: shift grid does not contain 0");

    const GridSpec tgrid = dual_grid(amb.ygrid);
    std::vector<cplx> row(ny);
    for (std::size_t iy = 0; iy < ny; ++iy) row[iy] = amb.at(zero_row, iy);
    const std::vector<cplx> f0 = dft_uniform(row, amb.ygrid, tgrid, +1);

    std::size_t k_star = 0;
    double f0_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < f0.size(); ++k) {
        if (f0[k].real() > f0_max) {
            f0_max = f0[k].real();
            k_star = k;
        }
    }
    if (!(f0_max > 1e-12))
        throw numeric_error("ambiguity_to_signal: cannot anchor, max of |f|^2 is below the noise floor");
    const double t_star = tgrid.value(k_star);
    const cplx anchor = std::sqrt(f0_max);

    Signal out{tgrid.start, tgrid.step, std::vector<cplx>(tgrid.count)};
    parallel_for(tgrid.count, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const double s = t_star - tgrid.value(k);
            const double pos = (s - amb.shift_grid.start) / amb.shift_grid.step;
            const double rounded = std::round(pos);
            const auto is = static_cast<std::int64_t>(rounded);
            if (std::abs(pos - rounded) > 1e-6 || is < 0 ||
                is >= static_cast<std::int64_t>(ns)) {
                out.values[k] = 0.0;  // shift beyond the data; tails carry no mass
                continue;
            }
            // f_s(t*) by inverse transform in y at the single point t*
            cplx ph = std::polar(1.0, TWO_PI * amb.ygrid.start * t_star);
            const cplx rot = std::polar(1.0, TWO_PI * amb.ygrid.step * t_star);
            cplx acc = 0.0;
            const cplx* arow = &amb.values[static_cast<std::size_t>(is) * ny];
            for (std::size_t iy = 0; iy < ny; ++iy) {
                acc += arow[iy] * ph;
                ph *= rot;
            }
            out.values[k] = amb.ygrid.step * acc / std::conj(anchor);
        }
    });
    return out;
}

PhaseAlignment phase_align(const Signal& f, const Signal& g) {
    validate(f);
    validate(g);
    const double nf = norm_l2(f);
    const double ng = norm_l2(g);
    if (nf == 0.0 || ng == 0.0)
        throw precondition_error("phase_align: signals must have nonzero norm");
    const cplx ip = inner(f, g);
    const cplx tau = ip == cplx(0.0) ? cplx(1.0) : ip / std::abs(ip);
    double err2 = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        err2 += std::norm(f.values[k] - tau * g.values[k]);
    return PhaseAlignment{tau, std::sqrt(f.dt * err2) / nf};
}

FitReport fit_from_samples(const stft::TFSampleSet& samples, const windows::WindowSpec& w,
                           const FitConfig& cfg, const Signal* truth) {
    if (cfg.n_basis < 1 || cfg.restarts < 1 || cfg.max_iters < 0 || !(cfg.tol > 0.0))
        throw precondition_error("fit_from_samples: invalid configuration");
    const Objective obj =
        build_objective(samples, w, cfg.grid, static_cast<std::size_t>(cfg.n_basis));

    std::vector<RestartResult> results(static_cast<std::size_t>(cfg.restarts));
    parallel_for(results.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r)
            results[r] = run_descent(obj, cfg, split_seed(cfg.seed, r));
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r].loss < results[best].loss) best = r;

    FitReport rep;
    rep.status = results[best].status;
    rep.loss = results[best].loss;
    rep.n_iters = results[best].n_iters;
    rep.coeffs = results[best].coeffs;
    rep.seed = cfg.seed;
    if (truth) {
        const Signal fitted = stft::hermite_synthesize(rep.coeffs, cfg.grid);
        rep.aligned_error = phase_align(*truth, fitted).err;
    }
    return rep;
}

double fit_objective(const stft::TFSampleSet& samples, const windows::WindowSpec& w,
                     const GridSpec& grid, const std::vector<cplx>& coeffs,
                     std::vector<cplx>* grad) {
    if (coeffs.empty()) throw precondition_error("fit_objective: empty coefficient vector");
    const Objective obj = build_objective(samples, w, grid, coeffs.size());
    if (grad) grad->assign(coeffs.size(), cplx(0.0));
    return obj.loss(coeffs, grad);
}

DistinguishReport distinguish(const Signal& f, const Signal& h, const windows::WindowSpec& w,
                              const lattices::PointSet& pts) {
    if (pts.points.empty()) throw precondition_error("distinguish: empty point set");
    const stft::TFSampleSet sf = stft::sample_phaseless(f, w, pts);
    const stft::TFSampleSet sh = stft::sample_phaseless(h, w, pts);
    DistinguishReport rep;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < sf.magnitudes.size(); ++i) {
        const double dev = std::abs(sf.magnitudes[i] - sh.magnitudes[i]);
        if (dev > rep.max_dev) {
            rep.max_dev = dev;
            arg = i;
        }
    }
    rep.argmax_x = pts.points[arg].coords[0];
    rep.argmax_omega = pts.points[arg].coords[1];
    rep.aligned_distance = phase_align(f, h).err;
    return rep;
}

Signal reconstruct(const Signal& f, const windows::WindowSpec& w, double eps_rel) {
    validate(f);
    const GridSpec xg = f.grid();
    const GridSpec wg = dual_grid(xg);
    const stft::SpectrogramGrid spec = stft::spectrogram_grid(f, w, xg, wg);
    const CorrelationGrid corr = spectro_to_correlation(spec);
    const AmbiguityGrid amb = deconvolve(corr, w, eps_rel);
    return ambiguity_to_signal(amb);
}

}
