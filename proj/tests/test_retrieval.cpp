#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "phaseless/fft.hpp"
#include "phaseless/lattices.hpp"
#include "phaseless/retrieval.hpp"
#include "phaseless/stft.hpp"
#include "phaseless/types.hpp"
#include "phaseless/windows.hpp"

using namespace phaseless;
using windows::WindowSpec;

namespace {

const GridSpec GRID = centered_grid(8.0, 1024);

Signal random_mixture(Rng& rng, int n_basis, const GridSpec& g) {
    std::vector<cplx> c(static_cast<std::size_t>(n_basis));
    for (auto& z : c) z = rng.box();
    Signal f = stft::hermite_synthesize(c, g);
    const double nf = norm_l2(f);
    for (auto& v : f.values) v /= nf;
    return f;
}

std::size_t grid_index(const GridSpec& g, double v) {
    const double pos = (v - g.start) / g.step;
    const auto k = static_cast<std::size_t>(std::llround(pos));
    REQUIRE(std::abs(pos - std::llround(pos)) < 1e-9);
    REQUIRE(k < g.count);
    return k;
}

// Q(x, s) by plain quadrature of <f_s, T_x w_s> on the signal grid, with
// every factor evaluated directly.
cplx correlation_direct(const Signal& f, const WindowSpec& w, double x, double s) {
    const Signal fs = stft::tensor_product(f, s);
    std::vector<cplx> pa, pb;
    windows::window_profile(w, f.grid(), x + s, pa);
    windows::window_profile(w, f.grid(), x, pb);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        acc += fs.values[k] * std::conj(pa[k]) * pb[k];
    return f.dt * acc;
}

retrieval::CorrelationGrid correlation_of(const Signal& f, const WindowSpec& w) {
    const GridSpec wg = dual_grid(f.grid());
    return retrieval::spectro_to_correlation(stft::spectrogram_grid(f, w, f.grid(), wg));
}

}  // namespace

TEST_CASE("correlation grid matches direct tensor-shift quadrature") {
    Rng rng(411);
    const Signal f = random_mixture(rng, 4, GRID);
    const WindowSpec w = WindowSpec::gaussian(PI);
    const retrieval::CorrelationGrid corr = correlation_of(f, w);
    CHECK(corr.xgrid.count == GRID.count);
    CHECK(corr.shift_grid.step == doctest::Approx(GRID.step).epsilon(1e-12));

    for (auto [x, s] : {std::pair{0.0, 0.0}, {0.25, 0.5}, {-0.75, -1.0}, {1.5, 0.25}}) {
        const cplx direct = correlation_direct(f, w, x, s);
        const cplx q = corr.at(grid_index(corr.shift_grid, s), grid_index(corr.xgrid, x));
        CHECK(std::abs(q - direct) < 1e-6);
    }
}

TEST_CASE("correlation at the origin integrates the squared envelopes") {
    // For f = h_0 and the unit-norm Gaussian window (= h_0), Q(0, 0) =
    // integral of 2 exp(-4 pi t^2) dt = 1.
    const Signal f = stft::hermite_synthesize({1.0}, GRID);
    const retrieval::CorrelationGrid corr = correlation_of(f, WindowSpec::hermite(0));
    const cplx q00 = corr.at(grid_index(corr.shift_grid, 0.0), grid_index(corr.xgrid, 0.0));
    CHECK(std::abs(q00 - cplx(1.0)) < 1e-9);
}

TEST_CASE("deconvolved rows reproduce the Fourier transform of the tensor product") {
    Rng rng(902);
    const Signal f = random_mixture(rng, 3, GRID);
    const WindowSpec w = WindowSpec::gaussian(PI);
    const retrieval::AmbiguityGrid amb = retrieval::deconvolve(correlation_of(f, w), w);

    for (double s : {0.0, 0.5, -1.25}) {
        const Signal ref = stft::fourier_transform(stft::tensor_product(f, s));
        REQUIRE(ref.t0 == doctest::Approx(amb.ygrid.start));
        const std::size_t is = grid_index(amb.shift_grid, s);
        // Stay well inside the denominator cutoff ring; bins beyond it are
        // zeroed by design while the reference still carries a small tail.
        for (std::size_t iy = 0; iy < amb.ygrid.count; ++iy) {
            if (std::abs(amb.ygrid.value(iy)) > 2.5) continue;
            CHECK(std::abs(amb.at(is, iy) - ref.values[iy]) < 1e-6);
        }
    }
}

TEST_CASE("deconvolve rejects a threshold outside (0, 1)") {
    const Signal f = stft::hermite_synthesize({1.0}, GRID);
    const WindowSpec w = WindowSpec::gaussian(PI);
    const retrieval::CorrelationGrid corr = correlation_of(f, w);
    CHECK_THROWS_AS(retrieval::deconvolve(corr, w, 0.0), precondition_error);
    CHECK_THROWS_AS(retrieval::deconvolve(corr, w, 1.0), precondition_error);
    CHECK_THROWS_AS(retrieval::deconvolve(corr, w, -0.5), precondition_error);
}

TEST_CASE("reconstruct recovers seeded mixtures up to global phase") {
    const WindowSpec w = WindowSpec::gaussian(PI);
    for (std::uint64_t seed : {7u, 19u, 35u}) {
        Rng rng(seed);
        const Signal f = random_mixture(rng, 4, GRID);
        const Signal rec = retrieval::reconstruct(f, w);
        const retrieval::PhaseAlignment al = retrieval::phase_align(f, rec);
        CHECK(al.err < 1e-4);

        // Canonical representative: real and positive where |f| peaks.
        std::size_t k_star = 0;
        for (std::size_t k = 1; k < rec.size(); ++k)
            if (std::abs(rec.values[k]) > std::abs(rec.values[k_star])) k_star = k;
        CHECK(rec.values[k_star].real() > 0.0);
        CHECK(std::abs(rec.values[k_star].imag()) < 1e-6 * std::abs(rec.values[k_star]));
    }
}

TEST_CASE("reconstruct is invariant under a global phase on the input") {
    Rng rng(58);
    const Signal f = random_mixture(rng, 3, GRID);
    Signal g = f;
    const cplx tau = std::polar(1.0, 2.1);
    for (auto& v : g.values) v *= tau;

    const WindowSpec w = WindowSpec::gaussian(PI);
    const Signal rf = retrieval::reconstruct(f, w);
    const Signal rg = retrieval::reconstruct(g, w);
    double dev = 0.0;
    for (std::size_t k = 0; k < rf.size(); ++k)
        dev = std::max(dev, std::abs(rf.values[k] - rg.values[k]));
    CHECK(dev < 1e-8);
}

TEST_CASE("phase alignment hand cases") {
    Rng rng(3142);
    const Signal f = random_mixture(rng, 4, GRID);

    SUBCASE("g = i f aligns with tau = -i and zero error") {
        Signal g = f;
        for (auto& v : g.values) v *= cplx(0.0, 1.0);
        const retrieval::PhaseAlignment al = retrieval::phase_align(f, g);
        CHECK(std::abs(al.tau - cplx(0.0, -1.0)) < 1e-12);
        CHECK(al.err < 1e-12);
    }

    SUBCASE("scaling is not a phase: f vs 2f has unit relative error") {
        Signal g = f;
        for (auto& v : g.values) v *= 2.0;
        const retrieval::PhaseAlignment al = retrieval::phase_align(f, g);
        CHECK(std::abs(al.tau - cplx(1.0)) < 1e-12);
        CHECK(al.err == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("zero-norm input is rejected") {
        const Signal z{GRID.start, GRID.step, std::vector<cplx>(GRID.count, cplx(0.0))};
        CHECK_THROWS_AS(retrieval::phase_align(f, z), precondition_error);
        CHECK_THROWS_AS(retrieval::phase_align(z, f), precondition_error);
    }
}

TEST_CASE("fit objective gradient agrees with central differences") {
    const Signal f = stft::hermite_synthesize({1.0, cplx(0.2, -0.4)}, GRID);
    const lattices::PointSet pts =
        lattices::generate(lattices::diagonal_lattice({0.7, 0.7}, 1.5));
    const stft::TFSampleSet samples =
        stft::sample_phaseless(f, WindowSpec::gaussian(PI), pts);

    Rng rng(77);
    std::vector<cplx> c(3);
    for (auto& z : c) z = 0.7 * rng.box();

    std::vector<cplx> grad;
    retrieval::fit_objective(samples, WindowSpec::gaussian(PI), GRID, c, &grad);
    REQUIRE(grad.size() == c.size());

    const double h = 1e-5;
    for (std::size_t n = 0; n < c.size(); ++n) {
        for (int part = 0; part < 2; ++part) {
            const cplx dir = part == 0 ? cplx(h, 0.0) : cplx(0.0, h);
            std::vector<cplx> cp = c, cm = c;
            cp[n] += dir;
            cm[n] -= dir;
            const double lp = retrieval::fit_objective(samples, WindowSpec::gaussian(PI), GRID, cp);
            const double lm = retrieval::fit_objective(samples, WindowSpec::gaussian(PI), GRID, cm);
            const double fd = (lp - lm) / (2.0 * h);
            const double an = part == 0 ? grad[n].real() : grad[n].imag();
            CHECK(std::abs(fd - an) < 1e-6 * (1.0 + std::abs(an)));
        }
    }
}

TEST_CASE("fit objective vanishes at the generating coefficients") {
    const std::vector<cplx> truth = {cplx(0.8, 0.1), 0.0, cplx(-0.3, 0.2)};
    const Signal f = stft::hermite_synthesize(truth, GRID);
    const lattices::PointSet pts =
        lattices::generate(lattices::diagonal_lattice({0.6, 0.6}, 2.0));
    const stft::TFSampleSet samples =
        stft::sample_phaseless(f, WindowSpec::gaussian(PI), pts);
    CHECK(retrieval::fit_objective(samples, WindowSpec::gaussian(PI), GRID, truth) < 1e-16);
    CHECK_THROWS_AS(retrieval::fit_objective(samples, WindowSpec::gaussian(PI), GRID, {}),
                    precondition_error);
}

TEST_CASE("fit recovers the standard Gaussian from magnitudes") {
    const Signal f = stft::hermite_synthesize({1.0}, GRID);
    const WindowSpec w = WindowSpec::gaussian(PI);
    const lattices::PointSet pts =
        lattices::generate(lattices::diagonal_lattice({0.5, 0.5}, 2.5));
    const stft::TFSampleSet samples = stft::sample_phaseless(f, w, pts);

    retrieval::FitConfig cfg;
    cfg.n_basis = 2;
    cfg.restarts = 2;
    cfg.seed = 11;
    const retrieval::FitReport rep = retrieval::fit_from_samples(samples, w, cfg, &f);
    CHECK(rep.loss < 1e-8);
    CHECK(std::abs(rep.coeffs[0]) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(rep.coeffs[1]) < 1e-3);
    REQUIRE(rep.aligned_error.has_value());
    CHECK(*rep.aligned_error < 1e-3);

    // Same seed, same configuration: bitwise-identical result.
    const retrieval::FitReport again = retrieval::fit_from_samples(samples, w, cfg, &f);
    CHECK(again.loss == rep.loss);
    CHECK(again.n_iters == rep.n_iters);
    CHECK(again.status == rep.status);
    REQUIRE(again.coeffs.size() == rep.coeffs.size());
    for (std::size_t n = 0; n < rep.coeffs.size(); ++n) CHECK(again.coeffs[n] == rep.coeffs[n]);
}

TEST_CASE("fit configuration is validated") {
    const Signal f = stft::hermite_synthesize({1.0}, GRID);
    const stft::TFSampleSet samples = stft::sample_phaseless(
        f, WindowSpec::gaussian(PI),
        lattices::generate(lattices::diagonal_lattice({1.0, 1.0}, 1.0)));
    retrieval::FitConfig cfg;
    cfg.n_basis = 0;
    CHECK_THROWS_AS(retrieval::fit_from_samples(samples, WindowSpec::gaussian(PI), cfg),
                    precondition_error);
    cfg.n_basis = 2;
    cfg.restarts = 0;
    CHECK_THROWS_AS(retrieval::fit_from_samples(samples, WindowSpec::gaussian(PI), cfg),
                    precondition_error);
    cfg.restarts = 1;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(retrieval::fit_from_samples(samples, WindowSpec::gaussian(PI), cfg),
                    precondition_error);
}

TEST_CASE("distinguish separates signals exactly when they share all magnitudes") {
    Rng rng(640);
    const Signal f = random_mixture(rng, 3, GRID);
    Signal h = f;
    const cplx tau = std::polar(1.0, 0.6);
    for (auto& v : h.values) v *= tau;

    const lattices::PointSet pts =
        lattices::generate(lattices::diagonal_lattice({0.5, 0.5}, 2.0));
    const WindowSpec w = WindowSpec::gaussian(PI);
    const retrieval::DistinguishReport rep = retrieval::distinguish(f, h, w, pts);
    CHECK(rep.max_dev < 1e-12);
    CHECK(rep.aligned_distance < 1e-12);
}

TEST_CASE("distinguish separates orthogonal Hermite functions") {
    const Signal f = stft::hermite_synthesize({1.0}, GRID);
    const Signal h = stft::hermite_synthesize({0.0, 1.0}, GRID);
    const lattices::PointSet pts =
        lattices::generate(lattices::diagonal_lattice({0.5, 0.5}, 2.0));
    const WindowSpec w = WindowSpec::gaussian(PI);
    const retrieval::DistinguishReport rep = retrieval::distinguish(f, h, w, pts);
    CHECK(rep.max_dev > 0.1);
    // Orthogonal unit vectors sit at distance sqrt(2) regardless of phase.
    CHECK(rep.aligned_distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    CHECK_THROWS_AS(retrieval::distinguish(f, h, w, lattices::PointSet{}), precondition_error);
}
