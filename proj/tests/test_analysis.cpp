#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "phaseless/analysis.hpp"
#include "phaseless/stft.hpp"
#include "phaseless/types.hpp"

using namespace phaseless;
using namespace phaseless::analysis;

namespace {

EntireEval from_lambda(std::function<cplx(cplx)> f) {
    EntireEval F;
    F.eval = std::move(f);
    return F;
}

EntireEval with_zeros(std::function<cplx(cplx)> f, std::vector<cplx> zeros) {
    EntireEval F = from_lambda(std::move(f));
    F.zeros = std::move(zeros);
    return F;
}

EntireEval hermite_extension(int n, const GridSpec& g) {
    const std::vector<double> h = stft::hermite_values(n, g);
    return fourier_extension(std::vector<cplx>(h.begin(), h.end()), g);
}

}  // namespace

TEST_CASE("max modulus of a monomial is the radius power") {
    const auto F = from_lambda([](cplx z) { return z * z * z; });
    CHECK(max_modulus(F, 1.7) == doctest::Approx(1.7 * 1.7 * 1.7).epsilon(1e-12));
    CHECK(max_modulus(F, 0.5) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("max modulus validates its inputs") {
    const auto F = from_lambda([](cplx z) { return z; });
    CHECK_THROWS_AS(max_modulus(F, 0.0), precondition_error);
    CHECK_THROWS_AS(max_modulus(F, -1.0), precondition_error);
    CHECK_THROWS_AS(max_modulus(F, 1.0, 32), precondition_error);
    CHECK_THROWS_AS(max_modulus(EntireEval{}, 1.0), precondition_error);
}

TEST_CASE("order estimate recovers known growth orders") {
    const auto gauss2 = from_lambda([](cplx z) { return std::exp(z * z); });
    CHECK(order_estimate(gauss2, {2.0, 2.5, 3.0, 3.5, 4.0}) ==
          doctest::Approx(2.0).epsilon(1e-6));

    const auto expo = from_lambda([](cplx z) { return std::exp(z); });
    CHECK(order_estimate(expo, {5.0, 10.0, 20.0, 40.0}) == doctest::Approx(1.0).epsilon(1e-6));

    // cos(sqrt(z)) has order 1/2; cos is even, so the branch cut is harmless.
    const auto half = from_lambda([](cplx z) { return std::cos(std::sqrt(z)); });
    const double est = order_estimate(half, {100.0, 400.0, 1600.0}, 512);
    CHECK(est > 0.4);
    CHECK(est < 0.6);

    // Polynomials have order zero; the finite-radius slope decays like 1/log r.
    const auto poly = from_lambda([](cplx z) { return 1.0 + z * z * z; });
    CHECK(order_estimate(poly, {50.0, 100.0, 200.0, 400.0}) < 0.3);
}

TEST_CASE("order estimate validates its inputs") {
    const auto F = from_lambda([](cplx z) { return std::exp(z); });
    CHECK_THROWS_AS(order_estimate(F, {2.0}), precondition_error);
    CHECK_THROWS_AS(order_estimate(F, {2.0, 2.0}), precondition_error);
    CHECK_THROWS_AS(order_estimate(F, {3.0, 2.0}), precondition_error);
    const auto small = from_lambda([](cplx) { return cplx(0.5); });
    CHECK_THROWS_AS(order_estimate(small, {1.0, 2.0}), precondition_error);
}

TEST_CASE("jensen identity holds exactly for factored polynomials") {
    // F(z) = 1 - z^2, zeros at +-1, radius 2: rhs = 2 log 2.
    const auto F = with_zeros([](cplx z) { return 1.0 - z * z; }, {1.0, -1.0});
    const JensenReport rep = jensen_check(F, 2.0);
    CHECK(rep.rhs == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(rep.gap < 1e-10);

    // F(z) = (1 - z/2)(1 + z/3), zeros 2 and -3; only the first lies in r = 2.5.
    const auto G = with_zeros([](cplx z) { return (1.0 - z / 2.0) * (1.0 + z / 3.0); },
                              {2.0, -3.0});
    const JensenReport grep = jensen_check(G, 2.5);
    CHECK(grep.rhs == doctest::Approx(std::log(1.25)).epsilon(1e-14));
    CHECK(grep.gap < 1e-10);
}

TEST_CASE("jensen identity accepts zero-free functions") {
    const auto F = with_zeros([](cplx z) { return std::exp(z); }, {});
    const JensenReport rep = jensen_check(F, 2.5);
    CHECK(rep.rhs == 0.0);
    CHECK(rep.gap < 1e-12);
}

TEST_CASE("jensen check validates its inputs") {
    const auto noz = from_lambda([](cplx z) { return 1.0 - z * z; });
    CHECK_THROWS_AS(jensen_check(noz, 2.0), precondition_error);

    const auto vanishing = with_zeros([](cplx z) { return z; }, {0.0});
    CHECK_THROWS_AS(jensen_check(vanishing, 2.0), precondition_error);

    const auto F = with_zeros([](cplx z) { return 1.0 - z * z; }, {1.0, -1.0});
    CHECK_THROWS_AS(jensen_check(F, 1.0005), precondition_error);
    CHECK_THROWS_AS(jensen_check(F, 0.0), precondition_error);
    CHECK_THROWS_AS(jensen_check(F, 2.0, 32), precondition_error);
}

TEST_CASE("zero count bound closed form and optimizer") {
    // log C = 0, b s^2 r^2 = e, log s = 1/2 gives exactly 2e.
    CHECK(zero_count_bound(1.0, 1.0, 1.0, std::sqrt(std::exp(1.0))) ==
          doctest::Approx(5.4365636569180905).epsilon(1e-14));

    CHECK_THROWS_AS(zero_count_bound(1.0, 1.0, 1.0, 1.0), precondition_error);
    CHECK_THROWS_AS(zero_count_bound(1.0, 1.0, 1.0, 0.5), precondition_error);
    CHECK_THROWS_AS(zero_count_bound(0.0, 1.0, 1.0, 2.0), precondition_error);
    CHECK_THROWS_AS(zero_count_bound(1.0, 0.0, 1.0, 2.0), precondition_error);
    CHECK_THROWS_AS(zero_count_bound(1.0, 1.0, -1.0, 2.0), precondition_error);

    // A clean disk around the origin admits no zeros at all.
    CHECK(zero_count_bound_optimal(1.0, 1.0, 0.0) == 0.0);

    // The optimizer should match a brute-force scan over s and never beat it
    // by more than the scan resolution.
    const double opt = zero_count_bound_optimal(1.0, 1.0, 2.0);
    double scan = 1e300;
    for (double s = 1.0001; s <= 10.0; s += 1e-4)
        scan = std::min(scan, zero_count_bound(1.0, 1.0, 2.0, s));
    CHECK(opt == doctest::Approx(scan).epsilon(1e-6));
    CHECK(opt <= scan + 1e-9);
}

TEST_CASE("density threshold closed form matches the numeric maximizer") {
    CHECK(density_threshold(TWO_PI) == doctest::Approx(0.24197072451914335).epsilon(1e-14));
    CHECK(density_threshold(1.0) == doctest::Approx(0.60653065971263342).epsilon(1e-14));
    for (double b : {0.5, 1.0, TWO_PI, 10.0})
        CHECK(density_threshold_numeric(b) == doctest::Approx(density_threshold(b)).epsilon(1e-10));
    CHECK_THROWS_AS(density_threshold(0.0), precondition_error);
    CHECK_THROWS_AS(density_threshold_numeric(-2.0), precondition_error);
}

TEST_CASE("density classification splits at the two thresholds") {
    CHECK(density_classify({0.24, 1}, TWO_PI) == DensityVerdict::uniqueness);
    CHECK(density_classify({2.0, 1}, 1.0) == DensityVerdict::non_uniqueness);
    CHECK(density_classify({1.0, 1}, 1.0) == DensityVerdict::gap);
    CHECK(to_string(DensityVerdict::uniqueness) == std::string("uniqueness"));
    CHECK(to_string(DensityVerdict::gap) == std::string("gap"));
    CHECK(to_string(DensityVerdict::non_uniqueness) == std::string("non_uniqueness"));
    CHECK_THROWS_AS(density_classify({0.0, 1}, 1.0), precondition_error);
    CHECK_THROWS_AS(density_classify({1.0, 1}, 0.0), precondition_error);
}

TEST_CASE("square root sequence evaluates beta sqrt k") {
    const SqrtSequence seq{2.0, 1};
    CHECK(seq.lambda(1) == 2.0);
    CHECK(seq.lambda(4) == 4.0);
    CHECK(seq.lambda(2) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("counterexample witness vanishes on the sequence and nowhere between") {
    const SqrtSequence seq{2.0, 1};
    const auto F = counterexample_build(seq, 1.0, 500);

    CHECK(F.eval(cplx(0.0)) == cplx(1.0));

    // Exact zeros of the truncated product at +-lambda(k). Past k ~ 85 the
    // local derivative reaches ~1e8, so the value at the rounded probe point
    // is no longer tiny; the well-conditioned range is asserted here.
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k) {
        const double lam = seq.lambda(k);
        worst = std::max(worst, std::abs(F.eval(cplx(lam, 0.0))));
        worst = std::max(worst, std::abs(F.eval(cplx(-lam, 0.0))));
    }
    CHECK(worst < 1e-9);

    // The quartic factors vanish on the imaginary copy of the sequence too.
    CHECK(std::abs(F.eval(cplx(0.0, seq.lambda(5)))) < 1e-9);

    // Genuine witness: no collapse between consecutive zeros.
    double mids = 1e300;
    for (int k = 1; k <= 10; ++k) {
        const double m = 0.5 * (seq.lambda(k) + seq.lambda(k + 1));
        mids = std::min(mids, std::abs(F.eval(cplx(m, 0.0))));
    }
    CHECK(mids > 1e-3);

    CHECK(F.tail_log_bound == doctest::Approx(0.078125).epsilon(1e-12));
    REQUIRE(F.growth.has_value());
    CHECK(F.growth->b == 1.0);
    CHECK(F.growth->c == 1.0);

    REQUIRE(F.zeros.has_value());
    REQUIRE(F.zeros->size() == 2000);
    CHECK((*F.zeros)[0] == cplx(2.0, 0.0));
    CHECK((*F.zeros)[1] == cplx(-2.0, 0.0));
    CHECK((*F.zeros)[2] == cplx(0.0, 2.0));
    CHECK((*F.zeros)[3] == cplx(0.0, -2.0));
}

TEST_CASE("counterexample split index controls the simple factor range") {
    const SqrtSequence seq{2.0, 3};
    const auto F = counterexample_build(seq, 1.0, 20);
    CHECK(F.eval(cplx(0.0)) == cplx(1.0));
    CHECK(std::abs(F.eval(cplx(2.0, 0.0))) < 1e-12);

    REQUIRE(F.zeros.has_value());
    // k = 1, 2 contribute the real pair only; k >= 3 add the imaginary pair.
    CHECK(F.zeros->size() == 2 * 2 + 4 * 18);
    CHECK((*F.zeros)[2] == cplx(2.0 * std::sqrt(2.0), 0.0));
    CHECK((*F.zeros)[4] == cplx(seq.lambda(3), 0.0));
    CHECK((*F.zeros)[6] == cplx(0.0, seq.lambda(3)));
}

TEST_CASE("counterexample build validates its inputs") {
    CHECK_THROWS_AS(counterexample_build({1.7, 1}, 1.0, 100), precondition_error);
    CHECK_THROWS_AS(counterexample_build({2.0, 0}, 1.0, 100), precondition_error);
    CHECK_THROWS_AS(counterexample_build({2.0, 5}, 1.0, 3), precondition_error);
    CHECK_THROWS_AS(counterexample_build({2.0, 1}, 0.0, 100), precondition_error);
    CHECK_THROWS_AS(counterexample_build({2.0, 1}, 1.0, 100, -1.0), precondition_error);
}

TEST_CASE("fourier extension reproduces Gaussian transforms on the real axis") {
    const GridSpec g = centered_grid(8.0, 1024);
    const auto F = hermite_extension(0, g);
    const double c = std::pow(2.0, 0.25);
    for (double x : {0.0, 0.3, -1.2}) {
        const cplx v = F.eval(cplx(x, 0.0));
        CHECK(v.real() == doctest::Approx(c * std::exp(-PI * x * x)).epsilon(1e-8));
        CHECK(std::abs(v.imag()) < 1e-12);
    }
}

TEST_CASE("fourier extension orientation matches the transform eigenbasis") {
    // The extension evaluates the transform at the negated argument, so the
    // first Hermite function picks up +i instead of its eigenvalue -i.
    const GridSpec g = centered_grid(8.0, 1024);
    const auto F = hermite_extension(1, g);
    const std::vector<double> h1 = stft::hermite_values(1, g);
    const auto at = [&](double x) {
        return h1[static_cast<std::size_t>(std::llround((x - g.start) / g.step))];
    };
    for (double x : {0.5, -0.5, 1.25}) {
        const cplx v = F.eval(cplx(x, 0.0));
        CHECK(v.imag() == doctest::Approx(at(x)).epsilon(1e-8));
        CHECK(std::abs(v.real()) < 1e-12);
    }
}

TEST_CASE("fourier extension grows like a Gaussian off the real axis") {
    const GridSpec g = centered_grid(8.0, 1024);
    const auto F = hermite_extension(0, g);
    const double c = std::pow(2.0, 0.25);
    for (double y : {0.5, 1.0, 2.0})
        CHECK(std::abs(F.eval(cplx(0.0, y))) * std::exp(-PI * y * y) ==
              doctest::Approx(c).epsilon(1e-8));
    CHECK(max_modulus(F, 1.0) == doctest::Approx(c * std::exp(PI)).epsilon(1e-8));
    const double est = order_estimate(F, {1.5, 2.0, 2.5, 3.0}, 512);
    CHECK(est > 1.9);
    CHECK(est < 2.1);
}

TEST_CASE("fourier extension rejects mismatched data") {
    const GridSpec g = centered_grid(8.0, 1024);
    CHECK_THROWS_AS(fourier_extension(std::vector<cplx>(3, 0.0), g), precondition_error);
    CHECK_THROWS_AS(fourier_extension({}, GridSpec{}), precondition_error);
}
