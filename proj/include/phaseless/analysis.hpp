#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "phaseless/types.hpp"

namespace phaseless::analysis {

struct GrowthClaim {
    double b = 0.0;  // claimed |F(z)| <= c e^{b |z|^2}
    double c = 1.0;
};

struct EntireEval {
    std::function<cplx(cplx)> eval;
    std::optional<std::vector<cplx>> zeros;  // all zeros, when known (empty list = none)
    std::optional<GrowthClaim> growth;
    double tail_log_bound = 0.0;  // log-scale truncation error for product evaluators
};

// max over n_theta equispaced angles of |F(r e^{i theta})|.
double max_modulus(const EntireEval& F, double r, std::size_t n_theta = 4096);

// Least-squares slope of log log M(r) against log r. When the fit residual
// exceeds 5% the slope is refit from the three largest radii (the growth order
// is an asymptotic quantity).
double order_estimate(const EntireEval& F, const std::vector<double>& radii,
                      std::size_t n_theta = 4096);

struct JensenReport {
    double lhs = 0.0;  // angular average of log |F| on the circle
    double rhs = 0.0;  // log |F(0)| + sum over interior zeros of log(r / |z|)
    double gap = 0.0;
};

// Both sides of Jensen's formula at radius r. Requires F(0) != 0 and the zeros
// metadata; radii within 1e-3 of a zero modulus are rejected, not regularized.
JensenReport jensen_check(const EntireEval& F, double r, std::size_t n_theta = 4096);

// Zero-count bound (log C + b s^2 r^2) / log s for |F| <= C e^{b |.|^2}, valid
// for any s > 1; the companion optimizer minimizes over s.
double zero_count_bound(double b, double C, double r, double s);
double zero_count_bound_optimal(double b, double C, double r);

// Critical spacing 1 / sqrt(b e) separating square-root sequences dense enough
// for uniqueness; closed form, plus a numeric maximization of
// sqrt(2 log s / (b s^2)) for cross-checking.
double density_threshold(double b);
double density_threshold_numeric(double b);

struct SqrtSequence {
    double beta = 1.0;   // lambda(k) = beta sqrt(k)
    std::int64_t K = 1;  // split index for the counterexample product

    double lambda(std::int64_t k) const;
};

enum class DensityVerdict { uniqueness, gap, non_uniqueness };

const char* to_string(DensityVerdict v);

// uniqueness if beta < 1/sqrt(b e); non_uniqueness if beta > sqrt(pi/b); the
// band in between is left undecided ("gap").
DensityVerdict density_classify(const SqrtSequence& seq, double b);

// Truncated counterexample witness: simple factors (1 - z^2/lambda(k)^2) for
// k < K times quartic factors (1 - z^4/gamma(k)^2), gamma(k) = lambda(k)^2, for
// K <= k <= k_max. Vanishes at +-lambda(k) for k <= k_max (and at
// +-i lambda(k) for k >= K), with F(0) = 1. Evaluated as a sum of complex
// logarithms to dodge partial-product overflow. Requires beta > sqrt(pi/b).
// tail_log_bound reports |z|^4 / (beta^4 k_max), the log-scale truncation
// error on the requested disk; callers decide whether it is small enough.
EntireEval counterexample_build(const SqrtSequence& seq, double b, std::int64_t k_max,
                                double disk_radius = 5.0);

// Entire extension of a finite Fourier integral:
// F(z) = step * sum_k v_k e^{2 pi i z t_k}. Useful for growth checks of
// spectrogram rows, which are exactly such integrals in the frequency variable.
EntireEval fourier_extension(const std::vector<cplx>& v, const GridSpec& g);

}
