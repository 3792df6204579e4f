#include "phaseless/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace phaseless::analysis {

namespace {

// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi, double tol) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

void check_eval(const EntireEval& F) {
    if (!F.eval) throw precondition_error("analysis: evaluator is empty");
}

}

double max_modulus(const EntireEval& F, double r, std::size_t n_theta) {
    check_eval(F);
    if (!(r > 0.0)) throw precondition_error("max_modulus: radius must be positive");
    if (n_theta < 64) throw precondition_error("max_modulus: need at least 64 angles");
    double best = 0.0;
    for (std::size_t j = 0; j < n_theta; ++j) {
        const double theta = TWO_PI * static_cast<double>(j) / static_cast<double>(n_theta);
        best = std::max(best, std::abs(F.eval(std::polar(r, theta))));
    }
    return best;
}

double order_estimate(const EntireEval& F, const std::vector<double>& radii,
                      std::size_t n_theta) {
    check_eval(F);
    if (radii.size() < 2) throw precondition_error("order_estimate: need at least two radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && radii[i] <= radii[i - 1]))
            throw precondition_error("order_estimate: radii must be positive and increasing");
    }
    std::vector<double> xs(radii.size()), ys(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double m = max_modulus(F, radii[i], n_theta);
        if (!(m > 1.0))
            throw precondition_error("order_estimate: max modulus must exceed 1 at every radius");
        xs[i] = std::log(radii[i]);
        ys[i] = std::log(std::log(m));
    }
    const auto slope_of = [&](std::size_t lo) {
        const std::size_t n = xs.size() - lo;
        double mx = 0.0, my = 0.0;
        for (std::size_t i = lo; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = lo; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        if (sxx == 0.0) throw precondition_error("order_estimate: degenerate radii");
        return std::pair<double, double>{sxy / sxx, my - sxy / sxx * mx};
    };
    const auto [slope, icept] = slope_of(0);
    double ss_res = 0.0, ss_tot = 0.0, my = 0.0;
    for (double y : ys) my += y;
    my /= static_cast<double>(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double fit = slope * xs[i] + icept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    if (ss_tot > 0.0 && std::sqrt(ss_res / ss_tot) > 0.05 && xs.size() > 3)
        return slope_of(xs.size() - 3).first;
    return slope;
}

JensenReport jensen_check(const EntireEval& F, double r, std::size_t n_theta) {
    check_eval(F);
    if (!(r > 0.0)) throw precondition_error("jensen_check: radius must be positive");
    if (n_theta < 64) throw precondition_error("jensen_check: need at least 64 angles");
    if (!F.zeros)
        throw precondition_error("jensen_check: zeros metadata is required");
    const double f0 = std::abs(F.eval(cplx(0.0)));
    if (!(f0 > 0.0)) throw precondition_error("jensen_check: F(0) must be nonzero");
    for (const cplx& z : *F.zeros) {
        if (std::abs(std::abs(z) - r) < 1e-3)
            throw precondition_error("jensen_check: radius collides with a zero modulus");
    }
    JensenReport rep;
    // Trapezoid rule for a periodic integrand degenerates to the plain average.
    double acc = 0.0;
    for (std::size_t j = 0; j < n_theta; ++j) {
        const double theta = TWO_PI * static_cast<double>(j) / static_cast<double>(n_theta);
        acc += std::log(std::abs(F.eval(std::polar(r, theta))));
    }
    rep.lhs = acc / static_cast<double>(n_theta);
    rep.rhs = std::log(f0);
    for (const cplx& z : *F.zeros) {
        const double m = std::abs(z);
        if (m < r) rep.rhs += std::log(r / m);
    }
    rep.gap = std::abs(rep.lhs - rep.rhs);
    return rep;
}

double zero_count_bound(double b, double C, double r, double s) {
    if (!(b > 0.0) || !(C > 0.0)) throw precondition_error("zero_count_bound: b, C must be positive");
    if (!(r >= 0.0)) throw precondition_error("zero_count_bound: radius must be non-negative");
    if (!(s > 1.0)) throw precondition_error("zero_count_bound: s must exceed 1");
    return (std::log(C) + b * s * s * r * r) / std::log(s);
}

double zero_count_bound_optimal(double b, double C, double r) {
    if (!(b > 0.0) || !(C > 0.0)) throw precondition_error("zero_count_bound: b, C must be positive");
    if (!(r >= 0.0)) throw precondition_error("zero_count_bound: radius must be non-negative");
    if (r == 0.0 && C <= 1.0) return 0.0;
    // minimize over u = log s; the objective (log C + b r^2 e^{2u}) / u is
    // unimodal on u > 0
    const double u = golden_min(
        [&](double uu) { return (std::log(C) + b * r * r * std::exp(2.0 * uu)) / uu; }, 1e-8,
        30.0, 1e-12);
    return (std::log(C) + b * r * r * std::exp(2.0 * u)) / u;
}

double density_threshold(double b) {
    if (!(b > 0.0)) throw precondition_error("density_threshold: b must be positive");
    return 1.0 / std::sqrt(b * std::exp(1.0));
}

double density_threshold_numeric(double b) {
    if (!(b > 0.0)) throw precondition_error("density_threshold: b must be positive");
    const double u = golden_min(
        [&](double uu) { return -2.0 * uu / (b * std::exp(2.0 * uu)); }, 1e-8, 30.0, 1e-12);
    return std::sqrt(2.0 * u / (b * std::exp(2.0 * u)));
}

double SqrtSequence::lambda(std::int64_t k) const {
    return beta * std::sqrt(static_cast<double>(k));
}

const char* to_string(DensityVerdict v) {
    switch (v) {
        case DensityVerdict::uniqueness: return "uniqueness";
        case DensityVerdict::gap: return "gap";
        case DensityVerdict::non_uniqueness: return "non_uniqueness";
    }
    return "unknown";
}

DensityVerdict density_classify(const SqrtSequence& seq, double b) {
    if (!(seq.beta > 0.0) || !(b > 0.0))
        throw precondition_error("density_classify: beta and b must be positive");
    if (seq.beta < density_threshold(b)) return DensityVerdict::uniqueness;
    if (seq.beta > std::sqrt(PI / b)) return DensityVerdict::non_uniqueness;
    return DensityVerdict::gap;
}

EntireEval counterexample_build(const SqrtSequence& seq, double b, std::int64_t k_max,
                                double disk_radius) {
    if (!(seq.beta > 0.0) || !(b > 0.0) || !(disk_radius > 0.0))
        throw precondition_error("counterexample_build: beta, b, disk radius must be positive");
    if (seq.K < 1) throw precondition_error("counterexample_build: split index must be >= 1");
    if (k_max < seq.K)
        throw precondition_error("counterexample_build: k_max must be at least the split index");
    if (!(seq.beta > std::sqrt(PI / b)))
        throw precondition_error(
            "counterexample_build: construction requires beta > sqrt(pi/b); sequence too dense");

    const double beta = seq.beta;
    const std::int64_t K = seq.K;
    EntireEval F;
    F.eval = [beta, K, k_max](cplx z) -> cplx {
        cplx logp = 0.0;
        const cplx z2 = z * z;
        for (std::int64_t k = 1; k < K; ++k) {
            const double l2 = beta * beta * static_cast<double>(k);
            logp += std::log(cplx(1.0) - z2 / l2);
        }
        const cplx z4 = z2 * z2;
        const double b4 = beta * beta * beta * beta;
        for (std::int64_t k = K; k <= k_max; ++k) {
            const double g2 = b4 * static_cast<double>(k) * static_cast<double>(k);
            logp += std::log(cplx(1.0) - z4 / g2);
        }
        return std::exp(logp);
    };
    std::vector<cplx> zeros;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        const double l = seq.lambda(k);
        zeros.emplace_back(l, 0.0);
        zeros.emplace_back(-l, 0.0);
        if (k >= K) {
            zeros.emplace_back(0.0, l);
            zeros.emplace_back(0.0, -l);
        }
    }
    F.zeros = std::move(zeros);
    F.growth = GrowthClaim{b, 1.0};
    const double r4 = disk_radius * disk_radius * disk_radius * disk_radius;
    F.tail_log_bound = r4 / (beta * beta * beta * beta * static_cast<double>(k_max));
    return F;
}

EntireEval fourier_extension(const std::vector<cplx>& v, const GridSpec& g) {
    if (v.size() != g.count || v.empty())
        throw precondition_error("fourier_extension: data does not match the grid");
    EntireEval F;
    F.eval = [v, g](cplx z) -> cplx {
        // e^{2 pi i z t_k} via one exponential and a ratio recurrence
        cplx ph = std::exp(cplx(0.0, TWO_PI) * z * g.start);
        const cplx rot = std::exp(cplx(0.0, TWO_PI) * z * g.step);
        cplx acc = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            acc += v[k] * ph;
            ph *= rot;
        }
        return g.step * acc;
    };
    return F;
}

}
