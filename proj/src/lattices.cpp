#include "phaseless/lattices.hpp"

#include <algorithm>
#include <cmath>

namespace phaseless::lattices {

namespace {

const double INV_SQRT_2PIE = 1.0 / std::sqrt(TWO_PI * std::exp(1.0));

std::vector<double> invert(const std::vector<double>& a, std::size_t m) {
    std::vector<double> lhs = a;
    std::vector<double> rhs(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) rhs[i * m + i] = 1.0;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(lhs[r * m + col]) > std::abs(lhs[pivot * m + col])) pivot = r;
        if (std::abs(lhs[pivot * m + col]) < 1e-12)
            throw precondition_error("lattice: matrix is singular");
        if (pivot != col)
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(lhs[pivot * m + j], lhs[col * m + j]);
                std::swap(rhs[pivot * m + j], rhs[col * m + j]);
            }
        const double inv = 1.0 / lhs[col * m + col];
        for (std::size_t j = 0; j < m; ++j) {
            lhs[col * m + j] *= inv;
            rhs[col * m + j] *= inv;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = lhs[r * m + col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                lhs[r * m + j] -= f * lhs[col * m + j];
                rhs[r * m + j] -= f * rhs[col * m + j];
            }
        }
    }
    return rhs;
}

// Upper bound on the spectral norm: exact for m <= 2, Frobenius above.
double opnorm_bound(const std::vector<double>& a, std::size_t m) {
    if (m == 1) return std::abs(a[0]);
    if (m == 2) {
        const double e = a[0] * a[0] + a[2] * a[2];
        const double g = a[1] * a[1] + a[3] * a[3];
        const double f = a[0] * a[1] + a[2] * a[3];
        const double lmax = 0.5 * (e + g + std::sqrt((e - g) * (e - g) + 4.0 * f * f));
        return std::sqrt(lmax);
    }
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

void check_lattice(const SqrtLattice& lat) {
    if (lat.m < 1) throw precondition_error("lattice: dimension must be >= 1");
    if (lat.matrix.size() != lat.m * lat.m)
        throw precondition_error("lattice: matrix size does not match dimension");
    if (!(lat.radius > 0.0)) throw precondition_error("lattice: radius must be positive");
}

}

double SqrtIndex::value() const {
    return static_cast<double>(sign) * std::sqrt(static_cast<double>(n));
}

SqrtLattice diagonal_lattice(const std::vector<double>& spacings, double radius) {
    const std::size_t m = spacings.size();
    if (m == 0) throw precondition_error("lattice: no spacings");
    std::vector<double> mat(m * m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        if (!(spacings[j] > 0.0)) throw precondition_error("lattice: spacings must be positive");
        mat[j * m + j] = spacings[j];
    }
    return SqrtLattice{std::move(mat), m, radius};
}

SL2Mat make_sl2(double a, double b, double c, double d) {
    if (std::abs(a * d - b * c - 1.0) > 1e-10)
        throw precondition_error("sl2: determinant must be 1");
    return SL2Mat{a, b, c, d};
}

SL2Mat rotation(double theta) {
    return make_sl2(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta));
}

SL2Mat shear(double sigma) {
    return make_sl2(1.0, sigma, 0.0, 1.0);
}

SqrtLattice scaled_lattice(const SL2Mat& S, double alpha, double radius) {
    if (!(alpha > 0.0)) throw precondition_error("lattice: alpha must be positive");
    return SqrtLattice{{alpha * S.a, alpha * S.b, alpha * S.c, alpha * S.d}, 2, radius};
}

std::vector<double> sqrt_set(std::int64_t n_max) {
    if (n_max < 0) throw precondition_error("sqrt_set: n_max must be >= 0");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * n_max + 1));
    for (std::int64_t n = n_max; n >= 1; --n) out.push_back(-std::sqrt(static_cast<double>(n)));
    out.push_back(0.0);
    for (std::int64_t n = 1; n <= n_max; ++n) out.push_back(std::sqrt(static_cast<double>(n)));
    return out;
}

PointSet generate(const SqrtLattice& lat) {
    check_lattice(lat);
    const std::size_t m = lat.m;
    const std::vector<double> inv = invert(lat.matrix, m);
    const double reach = opnorm_bound(inv, m) * lat.radius;
    if (reach * reach > 4e9) throw precondition_error("lattice: truncation too large");
    const std::int64_t n_bound = static_cast<std::int64_t>(std::ceil(reach * reach));

    PointSet out;
    out.dim = m;

    std::vector<SqrtIndex> idx(m);
    std::vector<double> z(m), x(m);

    // Nested ascent over (n_j, s_j) emits points already in lexicographic
    // order of the flattened index vector, +1 before -1.
    const auto emit = [&] {
        for (std::size_t i = 0; i < m; ++i) z[i] = idx[i].value();
        double norm2 = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            double acc = 0.0;
            for (std::size_t cidx = 0; cidx < m; ++cidx) acc += lat.matrix[r * m + cidx] * z[cidx];
            x[r] = acc;
            norm2 += acc * acc;
        }
        // Inclusive boundary: points with ||Az|| mathematically equal to the
        // radius (e.g. (sqrt 2, sqrt 7) at radius 3) must survive rounding.
        if (norm2 <= lat.radius * lat.radius * (1.0 + 1e-12))
            out.points.push_back(LatticePoint{x, idx});
    };

    const auto descend = [&](auto&& self, std::size_t j) -> void {
        if (j == m) {
            emit();
            return;
        }
        for (std::int64_t n = 0; n <= n_bound; ++n) {
            idx[j] = SqrtIndex{n, 1};
            self(self, j + 1);
            if (n > 0) {
                idx[j] = SqrtIndex{n, -1};
                self(self, j + 1);
            }
        }
    };
    descend(descend, 0);
    return out;
}

const char* to_string(ThresholdRule rule) {
    switch (rule) {
        case ThresholdRule::rect: return "rect";
        case ThresholdRule::gaussian: return "gaussian";
        case ThresholdRule::sl2_conservative: return "sl2_conservative";
        case ThresholdRule::sl2_printed: return "sl2_printed";
    }
    return "unknown";
}

bool ThresholdReport::admits(const std::vector<double>& tau, const std::vector<double>& nu) const {
    if (!admissible) return false;
    if (tau.size() != tau_max.size() || nu.size() != nu_max.size()) return false;
    for (std::size_t j = 0; j < tau.size(); ++j)
        if (!(tau[j] > 0.0 && tau[j] < tau_max[j])) return false;
    for (std::size_t j = 0; j < nu.size(); ++j)
        if (!(nu[j] > 0.0 && nu[j] < nu_max[j])) return false;
    return true;
}

ThresholdReport rect_thresholds(const windows::GrowthEnvelope& env) {
    if (env.a.empty() || env.a.size() != env.b.size())
        throw precondition_error("rect_thresholds: envelope needs matching a, b axes");
    ThresholdReport rep;
    rep.rule = ThresholdRule::rect;
    const double e = std::exp(1.0);
    for (std::size_t j = 0; j < env.a.size(); ++j) {
        if (!(env.a[j] > 0.0) || !(env.b[j] > 0.0))
            throw precondition_error("rect_thresholds: envelope rates must be positive");
        rep.tau_max.push_back(1.0 / std::sqrt(2.0 * env.b[j] * e));
        rep.nu_max.push_back(std::sqrt(env.a[j] / (2.0 * PI * PI * e)));
    }
    return rep;
}

ThresholdReport gaussian_thresholds(double gamma) {
    if (!(gamma > 0.0))
        throw precondition_error("gaussian_thresholds: gamma must be positive");
    ThresholdReport rep = rect_thresholds(windows::envelope(gamma, gamma));
    rep.rule = ThresholdRule::gaussian;
    return rep;
}

ThresholdReport sl2_threshold(const SL2Mat& S, ThresholdRule variant) {
    if (variant != ThresholdRule::sl2_conservative && variant != ThresholdRule::sl2_printed)
        throw precondition_error("sl2_threshold: pick one of the sl2 variants");
    ThresholdReport rep;
    rep.rule = variant;
    const double p = S.p();
    const double q = S.q();
    if (!(p - q > 0.0)) {
        rep.admissible = false;
        rep.reason = "p - q <= 0: transformed window admits no rectangular envelope";
        return rep;
    }
    const double alpha =
        variant == ThresholdRule::sl2_conservative
            ? INV_SQRT_2PIE * std::min(1.0 / std::sqrt(p + q), std::sqrt(p - q))
            : INV_SQRT_2PIE * std::min(1.0 / std::sqrt(p - q), std::sqrt(p + q));
    rep.tau_max = {alpha};
    rep.nu_max = {alpha};
    return rep;
}

double shear_admissible_root() {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid * mid * mid + mid - 1.0 < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

PointSet als_preset(std::int64_t n_max) {
    if (n_max < 0) throw precondition_error("als_preset: n_max must be >= 0");
    const double root2 = std::sqrt(2.0);
    PointSet out;
    out.dim = 2;
    const SqrtIndex zero{0, 1};
    out.points.push_back(LatticePoint{{0.0, 0.0}, {zero, zero}});
    for (std::int64_t n = 1; n <= n_max; ++n) {
        for (int s : {1, -1}) {
            const SqrtIndex ix{n, s};
            out.points.push_back(LatticePoint{{root2 * ix.value(), 0.0}, {ix, zero}});
        }
    }
    for (std::int64_t n = 1; n <= n_max; ++n) {
        for (int s : {1, -1}) {
            const SqrtIndex ix{n, s};
            out.points.push_back(LatticePoint{{0.0, root2 * ix.value()}, {zero, ix}});
        }
    }
    out.points.push_back(LatticePoint{{1.0, 0.0}, {}});
    out.points.push_back(LatticePoint{{0.0, 1.0}, {}});
    return out;
}

}
