#include "phaseless/windows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace phaseless::windows {

namespace {

const double QUARTER_ROOT_2 = std::pow(2.0, 0.25);
const double TWO_ROOT_PI = 2.0 * std::sqrt(PI);

// Polynomial part of h_n: h_n(z) = p_n(z) exp(-pi z^2), same recurrence as the
// functions themselves since the Gaussian factor cancels term by term.
cplx hermite_poly(int n, cplx z) {
    cplx pk = QUARTER_ROOT_2;
    if (n == 0) return pk;
    cplx pk1 = TWO_ROOT_PI * z * pk;
    for (int k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const cplx next = (TWO_ROOT_PI / std::sqrt(kk + 1.0)) * z * pk1 -
                          std::sqrt(kk / (kk + 1.0)) * pk;
        pk = pk1;
        pk1 = next;
    }
    return pk1;
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z) {
    cplx acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

void check(const WindowSpec& w) {
    if (const auto* g = std::get_if<Gaussian>(&w.shape)) {
        if (!(g->gamma > 0.0)) throw precondition_error("window: gamma must be positive");
    } else if (const auto* h = std::get_if<Hermite>(&w.shape)) {
        if (h->n < 0) throw precondition_error("window: hermite degree must be >= 0");
    } else {
        const auto& p = std::get<PolyGaussian>(w.shape);
        if (!(p.gamma > 0.0)) throw precondition_error("window: gamma must be positive");
        if (p.coeffs.empty()) throw precondition_error("window: empty coefficient list");
        bool nonzero = false;
        for (const cplx& c : p.coeffs) nonzero = nonzero || c != cplx(0.0);
        if (!nonzero) throw precondition_error("window: zero polynomial");
    }
}

// Polynomial factor in front of exp(-gamma z^2); 1 for a plain Gaussian.
cplx poly_part(const WindowSpec& w, cplx z) {
    if (std::holds_alternative<Gaussian>(w.shape)) return 1.0;
    if (const auto* h = std::get_if<Hermite>(&w.shape)) return hermite_poly(h->n, z);
    return poly_eval(std::get<PolyGaussian>(w.shape).coeffs, z);
}

}

WindowSpec WindowSpec::gaussian(double gamma) {
    WindowSpec w{Gaussian{gamma}};
    check(w);
    return w;
}

WindowSpec WindowSpec::hermite(int n) {
    WindowSpec w{Hermite{n}};
    check(w);
    return w;
}

WindowSpec WindowSpec::poly_gaussian(std::vector<cplx> coeffs, double gamma) {
    WindowSpec w{PolyGaussian{std::move(coeffs), gamma}};
    check(w);
    return w;
}

double WindowSpec::gamma() const {
    if (const auto* g = std::get_if<Gaussian>(&shape)) return g->gamma;
    if (std::holds_alternative<Hermite>(shape)) return PI;
    return std::get<PolyGaussian>(shape).gamma;
}

GrowthEnvelope envelope(double a, double b, double c) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw precondition_error("envelope: a, b, c must be positive");
    return GrowthEnvelope{{a}, {b}, c};
}

cplx eval_window(const WindowSpec& w, cplx z) {
    check(w);
    return poly_part(w, z) * std::exp(-w.gamma() * z * z);
}

double log_abs_window(const WindowSpec& w, cplx z) {
    check(w);
    const cplx p = poly_part(w, z);
    const double lp = std::log(std::abs(p));  // -inf at polynomial zeros
    const cplx z2 = z * z;
    return lp - w.gamma() * z2.real();
}

void window_profile(const WindowSpec& w, const GridSpec& g, double x, std::vector<cplx>& out) {
    check(w);
    if (g.count < 2 || g.step <= 0.0) throw precondition_error("window_profile: bad grid");
    out.resize(g.count);

    const double gamma = w.gamma();
    const double dt = g.step;

    // Start where the Gaussian factor peaks and sweep outward in both
    // directions: e(u +- dt) = e(u) * exp(-gamma (2 u dt + dt^2)), with the
    // cross factor itself advanced multiplicatively.
    const double xk = (x - g.start) / dt;
    const std::size_t k0 =
        static_cast<std::size_t>(std::clamp(std::llround(xk), 0LL, static_cast<long long>(g.count - 1)));
    const double u0 = g.value(k0) - x;
    const double step2 = std::exp(-gamma * dt * dt);

    std::vector<double> gauss(g.count);
    gauss[k0] = std::exp(-gamma * u0 * u0);
    double cross = std::exp(-gamma * (2.0 * u0 * dt + dt * dt));
    double e = gauss[k0];
    for (std::size_t k = k0 + 1; k < g.count; ++k) {
        e *= cross;
        cross *= step2 * step2;
        gauss[k] = e;
    }
    cross = std::exp(gamma * (2.0 * u0 * dt - dt * dt));
    e = gauss[k0];
    for (std::size_t k = k0; k-- > 0;) {
        e *= cross;
        cross *= step2 * step2;
        gauss[k] = e;
    }

    if (std::holds_alternative<Gaussian>(w.shape)) {
        for (std::size_t k = 0; k < g.count; ++k) out[k] = gauss[k];
        return;
    }
    for (std::size_t k = 0; k < g.count; ++k)
        out[k] = poly_part(w, cplx(g.value(k) - x)) * gauss[k];
}

EnvelopeFit envelope_fit(const WindowSpec& w, double a, double b, double radius,
                         std::size_t points_per_axis) {
    check(w);
    if (!(a > 0.0) || !(b > 0.0)) throw precondition_error("envelope_fit: a, b must be positive");
    if (!(radius > 0.0) || points_per_axis < 3)
        throw precondition_error("envelope_fit: bad grid request");

    // The three grids share one step, so they nest and an interior sup is hit
    // at the same sample point every time; the verdict then measures only
    // whether new mass appears near the enlarged rim.
    const auto log_sup = [&](double R, std::size_t pts) {
        double best = -std::numeric_limits<double>::infinity();
        const double h = 2.0 * R / static_cast<double>(pts - 1);
        for (std::size_t i = 0; i < pts; ++i) {
            const double x = -R + h * static_cast<double>(i);
            for (std::size_t j = 0; j < pts; ++j) {
                const double y = -R + h * static_cast<double>(j);
                const double v = log_abs_window(w, cplx(x, y)) + a * x * x - b * y * y;
                best = std::max(best, v);
            }
        }
        return best;
    };

    const double l1 = log_sup(radius, points_per_axis);
    const double l2 = log_sup(2.0 * radius, 2 * (points_per_axis - 1) + 1);
    const double l4 = log_sup(4.0 * radius, 4 * (points_per_axis - 1) + 1);

    // Relative comparisons on the sup itself, done in log space so a runaway
    // ratio cannot overflow before the verdict.
    const auto stable = [](double la, double lb) {
        return std::abs(std::expm1(lb - la)) < 0.01;
    };

    EnvelopeFit fit;
    fit.env = envelope(a, b, std::exp(l1));
    fit.bounded = stable(l1, l2) && stable(l2, l4);
    fit.sup_r1 = std::exp(l1);
    fit.sup_r2 = std::exp(l2);
    fit.sup_r4 = std::exp(l4);
    return fit;
}

GrowthEnvelope class_after_product(const GrowthEnvelope& env, double epsilon) {
    if (!(epsilon > 0.0)) throw precondition_error("class_after_product: epsilon must be positive");
    GrowthEnvelope out = env;
    for (std::size_t j = 0; j < env.a.size(); ++j) {
        if (env.a[j] - epsilon <= 0.0)
            throw precondition_error("class_after_product: epsilon consumes the decay rate");
        out.a[j] = env.a[j] - epsilon;
    }
    for (double& bj : out.b) bj += epsilon;
    return out;
}

}
