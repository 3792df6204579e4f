#pragma once

#include "phaseless/types.hpp"

#include <variant>

namespace phaseless::windows {

// exp(-gamma z^2), gamma > 0.
struct Gaussian {
    double gamma = PI;
};

// Orthonormal Hermite function h_n: h_0(t) = 2^{1/4} exp(-pi t^2) and
//   h_{n+1}(t) = (2 sqrt(pi) t / sqrt(n+1)) h_n(t) - sqrt(n/(n+1)) h_{n-1}(t),
// so that integral |h_n|^2 dt = 1 for every n.
struct Hermite {
    int n = 0;
};

// p(z) exp(-gamma z^2) with complex coefficients, ascending degree.
struct PolyGaussian {
    std::vector<cplx> coeffs;
    double gamma = PI;
};

struct WindowSpec {
    std::variant<Gaussian, Hermite, PolyGaussian> shape;

    static WindowSpec gaussian(double gamma);
    static WindowSpec hermite(int n);
    static WindowSpec poly_gaussian(std::vector<cplx> coeffs, double gamma);

    double gamma() const;  // Gaussian decay rate (pi for Hermite)
};

// Axis-wise decay/growth certificate: |F(x+iy)| <= c exp(-a_j x_j^2) exp(b_j y_j^2).
struct GrowthEnvelope {
    std::vector<double> a;
    std::vector<double> b;
    double c = 1.0;
};

GrowthEnvelope envelope(double a, double b, double c = 1.0);

cplx eval_window(const WindowSpec& w, cplx z);

// log |w(z)|, computed without forming exp(-gamma z^2); -inf at zeros.
double log_abs_window(const WindowSpec& w, cplx z);

// w(g.value(k) - x) for all k. The exponential factor advances by recurrence
// from the grid point nearest x, so the loop is free of exp calls and never
// overflows; entries that underflow to 0 are genuinely negligible.
void window_profile(const WindowSpec& w, const GridSpec& g, double x, std::vector<cplx>& out);

struct EnvelopeFit {
    GrowthEnvelope env;               // c = sup over the requested grid
    bool bounded = false;             // sup stable under two radius doublings
    double sup_r1 = 0.0, sup_r2 = 0.0, sup_r4 = 0.0;
};

// Grid sup of |w(x+iy)| exp(a x^2) exp(-b y^2) over [-radius, radius]^2.
// Verdict "bounded" requires the sup to move less than 1% across radius and
// 2x and 4x radius (same step per axis, so the grids nest).
EnvelopeFit envelope_fit(const WindowSpec& w, double a, double b, double radius = 6.0,
                         std::size_t points_per_axis = 121);

// Envelope of G*F when G has exponential type: (a, b) -> (a - eps, b + eps).
GrowthEnvelope class_after_product(const GrowthEnvelope& env, double epsilon);

}
