#include "phaseless/types.hpp"

#include <cmath>

namespace phaseless {

GridSpec centered_grid(double half_width, std::size_t count) {
    if (half_width <= 0.0 || count < 2)
        throw precondition_error("centered_grid: need half_width > 0 and count >= 2");
    const double step = 2.0 * half_width / static_cast<double>(count);
    return GridSpec{-half_width, step, count};
}

void validate(const Signal& f) {
    if (f.dt <= 0.0) throw precondition_error("signal: dt must be positive");
    if (f.values.size() < 2) throw precondition_error("signal: need at least 2 samples");
    for (const cplx& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw precondition_error("signal: non-finite sample");
}

double norm_l2(const Signal& f) {
    double s = 0.0;
    for (const cplx& v : f.values) s += std::norm(v);
    return std::sqrt(f.dt * s);
}

double norm_l1(const Signal& f) {
    double s = 0.0;
    for (const cplx& v : f.values) s += std::abs(v);
    return f.dt * s;
}

cplx inner(const Signal& f, const Signal& g) {
    if (!(f.grid() == g.grid()))
        throw precondition_error("inner: signals must share one grid");
    cplx s = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) s += f.values[k] * std::conj(g.values[k]);
    return f.dt * s;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t r) {
    // splitmix64 step keeps streams decorrelated even for adjacent seeds.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (r + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}
