#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace phaseless {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846;
inline constexpr double TWO_PI = 2.0 * PI;

// Input outside an operation's documented domain.
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Computation degenerated (overflow, lost anchor, no usable data).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform grid t = start + step * i, i in [0, count).
struct GridSpec {
    double start = 0.0;
    double step = 0.0;
    std::size_t count = 0;

    double value(std::size_t i) const { return start + step * static_cast<double>(i); }
    double back() const { return count == 0 ? start : value(count - 1); }
    bool operator==(const GridSpec&) const = default;
};

// Symmetric grid covering [-half_width, half_width); contains 0 for even count.
GridSpec centered_grid(double half_width, std::size_t count);

// Complex samples f(t0 + k dt). Integrals over the grid are rectangle sums
// dt * sum(values); all quadrature in the library uses this rule.
struct Signal {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<cplx> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    GridSpec grid() const { return GridSpec{t0, dt, values.size()}; }
};

void validate(const Signal& f);

double norm_l2(const Signal& f);
double norm_l1(const Signal& f);

// dt * sum f conj(g); both signals must share the same grid.
cplx inner(const Signal& f, const Signal& g);

// Seeded uniform generator used everywhere randomness is needed, so a fixed
// seed reproduces results bit for bit on a given build.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t raw() { return state_(); }
    double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }  // [0, 1)
    double symmetric() { return 2.0 * uniform() - 1.0; }                       // [-1, 1)
    cplx box() { return cplx(symmetric(), symmetric()); }

  private:
    std::mt19937_64 state_;
};

// Independent stream for the r-th restart / case of a seeded run.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t r);

}
