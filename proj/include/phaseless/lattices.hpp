#pragma once

#include "phaseless/types.hpp"
#include "phaseless/windows.hpp"

#include <cstdint>
#include <optional>

namespace phaseless::lattices {

// Signed square-root integer s * sqrt(n); n = 0 is stored once with sign +1.
struct SqrtIndex {
    std::int64_t n = 0;
    int sign = 1;

    double value() const;
};

struct LatticePoint {
    std::vector<double> coords;       // A z
    std::vector<SqrtIndex> indices;   // z; empty for points outside the lattice scheme
};

struct PointSet {
    std::size_t dim = 2;
    std::vector<LatticePoint> points;
};

// Finite truncation of A (sqrt Z)^m to the ball |A z| <= radius.
struct SqrtLattice {
    std::vector<double> matrix;  // row-major m x m, invertible
    std::size_t m = 2;
    double radius = 0.0;
};

SqrtLattice diagonal_lattice(const std::vector<double>& spacings, double radius);

// a b / c d with det = 1 (checked to 1e-10); p = 1/(a^2+b^2), q = |ac+bd|.
struct SL2Mat {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    double p() const { return 1.0 / (a * a + b * b); }
    double q() const { return std::abs(a * c + b * d); }
};

SL2Mat make_sl2(double a, double b, double c, double d);
SL2Mat rotation(double theta);
SL2Mat shear(double sigma);

SqrtLattice scaled_lattice(const SL2Mat& S, double alpha, double radius);

// {s sqrt(n) : 0 <= n <= n_max, s = +-1}, ascending, 0 once.
std::vector<double> sqrt_set(std::int64_t n_max);

// All points of the truncated lattice, ordered lexicographically in the
// flattened index vectors (n_1, s_1, n_2, s_2, ...) with +1 before -1.
PointSet generate(const SqrtLattice& lat);

enum class ThresholdRule { rect, gaussian, sl2_conservative, sl2_printed };

const char* to_string(ThresholdRule rule);

struct ThresholdReport {
    ThresholdRule rule = ThresholdRule::rect;
    std::vector<double> tau_max;  // time spacings, one per axis
    std::vector<double> nu_max;   // frequency spacings, one per axis
    bool admissible = true;       // false when the rule's hypothesis fails
    std::string reason;

    // Spacings must be strictly below every bound.
    bool admits(const std::vector<double>& tau, const std::vector<double>& nu) const;
};

// tau_max_j = (2 b_j e)^{-1/2}, nu_max_j = (a_j / (2 pi^2 e))^{1/2}.
ThresholdReport rect_thresholds(const windows::GrowthEnvelope& env);

// rect_thresholds specialized to the pure Gaussian envelope a = b = gamma:
// tau_max = (2 gamma e)^{-1/2}, nu_max = (gamma / (2 pi^2 e))^{1/2}. At
// gamma = pi the two coincide at (2 pi e)^{-1/2}.
ThresholdReport gaussian_thresholds(double gamma);

// Single spacing bound for the lattice alpha S (sqrt Z)^2. The conservative
// variant reads min{(p+q)^{-1/2}, (p-q)^{1/2}}, the printed one swaps the two
// arguments; both are scaled by (2 pi e)^{-1/2} and need p > q.
ThresholdReport sl2_threshold(const SL2Mat& S, ThresholdRule variant = ThresholdRule::sl2_conservative);

// Positive root of sigma^3 + sigma = 1 (shear admissibility boundary),
// bisection to 1e-12.
double shear_admissible_root();

// Cross set sqrt(2)({0} x sqrtZ) u sqrt(2)(sqrtZ x {0}) u {(1,0), (0,1)},
// arms truncated at index n_max. The two unit points carry no indices.
PointSet als_preset(std::int64_t n_max);

}
