#include <doctest.h>

#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "phaseless/lattices.hpp"
#include "phaseless/types.hpp"

using namespace phaseless;
using namespace phaseless::lattices;

namespace {

// Independent brute-force enumeration of alpha (sqrt Z)^2 inside the ball.
std::set<std::pair<double, double>> brute_rect(double alpha, double radius) {
    std::set<std::pair<double, double>> out;
    const auto nmax = static_cast<std::int64_t>(std::ceil((radius / alpha) * (radius / alpha))) + 1;
    for (std::int64_t n1 = 0; n1 <= nmax; ++n1)
        for (int s1 : {1, -1}) {
            if (n1 == 0 && s1 < 0) continue;
            for (std::int64_t n2 = 0; n2 <= nmax; ++n2)
                for (int s2 : {1, -1}) {
                    if (n2 == 0 && s2 < 0) continue;
                    // Membership decided in index space, where the squared norm
                    // alpha^2 (n1 + n2) is exact up to one rounding; the same
                    // relative slack as the generator keeps boundary points.
                    const double norm2 = alpha * alpha * static_cast<double>(n1 + n2);
                    if (norm2 <= radius * radius * (1.0 + 1e-12)) {
                        const double x = alpha * s1 * std::sqrt(static_cast<double>(n1));
                        const double y = alpha * s2 * std::sqrt(static_cast<double>(n2));
                        out.insert({x, y});
                    }
                }
        }
    return out;
}

std::set<std::pair<double, double>> as_set(const PointSet& ps) {
    std::set<std::pair<double, double>> out;
    for (const auto& p : ps.points) out.insert({p.coords[0], p.coords[1]});
    return out;
}

}  // namespace

TEST_CASE("rect lattice enumeration matches brute force") {
    for (double alpha : {1.0, 0.24, 0.5}) {
        for (double radius : {1.0, 3.0}) {
            const PointSet ps = generate(diagonal_lattice({alpha, alpha}, radius));
            const auto brute = brute_rect(alpha, radius);
            CHECK(ps.points.size() == brute.size());
            CHECK(as_set(ps) == brute);
        }
    }
}

TEST_CASE("identity lattice of radius 3 holds the expected landmarks") {
    const PointSet ps = generate(diagonal_lattice({1.0, 1.0}, 3.0));
    CHECK(ps.points.size() >= 13);
    const auto pts = as_set(ps);
    CHECK(pts.count({0.0, 0.0}) == 1);
    CHECK(pts.count({1.0, 0.0}) == 1);
    CHECK(pts.count({std::sqrt(2.0), 0.0}) == 1);
    CHECK(pts.count({-std::sqrt(2.0), std::sqrt(7.0)}) == 1);
    CHECK(pts.count({3.5, 0.0}) == 0);
}

TEST_CASE("enumeration order is lexicographic with +1 before -1 and 0 stored once") {
    const PointSet ps = generate(diagonal_lattice({1.0, 1.0}, 3.0));
    const double r2 = std::sqrt(2.0);
    REQUIRE(ps.points.size() > 6);
    CHECK(ps.points[0].coords == std::vector<double>{0.0, 0.0});
    CHECK(ps.points[1].coords == std::vector<double>{0.0, 1.0});
    CHECK(ps.points[2].coords == std::vector<double>{0.0, -1.0});
    CHECK(ps.points[3].coords == std::vector<double>{0.0, r2});
    CHECK(ps.points[4].coords == std::vector<double>{0.0, -r2});

    for (const auto& p : ps.points)
        for (const auto& idx : p.indices)
            if (idx.n == 0) CHECK(idx.sign == 1);
}

TEST_CASE("every generated point replays from its integer indices") {
    const SL2Mat S = shear(0.5);
    const SqrtLattice lat = scaled_lattice(S, 0.3, 2.5);
    const PointSet ps = generate(lat);
    CHECK(!ps.points.empty());
    for (const auto& p : ps.points) {
        REQUIRE(p.indices.size() == 2);
        const double z0 = p.indices[0].value();
        const double z1 = p.indices[1].value();
        const double x = lat.matrix[0] * z0 + lat.matrix[1] * z1;
        const double y = lat.matrix[2] * z0 + lat.matrix[3] * z1;
        CHECK(p.coords[0] == x);
        CHECK(p.coords[1] == y);
        CHECK(x * x + y * y <= lat.radius * lat.radius);
    }
}

TEST_CASE("generation rejects singular matrices and absurd truncations") {
    CHECK_THROWS_AS(generate(SqrtLattice{{1.0, 2.0, 2.0, 4.0}, 2, 1.0}), precondition_error);
    CHECK_THROWS_AS(generate(diagonal_lattice({1e-9, 1e-9}, 10.0)), precondition_error);
}

TEST_CASE("sqrt set lists signed roots in ascending order") {
    const std::vector<double> s = sqrt_set(3);
    REQUIRE(s.size() == 7);
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    CHECK(s == std::vector<double>{-r3, -r2, -1.0, 0.0, 1.0, r2, r3});
    CHECK(sqrt_set(0) == std::vector<double>{0.0});
}

TEST_CASE("cross preset holds both arms, the origin, and the two unit points") {
    const PointSet ps = als_preset(10);
    CHECK(ps.points.size() == 43);  // origin + 2*10 per arm + (1,0) + (0,1)
    const auto pts = as_set(ps);
    const double r2 = std::sqrt(2.0);
    CHECK(pts.count({0.0, 0.0}) == 1);
    CHECK(pts.count({1.0, 0.0}) == 1);
    CHECK(pts.count({0.0, 1.0}) == 1);
    CHECK(pts.count({r2, 0.0}) == 1);
    CHECK(pts.count({0.0, -r2}) == 1);
    CHECK(pts.count({r2 * std::sqrt(10.0), 0.0}) == 1);
    std::size_t synthetic = 0;
    for (const auto& p : ps.points) synthetic += p.indices.empty();
    CHECK(synthetic == 2);
}

TEST_CASE("gaussian spacing bound matches its frozen 12-digit value") {
    const ThresholdReport rep = gaussian_thresholds(PI);
    CHECK(rep.rule == ThresholdRule::gaussian);
    REQUIRE(rep.tau_max.size() == 1);
    CHECK(std::abs(rep.tau_max[0] - 0.24197072451914335) < 1e-13);
    CHECK(std::abs(rep.nu_max[0] - 0.24197072451914335) < 1e-13);
    CHECK(rep.admissible);
    CHECK_THROWS_AS(gaussian_thresholds(0.0), precondition_error);
}

TEST_CASE("rect bounds agree with an independent exp/log evaluation") {
    const ThresholdReport rep = rect_thresholds(windows::envelope(2.0, 8.0));
    const double tau = std::exp(-0.5 * (std::log(2.0) + std::log(8.0) + 1.0));
    const double nu = std::exp(0.5 * (std::log(2.0) - std::log(2.0 * PI * PI) - 1.0));
    CHECK(rep.tau_max[0] == doctest::Approx(tau).epsilon(1e-14));
    CHECK(rep.nu_max[0] == doctest::Approx(nu).epsilon(1e-14));
}

TEST_CASE("admissibility needs strictly smaller spacings on every axis") {
    const ThresholdReport rep = gaussian_thresholds(PI);
    const double am = rep.tau_max[0];
    CHECK(rep.admits({0.9 * am}, {0.9 * am}));
    CHECK_FALSE(rep.admits({am}, {0.9 * am}));
    CHECK_FALSE(rep.admits({0.9 * am}, {am}));
    CHECK_FALSE(rep.admits({0.0}, {0.9 * am}));
    CHECK_FALSE(rep.admits({-0.1}, {0.9 * am}));
}

TEST_CASE("rotations reproduce the gaussian bound in both variants") {
    for (double theta : {0.0, 0.3, PI / 4.0, 1.2}) {
        const SL2Mat S = rotation(theta);
        CHECK(S.p() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(S.q() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        for (ThresholdRule rule : {ThresholdRule::sl2_conservative, ThresholdRule::sl2_printed}) {
            const ThresholdReport rep = sl2_threshold(S, rule);
            CHECK(rep.admissible);
            CHECK(std::abs(rep.tau_max[0] - 0.24197072451914335) < 1e-13);
        }
    }
}

TEST_CASE("shear bounds match frozen values and the variants differ") {
    const SL2Mat S = shear(0.5);
    CHECK(S.p() == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(S.q() == doctest::Approx(0.5).epsilon(1e-14));
    const ThresholdReport cons = sl2_threshold(S, ThresholdRule::sl2_conservative);
    const ThresholdReport prin = sl2_threshold(S, ThresholdRule::sl2_printed);
    CHECK(std::abs(cons.tau_max[0] - 0.13253282407500320) < 1e-14);
    CHECK(std::abs(prin.tau_max[0] - 0.27588907369016068) < 1e-14);
    CHECK(cons.tau_max[0] < prin.tau_max[0]);
}

TEST_CASE("steep shears fail the hypothesis with a recorded reason") {
    const ThresholdReport rep = sl2_threshold(shear(0.7));
    CHECK_FALSE(rep.admissible);
    CHECK(!rep.reason.empty());
    CHECK_THROWS_AS(sl2_threshold(shear(0.5), ThresholdRule::rect), precondition_error);
    CHECK_THROWS_AS(sl2_threshold(shear(0.5), ThresholdRule::gaussian), precondition_error);
}

TEST_CASE("shear admissibility boundary solves sigma^3 + sigma = 1") {
    const double r = shear_admissible_root();
    CHECK(std::abs(r * r * r + r - 1.0) < 1e-12);
    CHECK(r > 0.67);
    CHECK(r < 0.69);
    CHECK(std::abs(r - 0.68232780382801933) < 1e-12);
    // The hypothesis p - q > 0 flips exactly at the root.
    CHECK(sl2_threshold(shear(r - 1e-6)).admissible);
    CHECK_FALSE(sl2_threshold(shear(r + 1e-6)).admissible);
}

TEST_CASE("sl2 construction checks the determinant") {
    CHECK_THROWS_AS(make_sl2(1.0, 0.0, 0.0, 2.0), precondition_error);
    CHECK_NOTHROW(make_sl2(2.0, 0.3, 1.0, 0.65));
    const SL2Mat R = rotation(0.3);
    CHECK(R.a * R.d - R.b * R.c == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("scaled lattice multiplies the generator entry by entry") {
    const SL2Mat S = shear(0.5);
    const SqrtLattice lat = scaled_lattice(S, 0.13, 3.0);
    CHECK(lat.matrix == std::vector<double>{0.13, 0.13 * 0.5, 0.0, 0.13});
    CHECK(lat.radius == 3.0);
}

TEST_CASE("threshold rule names round-trip") {
    CHECK(std::string(to_string(ThresholdRule::rect)) == "rect");
    CHECK(std::string(to_string(ThresholdRule::gaussian)) == "gaussian");
    CHECK(std::string(to_string(ThresholdRule::sl2_conservative)) == "sl2_conservative");
    CHECK(std::string(to_string(ThresholdRule::sl2_printed)) == "sl2_printed");
}
