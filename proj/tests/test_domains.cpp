#include "doctest.h"

#include <random>

#include "carleson_lab/domains.hpp"

using namespace clab;

namespace {

CVec pt1(Complex a) { return make_point({a}); }
CVec pt2(Complex a, Complex b) { return make_point({a, b}); }

// Brute-force boundary distance for the (1,2) ellipsoid at (0, y): the
// distance squared to the boundary point with |z2| = s is 1 - s^4 + (s - y)^2
// after choosing the phase of z2 to align with y.
double ellipsoid12_axis_distance_oracle(double y) {
    double best = 1e9;
    const int steps = 2'000'000;
    for (int k = 0; k <= steps; ++k) {
        double s = static_cast<double>(k) / steps;
        best = std::min(best, 1.0 - s * s * s * s + (s - y) * (s - y));
    }
    return std::sqrt(best);
}

}  // namespace

TEST_CASE("defining_value examples") {
    auto ball = DomainSpec::unit_ball(2);
    CHECK(defining_value(ball, pt2(0, 0)) == doctest::Approx(-1.0));
    auto e12 = DomainSpec::ellipsoid({1, 2}, {1, 1});
    CHECK(defining_value(e12, pt2(0, 0.9)) == doctest::Approx(-0.3439).epsilon(1e-12));
    auto disk = DomainSpec::unit_disk();
    CHECK(defining_value(disk, pt1(1.0)) == doctest::Approx(0.0));
}

TEST_CASE("defining_value rejects non-finite input") {
    auto disk = DomainSpec::unit_disk();
    CHECK_THROWS_AS(defining_value(disk, pt1(Complex(std::nan(""), 0))), InputDomainError);
}

TEST_CASE("boundary_distance examples") {
    auto ball = DomainSpec::unit_ball(3);
    CHECK(boundary_distance(ball, make_point({0.5, 0, 0})) == doctest::Approx(0.5).epsilon(1e-8));

    auto e12 = DomainSpec::ellipsoid({1, 2}, {1, 1});
    double oracle = ellipsoid12_axis_distance_oracle(0.9);
    CHECK(oracle == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(boundary_distance(e12, pt2(0, 0.9)) == doctest::Approx(0.1).epsilon(1e-8));

    auto disk = DomainSpec::unit_disk();
    CHECK(boundary_distance(disk, pt1(1.0 - 1e-9)) == doctest::Approx(1e-9).epsilon(1e-6));
}

TEST_CASE("boundary_distance precondition") {
    auto disk = DomainSpec::unit_disk();
    CHECK_THROWS_AS(boundary_distance(disk, pt1(1.5)), PreconditionError);
}

TEST_CASE("ellipsoid boundary distance off-axis agrees with sampled boundary oracle") {
    auto e12 = DomainSpec::ellipsoid({1, 2}, {1, 1});
    // Boundary parametrized by |z1| = sqrt(1 - s^4), |z2| = s, phases free;
    // for a real base point the optimal phases are zero.
    CVec z = pt2(0.3, 0.6);
    double best = 1e9;
    for (int k = 0; k <= 400000; ++k) {
        double s = static_cast<double>(k) / 400000;
        double a = std::sqrt(std::max(0.0, 1 - s * s * s * s));
        best = std::min(best, std::hypot(a - 0.3, s - 0.6));
    }
    CHECK(boundary_distance(e12, z) == doctest::Approx(best).epsilon(1e-7));
}

TEST_CASE("line_boundary_distance examples") {
    auto ball = DomainSpec::unit_ball(2);
    CHECK(line_boundary_distance(ball, pt2(0, 0), pt2(1, 0)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(line_boundary_distance(ball, pt2(0.5, 0), pt2(0, 1)) ==
          doctest::Approx(std::sqrt(0.75)).epsilon(1e-8));
    auto e12 = DomainSpec::ellipsoid({1, 2}, {1, 1});
    CHECK(line_boundary_distance(e12, pt2(0, 0.9), pt2(1, 0)) ==
          doctest::Approx(std::sqrt(1 - std::pow(0.9, 4))).epsilon(1e-8));
    CHECK(std::sqrt(1 - std::pow(0.9, 4)) == doctest::Approx(0.586430).epsilon(1e-6));
}

TEST_CASE("line_boundary_distance requires a unit direction") {
    auto ball = DomainSpec::unit_ball(2);
    CHECK_THROWS_AS(line_boundary_distance(ball, pt2(0, 0), pt2(2, 0)), PreconditionError);
}

TEST_CASE("in_collar examples") {
    auto disk = DomainSpec::unit_disk(0.2);
    CHECK(in_collar(disk, pt1(0.9)));
    CHECK_FALSE(in_collar(disk, pt1(0.0)));
    auto ball = DomainSpec::unit_ball(2, 0.2);
    CHECK(in_collar(ball, pt2(0.85, 0)));
}

TEST_CASE("default collar is a fifth of the inradius") {
    CHECK(DomainSpec::unit_ball(2).collar_width() == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(DomainSpec::ellipsoid({1, 2}, {0.5, 1}).collar_width() == doctest::Approx(0.1).epsilon(1e-8));
}

TEST_CASE("spec validation rejects unbounded or non-convex polynomials") {
    // r = x1^2 - 1 is unbounded in the other real directions.
    std::vector<PolyTerm> slab{{1.0, {2, 0}}, {-1.0, {0, 0}}};
    CHECK_THROWS_AS(DomainSpec::convex_polynomial(1, slab, 3.0, pt1(0)), ValidationError);
    // r = (x^2 + y^2 - 1)(x^2 + y^2 - 4) + ... is not convex: use r = 1 - x^2 - y^2 + ...
    std::vector<PolyTerm> nonconvex{{-1.0, {2, 0}}, {-1.0, {0, 2}}, {1.0, {4, 0}}, {1.0, {0, 4}},
                                    {-0.1, {0, 0}}};
    CHECK_THROWS_AS(DomainSpec::convex_polynomial(1, nonconvex, 3.0, pt1(0.9)), ValidationError);
    std::vector<PolyTerm> quartic{{1.0, {4, 0}}, {1.0, {0, 4}}, {-1.0, {0, 0}}};
    auto d = DomainSpec::convex_polynomial(1, quartic, 2.0, pt1(0));
    // Axis points are the nearest: the diagonal point sits at sqrt(2) * 2^{-1/4} > 1.
    CHECK(boundary_distance(d, pt1(0)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("slice distance dominates boundary distance") {
    auto e12 = DomainSpec::ellipsoid({1, 2}, {1, 1});
    auto ball = DomainSpec::unit_ball(2);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0, 1);
    int violations = 0;
    for (int s = 0; s < 1000; ++s) {
        const DomainSpec& d = (s % 2 == 0) ? ball : e12;
        CVec z = pt2(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
        z *= 0.95 * u(rng) / z.norm();
        if (!(d.value(z) < 0)) continue;
        CVec v = pt2(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
        v.normalize();
        if (boundary_distance(d, z) > line_boundary_distance(d, z, v) * (1 + 1e-8)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("sublevel convexity on sampled triples") {
    auto e12 = DomainSpec::ellipsoid({1, 2}, {1, 1});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int s = 0; s < 1000; ++s) {
        CVec a = pt2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
        CVec b = pt2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
        double t = 0.5 * (u(rng) + 1);
        CHECK(e12.value(CVec(t * a + (1 - t) * b)) <= std::max(e12.value(a), e12.value(b)) + 1e-12);
    }
}

TEST_CASE("defining function is comparable to boundary distance near the boundary") {
    for (const auto& d : {DomainSpec::unit_disk(), DomainSpec::unit_ball(2),
                          DomainSpec::ellipsoid({1, 2}, {1, 1})}) {
        double lo = 1e9, hi = 0;
        for (int axis = 0; axis < d.dimension(); ++axis) {
            for (int k = 1; k <= 12; ++k) {
                CVec z = CVec::Zero(d.dimension());
                z(axis) = 1.0 - std::pow(2.0, -k);
                double ratio = std::abs(d.value(z)) / boundary_distance(d, z);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        CHECK(lo > 0.5);
        CHECK(hi / lo < 10.0);
    }
}

TEST_CASE("ellipsoid records axis boundary types") {
    auto e = DomainSpec::ellipsoid({1, 3}, {1, 2});
    CHECK(e.axis_boundary_types() == std::vector<int>{2, 6});
}

TEST_CASE("generic projection agrees with the radial shortcut on the ball") {
    auto ball = DomainSpec::unit_ball(2);
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g;
    for (int s = 0; s < 50; ++s) {
        CVec z = pt2(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
        z *= 0.9 / z.norm() * std::abs(std::sin(s + 1.0));
        auto p = project_to_boundary(ball, z);
        CHECK(p.distance == doctest::Approx(boundary_distance(ball, z)).epsilon(1e-8));
        CHECK(ball.value(p.point) == doctest::Approx(0.0).epsilon(1e-10));
    }
}
