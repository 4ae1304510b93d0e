#include "doctest.h"

#include <random>

#include "carleson_lab/kobayashi.hpp"

using namespace clab;

namespace {
CVec pt1(Complex a) { return make_point({a}); }
CVec pt2(Complex a, Complex b) { return make_point({a, b}); }

CVec random_point(std::mt19937_64& rng, int n, double max_norm) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0, 1);
    CVec z(n);
    for (int i = 0; i < n; ++i) z(i) = Complex(g(rng), g(rng));
    return z * (max_norm * std::pow(u(rng), 1.0 / (2 * n)) / z.norm());
}
}  // namespace

TEST_CASE("metric_bounds examples against the Poincare metric") {
    auto disk = DomainSpec::unit_disk();
    auto b = metric_bounds(disk, pt1(0.5), pt1(1.0));
    CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(b.upper == doctest::Approx(2.0).epsilon(1e-8));
    double poincare = 1.0 / (1.0 - 0.25);
    CHECK(exact_metric_model(disk, pt1(0.5), pt1(1.0)) == doctest::Approx(poincare));
    CHECK(b.lower <= poincare);
    CHECK(poincare <= b.upper);

    auto b0 = metric_bounds(disk, pt1(0.0), pt1(1.0));
    CHECK(b0.lower == doctest::Approx(0.5));
    CHECK(b0.upper == doctest::Approx(1.0));

    auto bz = metric_bounds(disk, pt1(0.3), pt1(0.0));
    CHECK(bz.lower == 0.0);
    CHECK(bz.upper == 0.0);
}

TEST_CASE("metric bracket holds on random ball samples") {
    auto ball = DomainSpec::unit_ball(2);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int s = 0; s < 300; ++s) {
        CVec z = random_point(rng, 2, 0.99);
        CVec v = pt2(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
        auto b = metric_bounds(ball, z, v);
        double k = exact_metric_model(ball, z, v);
        CHECK(b.lower <= k * (1 + 1e-9));
        CHECK(k <= b.upper * (1 + 1e-9));
        CHECK(b.upper <= 2 * b.lower * (1 + 1e-12));
    }
}

TEST_CASE("exact_distance_model examples") {
    auto disk = DomainSpec::unit_disk();
    CHECK(exact_distance_model(disk, pt1(0), pt1(0.5)) == doctest::Approx(0.549306).epsilon(1e-6));
    CHECK(exact_distance_model(disk, pt1(0.3), pt1(0.3)) == 0.0);
    CHECK(exact_distance_model(disk, pt1(0.5), pt1(-0.5)) == doctest::Approx(1.098612).epsilon(1e-6));
    CHECK(pseudo_distance_model(disk, pt1(0.5), pt1(-0.5)) == doctest::Approx(0.8));
    auto e12 = DomainSpec::ellipsoid({1, 2}, {1, 1});
    CHECK_THROWS_AS(exact_distance_model(e12, pt2(0, 0), pt2(0.1, 0)), CapabilityError);
}

TEST_CASE("exact distance is symmetric and satisfies the triangle inequality") {
    auto ball = DomainSpec::unit_ball(2);
    std::mt19937_64 rng(23);
    double worst = 0;
    for (int s = 0; s < 2000; ++s) {
        CVec a = random_point(rng, 2, 0.999), b = random_point(rng, 2, 0.999), c = random_point(rng, 2, 0.999);
        double ab = exact_distance_model(ball, a, b), ba = exact_distance_model(ball, b, a);
        CHECK(std::abs(ab - ba) <= 1e-10);
        worst = std::max(worst, ab - exact_distance_model(ball, a, c) - exact_distance_model(ball, c, b));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("ball pseudo-distance matches the product formula off the axes") {
    auto ball = DomainSpec::unit_ball(2);
    // Tangential step at a point near the sphere: rho^2 = t^2 / (1 - |z0|^2).
    const double s = 1.0 - 0.99 * 0.99;
    CHECK(pseudo_distance_model(ball, pt2(0.99, 0), pt2(0.99, 0.01)) == doctest::Approx(0.01 / std::sqrt(s)));
    std::mt19937_64 rng(31);
    for (int k = 0; k < 500; ++k) {
        CVec z = random_point(rng, 2, 0.999), w = random_point(rng, 2, 0.999);
        double oracle = std::sqrt(1.0 - (1.0 - z.squaredNorm()) * (1.0 - w.squaredNorm()) / std::norm(1.0 - w.dot(z)));
        CHECK(pseudo_distance_model(ball, z, w) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("ball distance contracts relative to the embedded disk slice") {
    // The slice {(zeta, 0)} of the ball is a disk; inclusion can only shrink distances,
    // and here the slice is totally geodesic so they agree.
    auto disk = DomainSpec::unit_disk();
    auto ball = DomainSpec::unit_ball(2);
    std::mt19937_64 rng(29);
    for (int s = 0; s < 200; ++s) {
        CVec a = random_point(rng, 1, 0.99), b = random_point(rng, 1, 0.99);
        double dd = exact_distance_model(disk, a, b);
        double db = exact_distance_model(ball, pt2(a(0), 0), pt2(b(0), 0));
        CHECK(db <= dd + 1e-10);
    }
    // Smaller disk of radius 1/2 inside the ball: d_ball <= d_small.
    for (int s = 0; s < 200; ++s) {
        CVec a = random_point(rng, 1, 0.49), b = random_point(rng, 1, 0.49);
        double small = exact_distance_model(disk, CVec(2.0 * a), CVec(2.0 * b));
        double db = exact_distance_model(ball, pt2(a(0), 0), pt2(b(0), 0));
        CHECK(db <= small + 1e-10);
    }
}

TEST_CASE("distance_upper examples") {
    auto disk = DomainSpec::unit_disk();
    double straight = distance_upper(disk, pt1(0), pt1(0.5), 0);
    CHECK(straight == doctest::Approx(std::log(2.0)).epsilon(1e-8));
    CHECK(straight >= exact_distance_model(disk, pt1(0), pt1(0.5)));
    CHECK(distance_upper(disk, pt1(0.2), pt1(0.2), 2) == 0.0);

    auto ball = DomainSpec::unit_ball(2);
    CHECK(distance_upper(ball, pt2(0, 0), pt2(0.5, 0), 0) == doctest::Approx(straight).epsilon(1e-8));
}

TEST_CASE("distance_upper is nonincreasing in refinement and stays an upper bound") {
    auto disk = DomainSpec::unit_disk();
    CVec a = pt1(Complex(0.6, 0.1)), b = pt1(Complex(-0.2, 0.7));
    double exact = exact_distance_model(disk, a, b);
    double prev = std::numeric_limits<double>::infinity();
    for (int level = 0; level <= 2; ++level) {
        double d = distance_upper(disk, a, b, level);
        CHECK(d <= prev + 1e-12);
        CHECK(d >= exact);
        prev = d;
    }
}

TEST_CASE("ball_sandwich examples") {
    auto disk = DomainSpec::unit_disk();
    auto s = ball_sandwich(disk, pt1(0), 0.5);
    CHECK(s.inner.radii(0) == doctest::Approx(0.5));
    CHECK(s.outer.radii(0) == doctest::Approx(2.0));

    auto ball = DomainSpec::unit_ball(2);
    auto s2 = ball_sandwich(ball, pt2(0.5, 0), 0.3);
    CHECK(s2.inner.radii(0) == doctest::Approx(0.075).epsilon(1e-8));
    CHECK(s2.inner.radii(1) == doctest::Approx(0.129904).epsilon(1e-5));
    CHECK(s2.outer.radii(0) / 0.5 == doctest::Approx(0.857143).epsilon(1e-5));

    auto tiny = ball_sandwich(ball, pt2(0.5, 0), 1e-9);
    CHECK(tiny.outer.radii.maxCoeff() < 1e-8);
}

TEST_CASE("ball_membership examples") {
    auto disk = DomainSpec::unit_disk();
    CHECK(ball_membership(disk, pt1(0.3), 0.5, pt1(0.3)) == Membership::Inside);
    CHECK(ball_membership(disk, pt1(0), 0.5, pt1(0.49)) == Membership::Inside);
    for (double th : {0.0, 1.0, 2.5, 4.0})
        CHECK(ball_membership(disk, pt1(0), 0.5, pt1(std::polar(0.9, th))) == Membership::Outside);
}

TEST_CASE("ball_membership on the ellipsoid is consistent with the sandwich") {
    auto e12 = DomainSpec::ellipsoid({1, 2}, {1, 1});
    CVec z0 = pt2(0.2, 0.8);
    auto frame = minimal_frame(e12, z0);
    auto s = ball_sandwich(frame, 0.3);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 100; ++k) {
        CVec z = z0;
        for (int i = 0; i < 2; ++i)
            z += s.outer.radii(i) * Complex(u(rng), u(rng)) * 0.8 * frame.basis.col(i);
        if (!(e12.value(z) < 0)) continue;
        auto m = ball_membership(e12, frame, 0.3, z);
        if (s.inner.gauge(z) < 1) CHECK(m == Membership::Inside);
        if (m == Membership::Outside) CHECK(s.outer.gauge(z) >= 1);
    }
}

TEST_CASE("calibrate_log_envelope on the disk") {
    auto disk = DomainSpec::unit_disk();
    std::vector<CVec> samples;
    for (int k = 0; k <= 20; ++k) samples.push_back(pt1(1.0 - std::pow(10.0, -1.0 - 5.0 * k / 20.0)));
    auto env = calibrate_log_envelope(disk, pt1(0), samples);
    CHECK(env.lower_certified);
    CHECK(env.c1 >= 0.0);
    CHECK(env.c2 <= 0.5 * std::log(2.0) + 1e-9);
    CHECK(env.c2 == doctest::Approx(0.346574).epsilon(1e-4));

    auto doubled = samples;
    doubled.insert(doubled.end(), samples.begin(), samples.end());
    auto env2 = calibrate_log_envelope(disk, pt1(0), doubled);
    CHECK(env2.c1 == env.c1);
    CHECK(env2.c2 == env.c2);

    auto ball = DomainSpec::unit_ball(2);
    std::vector<CVec> radial;
    for (const auto& s : samples) radial.push_back(pt2(s(0), 0));
    auto env3 = calibrate_log_envelope(ball, pt2(0, 0), radial);
    CHECK(env3.c1 == doctest::Approx(env.c1).epsilon(1e-6));
    CHECK(env3.c2 == doctest::Approx(env.c2).epsilon(1e-6));

    CHECK_THROWS_AS(calibrate_log_envelope(disk, pt1(0), std::vector<CVec>(5, pt1(0.5))), ConfigError);
}

TEST_CASE("boundary distance is comparable inside Kobayashi balls") {
    auto disk = DomainSpec::unit_disk();
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0, 1);
    for (double r : {0.3, 0.6}) {
        double worst = 0;
        for (int k = 0; k < 500; ++k) {
            CVec z0 = pt1(std::polar(1 - std::pow(10.0, -4 * u(rng)), 6.28 * u(rng)));
            // Random point of the exact ball via a Mobius image of a small disk point.
            Complex a = z0(0), w = std::polar(r * std::sqrt(u(rng)), 6.28 * u(rng));
            CVec z = pt1((w + a) / (1.0 + std::conj(a) * w));
            double ratio = (1 - std::abs(z(0))) / (1 - std::abs(a));
            worst = std::max({worst, ratio * (1 - r), (1 - r) / ratio});
        }
        CHECK(worst < 4.0);
    }
}
