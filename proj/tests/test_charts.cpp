#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covel/atlas.hpp"
#include "covel/rng.hpp"

using namespace covel;

namespace {

constexpr double kPi = std::numbers::pi;

Transition identityTransition(const ChartPtr& chart) {
    const int n = chart->dim;
    SmoothMap id(n, n, []<TowerScalar T>(std::span<const T> x) { return std::vector<T>(x.begin(), x.end()); });
    return {chart, chart, id, id, chart->domain};
}

// x -> Ax with A = [[2, 1], [0, 3]] on r2.
Transition linearTransition() {
    auto chart = catalogChart("r2");
    SmoothMap fwd(2, 2, []<TowerScalar T>(std::span<const T> x) {
        return std::vector<T>{2.0 * x[0] + x[1], 3.0 * x[1]};
    });
    SmoothMap inv(2, 2, []<TowerScalar T>(std::span<const T> x) {
        T y1 = x[1] / 3.0;
        return std::vector<T>{0.5 * (x[0] - y1), y1};
    });
    return {chart, chart, fwd, inv, chart->domain};
}

Transition polarToCartesianTransition() {
    auto polar = makeChart("polar-test", 2, [](std::span<const double> q) {
        return allFinite(q) && q[0] > 0.1 && std::abs(q[1]) < kPi - 0.05;
    });
    auto cart = catalogChart("r2");
    SmoothMap fwd(2, 2, []<TowerScalar T>(std::span<const T> x) {
        using std::cos;
        using std::sin;
        return std::vector<T>{x[0] * cos(x[1]), x[0] * sin(x[1])};
    });
    SmoothMap inv(2, 2, []<TowerScalar T>(std::span<const T> x) {
        using std::atan2;
        using std::sqrt;
        return std::vector<T>{sqrt(x[0] * x[0] + x[1] * x[1]), atan2(x[1], x[0])};
    });
    return {polar, cart, fwd, inv, polar->domain};
}

Vec randomStereoOverlapPoint(SplitMix64& rng) {
    // annulus 0.6 <= rho <= 1.8: comfortably inside both stereo charts
    const double rho = rng.uniform(0.6, 1.8);
    const double phi = rng.uniform(-kPi, kPi);
    return {rho * std::cos(phi), rho * std::sin(phi)};
}

} // namespace

TEST_CASE("pairing: orthogonal slots, bilinear example, mismatch errors") {
    auto chart = catalogChart("r2");
    Vec q{0.3, 0.4};
    CHECK(pairing({chart, q, {1.0, 0.0}}, {chart, q, {0.0, 1.0}}) == 0.0);
    CHECK(pairing({chart, q, {2.0, 3.0}}, {chart, q, {4.0, 5.0}}) == 23.0);

    CHECK_THROWS_AS(pairing({chart, q, {1.0, 0.0}}, {catalogChart("t2"), q, {0.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(pairing({chart, q, {1.0, 0.0}}, {chart, Vec{0.3, 0.5}, {0.0, 1.0}}), DomainError);
}

TEST_CASE("pushforwardVelocity: identity, linear, polar") {
    auto idT = identityTransition(catalogChart("r2"));
    VelocityPhasePoint p{catalogChart("r2"), {0.5, -1.0}, {2.0, 3.0}};
    auto moved = pushforwardVelocity(idT, p);
    CHECK(moved.q == p.q);
    CHECK(moved.qdot == p.qdot);

    auto linT = linearTransition();
    auto lin = pushforwardVelocity(linT, p);
    CHECK(lin.qdot[0] == doctest::Approx(2.0 * 2.0 + 3.0).epsilon(1e-14));
    CHECK(lin.qdot[1] == doctest::Approx(9.0).epsilon(1e-14));

    // polar (r, phi) = (1, 0), qdot = (0, 1) -> cartesian velocity (0, 1)
    auto polT = polarToCartesianTransition();
    auto vel = pushforwardVelocity(polT, {polT.from, {1.0, 0.0}, {0.0, 1.0}});
    CHECK(vel.qdot[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(vel.qdot[1] == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(pushforwardVelocity(polT, {polT.from, {0.05, 0.0}, {0.0, 1.0}}), DomainError);
}

TEST_CASE("pullbackCovector: identity, transpose action, pairing preservation") {
    auto idT = identityTransition(catalogChart("r2"));
    CovectorAtPoint a{catalogChart("r2"), {0.5, -1.0}, {2.0, -3.0}};
    auto back = pullbackCovector(idT, a);
    CHECK(back.alpha == a.alpha);

    // x -> Ax pulls covectors back by A^T
    auto linT = linearTransition();
    Vec qFrom{0.5, -1.0};
    Vec qTo = linT.forward.evalReal(qFrom);
    auto pulled = pullbackCovector(linT, {linT.to, qTo, {1.0, 2.0}});
    CHECK(pulled.alpha[0] == doctest::Approx(2.0 * 1.0).epsilon(1e-14));           // A^T row 1
    CHECK(pulled.alpha[1] == doctest::Approx(1.0 * 1.0 + 3.0 * 2.0).epsilon(1e-14)); // A^T row 2

    // pairing(pullback(a'), v) = pairing(a', pushforward(v)) on sphere overlaps
    auto ns = sphereStereoNorthToSouth();
    SplitMix64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Vec q = randomStereoOverlapPoint(rng);
        Vec qdot{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        Vec alpha{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        VelocityPhasePoint v{ns.from, q, qdot};
        auto pushed = pushforwardVelocity(ns, v);
        CovectorAtPoint aTo{ns.to, pushed.q, alpha};
        const double lhs = pairing(pullbackCovector(ns, aTo), v);
        const double rhs = pairing(aTo, pushed);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("pushforwardJet: identity, linear, circular motion gains centripetal acceleration") {
    auto idT = identityTransition(catalogChart("r2"));
    JetPoint j{catalogChart("r2"), {0.5, -1.0}, {2.0, 3.0}, {0.1, -0.2}};
    auto same = pushforwardJet(idT, j);
    CHECK(same.qddot == j.qddot);

    auto linT = linearTransition();
    auto lin = pushforwardJet(linT, j);
    CHECK(lin.qddot[0] == doctest::Approx(2.0 * 0.1 + (-0.2)).epsilon(1e-14));
    CHECK(lin.qddot[1] == doctest::Approx(3.0 * -0.2).epsilon(1e-14));

    // uniform circular motion: polar jet (r=1, phi=w t), qdot=(0,w), qddot=0
    auto polT = polarToCartesianTransition();
    const double w = 1.3, t = 0.4;
    JetPoint polarJet{polT.from, {1.0, w * t}, {0.0, w}, {0.0, 0.0}};
    auto cart = pushforwardJet(polT, polarJet);
    CHECK(cart.qddot[0] == doctest::Approx(-w * w * std::cos(w * t)).epsilon(1e-12));
    CHECK(cart.qddot[1] == doctest::Approx(-w * w * std::sin(w * t)).epsilon(1e-12));
}

TEST_CASE("pushforwardJet agrees with the jet of the transformed curve") {
    auto polT = polarToCartesianTransition();
    Curve spiral(2, []<TowerScalar T>(std::span<const T> t) {
        using std::sin;
        return std::vector<T>{1.0 + 0.3 * sin(t[0]), 0.9 * t[0]};
    });
    Curve transformed = composeCurve(polT.forward, spiral);
    SplitMix64 rng(32);
    for (int trial = 0; trial < 25; ++trial) {
        const double t = rng.uniform(0.1, 1.5);
        auto base = spiral.jet(t);
        auto lifted = pushforwardJet(polT, {polT.from, base.q, base.qdot, base.qddot});
        auto direct = transformed.jet(t);
        for (int i = 0; i < 2; ++i) {
            CHECK(lifted.qdot[static_cast<std::size_t>(i)] ==
                  doctest::Approx(direct.qdot[static_cast<std::size_t>(i)]).epsilon(1e-12));
            CHECK(lifted.qddot[static_cast<std::size_t>(i)] ==
                  doctest::Approx(direct.qddot[static_cast<std::size_t>(i)]).epsilon(1e-12));
        }
        // independent finite-difference check of the transformed second derivative
        const double h = 1e-4;
        Vec qp = transformed.value(t + h), q0 = transformed.value(t), qm = transformed.value(t - h);
        for (int i = 0; i < 2; ++i) {
            const double fdd = (qp[static_cast<std::size_t>(i)] - 2.0 * q0[static_cast<std::size_t>(i)] +
                                qm[static_cast<std::size_t>(i)]) /
                               (h * h);
            CHECK(std::abs(lifted.qddot[static_cast<std::size_t>(i)] - fdd) <= 1e-6);
        }
    }
}

TEST_CASE("round trips across the stereographic transition at 1e-10") {
    auto ns = sphereStereoNorthToSouth();
    auto sn = reversed(ns);
    SplitMix64 rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        Vec q = randomStereoOverlapPoint(rng);
        Vec qdot{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        Vec qddot{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};

        VelocityPhasePoint p{ns.from, q, qdot};
        auto thereAndBack = pushforwardVelocity(sn, pushforwardVelocity(ns, p));
        CHECK(normInf(thereAndBack.q - q) <= 1e-10);
        CHECK(normInf(thereAndBack.qdot - qdot) <= 1e-10);

        JetPoint j{ns.from, q, qdot, qddot};
        auto jetBack = pushforwardJet(sn, pushforwardJet(ns, j));
        CHECK(normInf(jetBack.qddot - qddot) <= 1e-10);

        Vec alpha{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        CovectorAtPoint a{ns.from, q, alpha};
        auto covBack = pullbackCovector(ns, pushforwardCovector(ns, a));
        CHECK(normInf(covBack.alpha - alpha) <= 1e-10);
    }
}

TEST_CASE("transition invariants: inverse o forward is the identity, Jacobian well-conditioned") {
    auto ns = sphereStereoNorthToSouth();
    auto as = sphereAnglesToStereoNorth();
    SplitMix64 rng(34);
    for (int trial = 0; trial < 100; ++trial) {
        Vec q = randomStereoOverlapPoint(rng);
        Vec back = ns.inverse.evalReal(ns.forward.evalReal(q));
        CHECK(normInf(back - q) <= 1e-10);
        CHECK(conditionNumber1(jacobian(ns.forward, q)) < 1e8);

        Vec ang{rng.uniform(0.3, kPi - 0.3), rng.uniform(-2.8, 2.8)};
        Vec angBack = as.inverse.evalReal(as.forward.evalReal(ang));
        CHECK(normInf(angBack - ang) <= 1e-10);
        CHECK(conditionNumber1(jacobian(as.forward, ang)) < 1e8);
    }
}

TEST_CASE("circle atlas transition handles both overlap arcs") {
    auto ab = circleAToB();
    // positive arc: coordinates agree
    auto p1 = pushforwardVelocity(ab, {ab.from, {1.2}, {0.7}});
    CHECK(p1.q[0] == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(p1.qdot[0] == doctest::Approx(0.7).epsilon(1e-14));
    // negative arc: shifted by 2 pi
    auto p2 = pushforwardVelocity(ab, {ab.from, {-1.2}, {0.7}});
    CHECK(p2.q[0] == doctest::Approx(2.0 * kPi - 1.2).epsilon(1e-14));
    CHECK(p2.qdot[0] == doctest::Approx(0.7).epsilon(1e-14));
    // the seam point theta = 0 is not in the overlap
    CHECK_THROWS_AS(pushforwardVelocity(ab, {ab.from, {0.0}, {1.0}}), DomainError);
}

TEST_CASE("chart domain violations are hard errors") {
    auto sphere = catalogChart("s2-angles");
    CHECK(sphere->contains(Vec{1.0, 9.0})); // phi runs free
    CHECK_FALSE(sphere->contains(Vec{0.001, 0.0}));
    CHECK_FALSE(sphere->contains(Vec{kPi, 0.0}));
    CHECK_THROWS_AS(requireInChart(sphere, Vec{0.001, 0.0}, "test"), DomainError);
    auto r2 = catalogChart("r2");
    CHECK_FALSE(r2->contains(Vec{std::nan(""), 0.0}));
}
