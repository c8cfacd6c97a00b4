#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covel/dual.hpp"
#include "covel/rng.hpp"

using namespace covel;

namespace {

D1 var(double v) { return D1(v, {1.0}); }

// Independent central-difference oracle for the unary functions.
template <class F>
double fd(F f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace

TEST_CASE("product rule is exact") {
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(-3.0, 3.0);
        const double b = rng.uniform(-3.0, 3.0);
        const double ta = rng.uniform(-2.0, 2.0);
        const double tb = rng.uniform(-2.0, 2.0);
        D1 x(a, {ta}), y(b, {tb});
        D1 p = x * y;
        CHECK(p.primal == a * b);
        // tangent of a*b equals a.primal*b.tangent + b.primal*a.tangent, bitwise
        CHECK(p.tangents[0] == ta * b + a * tb);
    }
}

TEST_CASE("zero-tangent duals behave as their primal") {
    SplitMix64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(0.1, 2.0);
        D1 ca(a); // constant: empty tangents
        D1 cb(b);
        CHECK((ca + cb).primal == a + b);
        CHECK((ca * cb).primal == a * b);
        CHECK((ca / cb).primal == a / b);
        CHECK((ca * cb).tangents.empty());
        D1 s = sin(ca);
        CHECK(s.primal == std::sin(a));
        CHECK(s.tangents.empty());
        // mixing a constant with a seeded dual keeps the seeded width
        D1 x(a, {1.0});
        CHECK((x * cb).tangents.size() == 1);
        CHECK((x * cb).tangents[0] == b);
    }
}

TEST_CASE("elementary function derivatives match finite differences") {
    SplitMix64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(0.1, 1.4);
        CHECK(sin(var(x)).tangents[0] == doctest::Approx(fd([](double t) { return std::sin(t); }, x)).epsilon(1e-9));
        CHECK(cos(var(x)).tangents[0] == doctest::Approx(fd([](double t) { return std::cos(t); }, x)).epsilon(1e-9));
        CHECK(tan(var(x)).tangents[0] == doctest::Approx(fd([](double t) { return std::tan(t); }, x)).epsilon(1e-8));
        CHECK(exp(var(x)).tangents[0] == doctest::Approx(fd([](double t) { return std::exp(t); }, x)).epsilon(1e-9));
        CHECK(log(var(x)).tangents[0] == doctest::Approx(fd([](double t) { return std::log(t); }, x)).epsilon(1e-8));
        CHECK(sqrt(var(x)).tangents[0] == doctest::Approx(fd([](double t) { return std::sqrt(t); }, x)).epsilon(1e-8));
        CHECK(atan(var(x)).tangents[0] == doctest::Approx(fd([](double t) { return std::atan(t); }, x)).epsilon(1e-9));
        CHECK(acos(var(x) * 0.5).tangents[0] ==
              doctest::Approx(0.5 * fd([](double t) { return std::acos(t); }, 0.5 * x)).epsilon(1e-8));
    }
}

TEST_CASE("nested duals produce exact second derivatives") {
    // f(x) = sin(x) * x^2; f''(x) = 2 sin x + 4 x cos x - x^2 sin x
    const double x = 0.8;
    D2 lifted(D1(x, {1.0}), {D1(1.0)});
    D2 y = sin(lifted) * lifted * lifted;
    const double expected = 2.0 * std::sin(x) + 4.0 * x * std::cos(x) - x * x * std::sin(x);
    CHECK(y.tangents[0].tangents[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("integer powers accept negative bases") {
    D1 x(-3.0, {1.0});
    D1 y = pow(x, 2.0);
    CHECK(y.primal == 9.0);
    CHECK(y.tangents[0] == -6.0);
    CHECK_THROWS_AS(pow(x, 0.5), NumericError);
}

TEST_CASE("atan2 matches the quotient rule away from the seam") {
    SplitMix64 rng(14);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(0.2, 2.0);
        const double y = rng.uniform(-2.0, 2.0);
        D1 dy(y, {1.0, 0.0});
        D1 dx(x, {0.0, 1.0});
        D1 a = atan2(dy, dx);
        const double denom = x * x + y * y;
        CHECK(a.primal == std::atan2(y, x));
        CHECK(a.tangents[0] == doctest::Approx(x / denom).epsilon(1e-14));
        CHECK(a.tangents[1] == doctest::Approx(-y / denom).epsilon(1e-14));
    }
}

TEST_CASE("domain violations throw instead of poisoning NaN") {
    CHECK_THROWS_AS(log(var(-1.0)), NumericError);
    CHECK_THROWS_AS(log(var(0.0)), NumericError);
    CHECK_THROWS_AS(sqrt(var(-0.5)), NumericError);
    CHECK_THROWS_AS(acos(var(1.5)), NumericError);
}
