#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covel/rng.hpp"
#include "covel/smooth.hpp"

using namespace covel;

namespace {

SmoothMap productMap() {
    return SmoothMap(2, 1, []<TowerScalar T>(std::span<const T> x) { return std::vector<T>{x[0] * x[1]}; });
}

SmoothMap sinProdMap() {
    // "sin(q1)*q2"
    return SmoothMap(2, 1, []<TowerScalar T>(std::span<const T> x) {
        using std::sin;
        return std::vector<T>{sin(x[0]) * x[1]};
    });
}

SmoothMap polarToCartesian() {
    return SmoothMap(2, 2, []<TowerScalar T>(std::span<const T> x) {
        using std::cos;
        using std::sin;
        return std::vector<T>{x[0] * cos(x[1]), x[0] * sin(x[1])};
    });
}

// Small catalog of maps with sampling ranges, for the property checks.
struct CatalogEntry {
    SmoothMap map;
    double lo, hi;
};

std::vector<CatalogEntry> smoothCatalog() {
    std::vector<CatalogEntry> cat;
    cat.push_back({sinProdMap(), -2.0, 2.0});
    cat.push_back({polarToCartesian(), 0.3, 2.0});
    cat.push_back({SmoothMap(3, 1,
                             []<TowerScalar T>(std::span<const T> x) {
                                 using std::exp;
                                 return std::vector<T>{exp(0.3 * x[0]) * x[1] + x[2] * x[2] * x[1]};
                             }),
                   -1.5, 1.5});
    cat.push_back({SmoothMap(2, 2,
                             []<TowerScalar T>(std::span<const T> x) {
                                 using std::cos;
                                 return std::vector<T>{cos(x[0] * x[1]), x[0] * x[0] - x[1]};
                             }),
                   -1.5, 1.5});
    return cat;
}

Vec randomPoint(SplitMix64& rng, int n, double lo, double hi) {
    Vec p(static_cast<std::size_t>(n));
    for (double& x : p) x = rng.uniform(lo, hi);
    return p;
}

} // namespace

TEST_CASE("gradient: constants, product rule, parsed-style expression") {
    SmoothMap constant(3, 1, []<TowerScalar T>(std::span<const T>) { return std::vector<T>{T(4.25)}; });
    Vec g = gradient(constant, Vec{1.0, -2.0, 0.5});
    CHECK(g == Vec{0.0, 0.0, 0.0});

    Vec gp = gradient(productMap(), Vec{2.0, 3.0});
    CHECK(gp[0] == 3.0);
    CHECK(gp[1] == 2.0);

    // sin(q1)*q2 at (0, 5): oracle by central differences, then the frozen value
    SmoothMap f = sinProdMap();
    Vec point{0.0, 5.0};
    Vec g2 = gradient(f, point);
    for (int i = 0; i < 2; ++i) {
        Vec dir(2, 0.0);
        dir[static_cast<std::size_t>(i)] = 1.0;
        Vec fdv = fdDirectional(f, point, dir, 1e-6);
        CHECK(std::abs(g2[static_cast<std::size_t>(i)] - fdv[0]) <= 1e-8);
    }
    CHECK(g2[0] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(g2[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("jacobian: identity, polar-to-cartesian, linearity") {
    SmoothMap identity(3, 3, []<TowerScalar T>(std::span<const T> x) { return std::vector<T>(x.begin(), x.end()); });
    Mat J = jacobian(identity, Vec{0.3, -1.0, 2.0});
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(J(r, c) == (r == c ? 1.0 : 0.0));

    // polar at (1, 0): hand Jacobian [[cos, -r sin], [sin, r cos]] = I
    Mat Jp = jacobian(polarToCartesian(), Vec{1.0, 0.0});
    CHECK(Jp(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(Jp(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(Jp(1, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(Jp(1, 1) == doctest::Approx(1.0).epsilon(1e-14));

    // linear map x -> Ax has Jacobian A at every point
    SmoothMap lin(2, 2, []<TowerScalar T>(std::span<const T> x) {
        return std::vector<T>{2.0 * x[0] - x[1], 0.5 * x[0] + 3.0 * x[1]};
    });
    SplitMix64 rng(3);
    for (int i = 0; i < 20; ++i) {
        Mat Jl = jacobian(lin, randomPoint(rng, 2, -5.0, 5.0));
        CHECK(Jl(0, 0) == 2.0);
        CHECK(Jl(0, 1) == -1.0);
        CHECK(Jl(1, 0) == 0.5);
        CHECK(Jl(1, 1) == 3.0);
    }
}

TEST_CASE("hessian: quadratic, x^2 y frozen value, linear") {
    SmoothMap halfNorm(3, 1, []<TowerScalar T>(std::span<const T> x) {
        return std::vector<T>{0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])};
    });
    Mat H = hessian(halfNorm, Vec{1.0, -0.3, 2.0});
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(H(r, c) == (r == c ? 1.0 : 0.0));

    // f(x,y) = x^2 y at (1,2): oracle by differencing the gradient at step
    // 1e-4 (tolerance 1e-6), then the frozen matrix [[4,2],[2,0]]
    SmoothMap f(2, 1, []<TowerScalar T>(std::span<const T> x) { return std::vector<T>{x[0] * x[0] * x[1]}; });
    Vec at{1.0, 2.0};
    Mat Hf = hessian(f, at);
    for (int r = 0; r < 2; ++r) {
        Vec plus = at, minus = at;
        plus[static_cast<std::size_t>(r)] += kFdStepSecond;
        minus[static_cast<std::size_t>(r)] -= kFdStepSecond;
        Vec gp = gradient(f, plus), gm = gradient(f, minus);
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(Hf(r, c) - (gp[static_cast<std::size_t>(c)] - gm[static_cast<std::size_t>(c)]) /
                                          (2.0 * kFdStepSecond)) <= 1e-6);
    }
    CHECK(Hf(0, 0) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(Hf(0, 1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(Hf(1, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(Hf(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));

    SmoothMap lin(2, 1, []<TowerScalar T>(std::span<const T> x) { return std::vector<T>{3.0 * x[0] - x[1]}; });
    Mat Hl = hessian(lin, Vec{0.2, 0.7});
    CHECK(normInf(Hl.a) == 0.0);
}

TEST_CASE("fdDirectional: quadratic exactness and cubic expansion") {
    SmoothMap sq(1, 1, []<TowerScalar T>(std::span<const T> x) { return std::vector<T>{x[0] * x[0]}; });
    for (double h : {1e-1, 1e-3, 1e-6})
        CHECK(fdDirectional(sq, Vec{1.0}, Vec{1.0}, h)[0] == doctest::Approx(2.0).epsilon(1e-12));

    // f(x)=x^3 at 1: central difference is exactly 3 + h^2
    SmoothMap cube(1, 1, []<TowerScalar T>(std::span<const T> x) { return std::vector<T>{x[0] * x[0] * x[0]}; });
    for (double h : {0.5, 0.1, 0.01})
        CHECK(fdDirectional(cube, Vec{1.0}, Vec{1.0}, h)[0] == doctest::Approx(3.0 + h * h).epsilon(1e-10));

    CHECK_THROWS_AS(fdDirectional(sq, Vec{1.0}, Vec{1.0}, 0.0), DomainError);
}

TEST_CASE("property: gradient matches per-direction finite differences over the catalog") {
    SplitMix64 rng(21);
    for (auto& entry : smoothCatalog()) {
        if (entry.map.arityOut() != 1) continue;
        for (int trial = 0; trial < 100; ++trial) {
            Vec p = randomPoint(rng, entry.map.arityIn(), entry.lo, entry.hi);
            Vec g = gradient(entry.map, p);
            for (int i = 0; i < entry.map.arityIn(); ++i) {
                Vec dir(static_cast<std::size_t>(entry.map.arityIn()), 0.0);
                dir[static_cast<std::size_t>(i)] = 1.0;
                Vec fdv = fdDirectional(entry.map, p, dir, kFdStepFirst);
                CHECK(std::abs(g[static_cast<std::size_t>(i)] - fdv[0]) <= 1e-6);
            }
        }
    }
}

TEST_CASE("property: Richardson — directional difference converges at order 2") {
    SplitMix64 rng(22);
    for (auto& entry : smoothCatalog()) {
        for (int trial = 0; trial < 20; ++trial) {
            Vec p = randomPoint(rng, entry.map.arityIn(), entry.lo, entry.hi);
            Vec dir = randomPoint(rng, entry.map.arityIn(), -1.0, 1.0);
            Mat J = jacobian(entry.map, p);
            Vec exact = matVec(J, dir);
            const double h = 1e-3;
            Vec e1 = fdDirectional(entry.map, p, dir, h) - exact;
            Vec e2 = fdDirectional(entry.map, p, dir, h / 2.0) - exact;
            const double n1 = normInf(e1), n2 = normInf(e2);
            if (n1 < 1e-12) continue; // directionally linear; nothing to measure
            CHECK(n2 <= n1 / 3.0); // ratio ~4 for a second-order scheme
        }
    }
}

TEST_CASE("property: hessian symmetry at 1e-12") {
    SplitMix64 rng(23);
    for (auto& entry : smoothCatalog()) {
        if (entry.map.arityOut() != 1) continue;
        for (int trial = 0; trial < 50; ++trial) {
            Vec p = randomPoint(rng, entry.map.arityIn(), entry.lo, entry.hi);
            Mat H = hessian(entry.map, p);
            for (int r = 0; r < H.rows; ++r)
                for (int c = 0; c < H.cols; ++c) CHECK(std::abs(H(r, c) - H(c, r)) <= 1e-12);
        }
    }
}

TEST_CASE("property: chain rule jacobian(F o G) = jacobian(F) jacobian(G)") {
    SmoothMap G = polarToCartesian();
    SmoothMap F(2, 2, []<TowerScalar T>(std::span<const T> x) {
        using std::sin;
        return std::vector<T>{x[0] * x[1], sin(x[0]) + x[1]};
    });
    SmoothMap FoG(2, 2, [F, G]<TowerScalar T>(std::span<const T> x) { return F.eval<T>(G.eval<T>(x)); });
    SplitMix64 rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        Vec p = randomPoint(rng, 2, 0.3, 2.0);
        Mat JG = jacobian(G, p);
        Mat JF = jacobian(F, G.evalReal(p));
        Mat Jc = jacobian(FoG, p);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                double expected = 0.0;
                for (int k = 0; k < 2; ++k) expected += JF(r, k) * JG(k, c);
                CHECK(std::abs(Jc(r, c) - expected) <= 1e-10);
            }
    }
}

TEST_CASE("non-finite evaluations abort with NumericError") {
    SmoothMap bad(1, 1, []<TowerScalar T>(std::span<const T> x) { return std::vector<T>{x[0] / T(0.0)}; });
    CHECK_THROWS_AS(gradient(bad, Vec{1.0}), NumericError);
    CHECK_THROWS_AS(fdDirectional(bad, Vec{1.0}, Vec{1.0}, 1e-5), NumericError);
}

TEST_CASE("curve jets by nested duals") {
    Curve helix(3, []<TowerScalar T>(std::span<const T> t) {
        using std::cos;
        using std::sin;
        return std::vector<T>{cos(t[0]), sin(t[0]), 0.5 * t[0] * t[0]};
    });
    const double t = 0.7;
    auto jet = helix.jet(t);
    CHECK(jet.q[0] == doctest::Approx(std::cos(t)).epsilon(1e-14));
    CHECK(jet.qdot[0] == doctest::Approx(-std::sin(t)).epsilon(1e-14));
    CHECK(jet.qddot[0] == doctest::Approx(-std::cos(t)).epsilon(1e-14));
    CHECK(jet.qdot[2] == doctest::Approx(t).epsilon(1e-14));
    CHECK(jet.qddot[2] == doctest::Approx(1.0).epsilon(1e-14));
}
