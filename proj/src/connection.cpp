#include "covel/connection.hpp"

#include <cmath>
#include <numbers>

namespace covel {

Ten3 ChristoffelField::at(std::span<const double> q) const {
    requireInChart(chart, q, "ChristoffelField");
    Ten3 g = gamma(q);
    if (g.n != chart->dim) throw DomainError("ChristoffelField: coefficient shape mismatch");
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                if (!std::isfinite(g(k, i, j))) throw NumericError("ChristoffelField: non-finite coefficients");
    return g;
}

Mat metricAt(const MetricField& m, std::span<const double> q) {
    requireInChart(m.chart, q, "MetricField");
    const int n = m.chart->dim;
    Vec flat = m.g.evalReal(q);
    if (static_cast<int>(flat.size()) != n * n) throw DomainError("MetricField: shape mismatch");
    Mat g(n, n);
    g.a = std::move(flat);
    return g;
}

double metricNorm(const MetricField& m, std::span<const double> q, std::span<const double> v) {
    Mat g = metricAt(m, q);
    double s = dot(matVec(g, v), v);
    if (s < 0.0) throw NumericError("metricNorm: negative quadratic form");
    return std::sqrt(s);
}

TorsionValue torsion(const ChristoffelField& c, std::span<const double> q) {
    Ten3 g = c.at(q);
    Ten3 t(g.n);
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) t(k, i, j) = g(k, i, j) - g(k, j, i);
    return {c.chart, toVec(q), t};
}

Vec covDerivVectorAlongCurve(const ChristoffelField& c, std::span<const double> q,
                             std::span<const double> u, std::span<const double> v,
                             std::span<const double> vdot) {
    const std::size_t n = static_cast<std::size_t>(c.chart->dim);
    requireSize(u, n, "covDerivVectorAlongCurve u");
    requireSize(v, n, "covDerivVectorAlongCurve v");
    requireSize(vdot, n, "covDerivVectorAlongCurve vdot");
    Ten3 g = c.at(q);
    Vec r = toVec(vdot);
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                r[static_cast<std::size_t>(k)] += g(k, i, j) * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    return r;
}

Vec covDerivCovectorAlongCurve(const ChristoffelField& c, std::span<const double> q,
                               std::span<const double> u, std::span<const double> alpha,
                               std::span<const double> alphadot) {
    const std::size_t n = static_cast<std::size_t>(c.chart->dim);
    requireSize(u, n, "covDerivCovectorAlongCurve u");
    requireSize(alpha, n, "covDerivCovectorAlongCurve alpha");
    requireSize(alphadot, n, "covDerivCovectorAlongCurve alphadot");
    Ten3 g = c.at(q);
    Vec r = toVec(alphadot);
    for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k)
            for (int i = 0; i < g.n; ++i)
                r[static_cast<std::size_t>(j)] -= alpha[static_cast<std::size_t>(k)] * g(k, i, j) * u[static_cast<std::size_t>(i)];
    return r;
}

namespace {

struct PathState {
    Vec q;
    Vec u;
};

PathState pathStateAt(const Curve& path, double lambda) {
    D1 lifted(lambda, {1.0});
    auto y = path.at<D1>(lifted);
    PathState s;
    s.q.resize(y.size());
    s.u.assign(y.size(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        s.q[i] = y[i].primal;
        if (!y[i].tangents.empty()) s.u[i] = y[i].tangents[0];
    }
    return s;
}

Vec transportRate(const ChristoffelField& c, const PathState& s, std::span<const double> v) {
    Ten3 g = c.at(s.q);
    Vec r(v.size(), 0.0);
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                r[static_cast<std::size_t>(k)] -= g(k, i, j) * s.u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    return r;
}

std::vector<TransportSample> integrateTransport(const ChristoffelField& c, const Curve& path,
                                                std::span<const double> v0, int steps, bool keepTrace) {
    if (steps < 1) throw DomainError("parallelTransport: steps must be >= 1");
    const std::size_t n = static_cast<std::size_t>(c.chart->dim);
    requireSize(v0, n, "parallelTransport v0");
    if (path.dim() != c.chart->dim) throw DomainError("parallelTransport: path dimension mismatch");

    const double h = 1.0 / steps;
    Vec v = toVec(v0);
    std::vector<TransportSample> trace;
    if (keepTrace) trace.reserve(static_cast<std::size_t>(steps) + 1);

    PathState s0 = pathStateAt(path, 0.0);
    if (keepTrace) trace.push_back({0.0, s0.q, v});

    for (int step = 0; step < steps; ++step) {
        const double l0 = step * h;
        PathState sm = pathStateAt(path, l0 + 0.5 * h);
        PathState s1 = pathStateAt(path, l0 + h);

        Vec k1 = transportRate(c, s0, v);
        Vec y2 = v;
        axpy(0.5 * h, k1, y2);
        Vec k2 = transportRate(c, sm, y2);
        Vec y3 = v;
        axpy(0.5 * h, k2, y3);
        Vec k3 = transportRate(c, sm, y3);
        Vec y4 = v;
        axpy(h, k3, y4);
        Vec k4 = transportRate(c, s1, y4);

        for (std::size_t i = 0; i < n; ++i) v[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!allFinite(v)) throw NumericError("parallelTransport: non-finite state");

        s0 = std::move(s1);
        if (keepTrace) trace.push_back({l0 + h, s0.q, v});
    }
    if (!keepTrace) trace.push_back({1.0, s0.q, v});
    return trace;
}

} // namespace

Vec parallelTransport(const ChristoffelField& c, const Curve& path, std::span<const double> v0, int steps) {
    return integrateTransport(c, path, v0, steps, false).back().v;
}

std::vector<TransportSample> parallelTransportTrace(const ChristoffelField& c, const Curve& path,
                                                    std::span<const double> v0, int steps) {
    return integrateTransport(c, path, v0, steps, true);
}

ChristoffelField transformChristoffel(const ChristoffelField& c, const Transition& t) {
    if (!sameChart(c.chart, t.from)) throw DomainError("transformChristoffel: chart mismatch");
    SmoothMap forward = t.forward;
    SmoothMap inverse = t.inverse;
    auto gammaA = c.gamma;
    const int n = c.chart->dim;
    auto gammaB = [forward, inverse, gammaA, n](std::span<const double> qB) {
        Vec qA = inverse.evalReal(qB);
        Mat A = jacobian(forward, qA);           // dxB/dxA
        Mat Binv = jacobian(inverse, qB);        // dxA/dxB
        std::vector<Mat> Hinv = secondDerivativeArray(inverse, qB); // d2 xA^k / dxB^a dxB^b
        if (conditionNumber1(A) > 1e8) throw NumericError("transformChristoffel: transition Jacobian ill-conditioned");
        Ten3 gA = gammaA(qA);
        Ten3 gB(n);
        for (int ci = 0; ci < n; ++ci)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double s = 0.0;
                    for (int k = 0; k < n; ++k) {
                        double inner = Hinv[static_cast<std::size_t>(k)](a, b);
                        for (int i = 0; i < n; ++i)
                            for (int j = 0; j < n; ++j) inner += Binv(i, a) * Binv(j, b) * gA(k, i, j);
                        s += A(ci, k) * inner;
                    }
                    gB(ci, a, b) = s;
                }
        return gB;
    };
    return ChristoffelField{t.to, gammaB};
}

ChristoffelField symmetrize(const ChristoffelField& c) {
    auto gamma = c.gamma;
    return ChristoffelField{c.chart, [gamma](std::span<const double> q) {
                                Ten3 g = gamma(q);
                                Ten3 s(g.n);
                                for (int k = 0; k < g.n; ++k)
                                    for (int i = 0; i < g.n; ++i)
                                        for (int j = 0; j < g.n; ++j) s(k, i, j) = 0.5 * (g(k, i, j) + g(k, j, i));
                                return s;
                            }};
}

ChristoffelField leviCivita(const MetricField& m) {
    SmoothMap g = m.g;
    const int n = m.chart->dim;
    auto gamma = [g, n](std::span<const double> q) {
        Vec flat = g.evalReal(q);
        Mat G(n, n);
        G.a = flat;
        Mat Ginv = inverse(G);
        Mat J = jacobian(g, q); // row i*n+j, col l = d_l g_{ij}
        auto dg = [&](int l, int i, int j) { return J(i * n + j, l); };
        Ten3 r(n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < n; ++l) s += Ginv(k, l) * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
                    r(k, i, j) = 0.5 * s;
                }
        return r;
    };
    return ChristoffelField{m.chart, gamma};
}

HolonomyResult holonomyAroundLoop(const ChristoffelField& c, const MetricField& g, const Curve& loop,
                                  std::span<const double> v0, int steps) {
    if (c.chart->dim != 2) throw DomainError("holonomyAroundLoop: only 2-dimensional charts");
    auto trace = parallelTransportTrace(c, loop, v0, steps);

    auto frameAngle = [&](const TransportSample& s) {
        Mat G = metricAt(g, s.q);
        const double g11 = G(0, 0), g12 = G(0, 1), g22 = G(1, 1);
        // Gram-Schmidt of the coordinate frame: e1hat = e1/sqrt(g11),
        // e2hat = (e2 - (g12/g11) e1) / |...|_g.
        const double w2 = g22 - g12 * g12 / g11;
        if (g11 <= 0.0 || w2 <= 0.0) throw NumericError("holonomyAroundLoop: metric not positive-definite");
        Vec e1 = {1.0 / std::sqrt(g11), 0.0};
        Vec e2 = {-(g12 / g11) / std::sqrt(w2), 1.0 / std::sqrt(w2)};
        Vec gv = matVec(G, s.v);
        const double c1 = dot(e1, gv);
        const double c2 = dot(e2, gv);
        if (c1 * c1 + c2 * c2 == 0.0) throw NumericError("holonomyAroundLoop: zero vector");
        return std::atan2(c2, c1);
    };

    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double total = 0.0;
    double prev = frameAngle(trace.front());
    for (std::size_t i = 1; i < trace.size(); ++i) {
        double cur = frameAngle(trace[i]);
        double d = cur - prev;
        while (d > std::numbers::pi) d -= kTwoPi;
        while (d < -std::numbers::pi) d += kTwoPi;
        total += d;
        prev = cur;
    }
    return {trace.back().v, total, kTwoPi - std::abs(total)};
}

} // namespace covel
