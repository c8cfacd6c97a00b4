#include "covel/reduction.hpp"

#include <cmath>
#include <numbers>

#include "covel/rng.hpp"

namespace covel {

namespace {

void requireBasePoint(const AbelianPrincipalData& d, std::span<const double> x, const char* op) {
    requireInChart(d.baseChart, x, op);
    if (d.potential.arityIn() != d.baseChart->dim || d.potential.arityOut() != d.baseChart->dim)
        throw DomainError(std::string(op) + ": potential arity mismatch");
}

} // namespace

std::pair<std::string, double> circleChartCoordinate(double theta) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double w = std::remainder(theta, kTwoPi); // (-pi, pi]
    if (std::abs(w) < 0.5 * std::numbers::pi) return {"s1-a", w};
    return {"s1-b", w < 0.0 ? w + kTwoPi : w};
}

ChartPtr totalChart(const AbelianPrincipalData& d) {
    const int m = d.baseChart->dim;
    auto baseDomain = d.baseChart->domain;
    // theta is unconstrained: circle trajectories live on the cover and are
    // re-expressed in the two-chart atlas via circleChartCoordinate.
    return makeChart(d.baseChart->name + "-x-group", m + 1,
                     [baseDomain, m](std::span<const double> q) {
                         return allFinite(q) && baseDomain(q.first(static_cast<std::size_t>(m)));
                     });
}

Mat curvature(const AbelianPrincipalData& d, std::span<const double> x) {
    requireBasePoint(d, x, "curvature");
    const int m = d.baseChart->dim;
    Mat J = jacobian(d.potential, x); // J(a, b) = d_b A_a
    Mat B(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) B(a, b) = J(b, a) - J(a, b);
    return B;
}

ReducedState reduceState(const AbelianPrincipalData& d, std::span<const double> q,
                         std::span<const double> qdot) {
    const int m = d.baseChart->dim;
    requireSize(q, static_cast<std::size_t>(m) + 1, "reduceState q");
    requireSize(qdot, static_cast<std::size_t>(m) + 1, "reduceState qdot");
    auto x = q.first(static_cast<std::size_t>(m));
    requireBasePoint(d, x, "reduceState");
    ReducedState s;
    s.x = toVec(x);
    s.xdot = toVec(qdot.first(static_cast<std::size_t>(m)));
    Vec A = d.potential.evalReal(x);
    s.v = qdot[static_cast<std::size_t>(m)] + dot(A, s.xdot);
    return s;
}

ReducedJet reduceJet(const AbelianPrincipalData& d, const JetPoint& j) {
    const int m = d.baseChart->dim;
    ReducedState s = reduceState(d, j.q, j.qdot);
    auto x = std::span<const double>(j.q).first(static_cast<std::size_t>(m));
    Mat J = jacobian(d.potential, x); // J(a, b) = d_b A_a
    Vec A = d.potential.evalReal(x);
    ReducedJet out;
    out.x = s.x;
    out.xdot = s.xdot;
    out.xddot = toVec(std::span<const double>(j.qddot).first(static_cast<std::size_t>(m)));
    out.v = s.v;
    double vdot = j.qddot[static_cast<std::size_t>(m)];
    for (int a = 0; a < m; ++a) {
        vdot += A[static_cast<std::size_t>(a)] * out.xddot[static_cast<std::size_t>(a)];
        for (int b = 0; b < m; ++b)
            vdot += J(a, b) * out.xdot[static_cast<std::size_t>(b)] * out.xdot[static_cast<std::size_t>(a)];
    }
    out.vdot = vdot;
    return out;
}

ReducedLagrangian reduceLagrangian(const LagrangianField& L, const AbelianPrincipalData& d,
                                   std::uint64_t invarianceSeed) {
    const int m = d.baseChart->dim;
    if (L.chart->dim != m + 1) throw DomainError("reduceLagrangian: Lagrangian lives on the wrong space");

    // Well-definedness of the quotient: L must not see theta.
    SplitMix64 rng(invarianceSeed);
    int accepted = 0;
    for (int attempt = 0; attempt < 400 && accepted < 20; ++attempt) {
        Vec x(static_cast<std::size_t>(m));
        for (double& xi : x) xi = rng.uniform(-2.0, 2.0);
        if (!d.baseChart->domain(x)) continue;
        ++accepted;
        Vec state(2 * static_cast<std::size_t>(m) + 2);
        for (int i = 0; i < m; ++i) state[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
        for (int i = 0; i <= m; ++i) state[static_cast<std::size_t>(m + 1 + i)] = rng.uniform(-3.0, 3.0);
        const double theta1 = rng.uniform(-3.0, 3.0);
        const double theta2 = rng.uniform(-3.0, 3.0);
        state[static_cast<std::size_t>(m)] = theta1;
        const double v1 = L.l.evalReal(state)[0];
        state[static_cast<std::size_t>(m)] = theta2;
        const double v2 = L.l.evalReal(state)[0];
        if (std::abs(v1 - v2) > 1e-10 * std::max(1.0, std::abs(v1)))
            throw DomainError("reduceLagrangian: Lagrangian is not G-invariant");
    }
    if (accepted == 0) throw DomainError("reduceLagrangian: could not sample the base domain");

    SmoothMap potential = d.potential;
    SmoothMap lag = L.l;
    auto eval = [potential, lag, m]<TowerScalar T>(std::span<const T> in) -> std::vector<T> {
        // in = (x, xdot, v); evaluate L at (x, 0, xdot, v - A(x) xdot).
        auto x = in.first(static_cast<std::size_t>(m));
        std::vector<T> A = potential.eval<T>(x);
        T thetadot = in[static_cast<std::size_t>(2 * m)];
        for (int a = 0; a < m; ++a)
            thetadot = thetadot - A[static_cast<std::size_t>(a)] * in[static_cast<std::size_t>(m + a)];
        std::vector<T> state(2 * static_cast<std::size_t>(m) + 2, T(0.0));
        for (int i = 0; i < m; ++i) {
            state[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(i)];
            state[static_cast<std::size_t>(m + 1 + i)] = in[static_cast<std::size_t>(m + i)];
        }
        state[static_cast<std::size_t>(2 * m + 1)] = thetadot;
        return lag.eval<T>(state);
    };
    return {d.baseChart, SmoothMap(2 * m + 1, 1, eval)};
}

namespace {

// l with v frozen: a plain Lagrangian on the base, so the variational
// module's covariant constructions apply unchanged.
LagrangianField frozenVertical(const ReducedLagrangian& l, double v) {
    const int m = l.baseChart->dim;
    SmoothMap lm = l.l;
    return {l.baseChart, SmoothMap(2 * m, 1, [lm, v, m]<TowerScalar T>(std::span<const T> in) {
                std::vector<T> arg(2 * static_cast<std::size_t>(m) + 1);
                for (int i = 0; i < 2 * m; ++i) arg[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(i)];
                arg[static_cast<std::size_t>(2 * m)] = T(v);
                return lm.eval<T>(arg);
            })};
}

ResidualCovector assembleLpResidual(const ReducedLagrangian& l, const ChristoffelField& cBase,
                                    const AbelianPrincipalData& d, const ReducedJet& jet,
                                    double torsionSign, double curvatureSign) {
    const int m = l.baseChart->dim;
    if (!sameChart(cBase.chart, l.baseChart)) throw DomainError("horizontalLPResidual: base chart mismatch");
    requireBasePoint(d, jet.x, "horizontalLPResidual");
    requireSize(jet.xdot, static_cast<std::size_t>(m), "horizontalLPResidual xdot");
    requireSize(jet.xddot, static_cast<std::size_t>(m), "horizontalLPResidual xddot");

    LagrangianField lv = frozenVertical(l, jet.v);
    VelocityPhasePoint p{l.baseChart, jet.x, jet.xdot};
    CovectorAtPoint alpha = fibreDerivative(lv, p);
    CovectorAtPoint dpos = covariantPositionDerivative(lv, cBase, p);
    ResidualCovector tt = torsionForceTerm(lv, cBase, p);

    // alphadot needs d2l/dxdot dv, so it comes from the full reduced state.
    Vec full(2 * static_cast<std::size_t>(m) + 1);
    for (int i = 0; i < m; ++i) {
        full[static_cast<std::size_t>(i)] = jet.x[static_cast<std::size_t>(i)];
        full[static_cast<std::size_t>(m + i)] = jet.xdot[static_cast<std::size_t>(i)];
    }
    full[static_cast<std::size_t>(2 * m)] = jet.v;
    auto [grad, H] = gradientAndHessian(l.l, full);
    Vec alphadot(static_cast<std::size_t>(m), 0.0);
    for (int a = 0; a < m; ++a) {
        double s = H(m + a, 2 * m) * jet.vdot;
        for (int b = 0; b < m; ++b)
            s += H(m + a, b) * jet.xdot[static_cast<std::size_t>(b)] +
                 H(m + a, m + b) * jet.xddot[static_cast<std::size_t>(b)];
        alphadot[static_cast<std::size_t>(a)] = s;
    }
    Vec dcov = covDerivCovectorAlongCurve(cBase, jet.x, jet.xdot, alpha.alpha, alphadot);

    const double p_v = grad[static_cast<std::size_t>(2 * m)]; // dl/dv
    Mat B = curvature(d, jet.x);
    Vec r(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        double curv = 0.0;
        for (int b = 0; b < m; ++b) curv += B(a, b) * jet.xdot[static_cast<std::size_t>(b)];
        r[static_cast<std::size_t>(a)] = dcov[static_cast<std::size_t>(a)] - dpos.alpha[static_cast<std::size_t>(a)] +
                                         torsionSign * tt.r[static_cast<std::size_t>(a)] +
                                         curvatureSign * p_v * curv;
    }
    return {l.baseChart, jet.x, std::move(r)};
}

} // namespace

ResidualCovector horizontalLPResidual(const ReducedLagrangian& l, const ChristoffelField& cBase,
                                      const AbelianPrincipalData& d, const ReducedJet& jet) {
    return assembleLpResidual(l, cBase, d, jet, kLpTorsionSign, kLpCurvatureSign);
}

Vec horizontalProjection(const AbelianPrincipalData& d, std::span<const double> x,
                         std::span<const double> fullResidual) {
    const int m = d.baseChart->dim;
    requireSize(fullResidual, static_cast<std::size_t>(m) + 1, "horizontalProjection");
    Vec A = d.potential.evalReal(x);
    Vec r(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a)
        r[static_cast<std::size_t>(a)] = fullResidual[static_cast<std::size_t>(a)] -
                                         A[static_cast<std::size_t>(a)] * fullResidual[static_cast<std::size_t>(m)];
    return r;
}

std::pair<double, double> resolveLpSigns() {
    // Probe with both terms active: uniform magnetic field, torsion-full
    // base connection, Kaluza-Klein Lagrangian. The (sigma, sigma_B) pair
    // that reproduces the horizontal projection of the full-space
    // coordinate residual is the answer.
    auto base = makeChart("lp-probe-r2", 2, [](std::span<const double> q) { return allFinite(q); });
    AbelianPrincipalData d{base, GroupKind::Line,
                           SmoothMap(2, 2, []<TowerScalar T>(std::span<const T> x) {
                               return std::vector<T>{-0.5 * x[1], 0.5 * x[0]};
                           })};
    ChristoffelField cBase{base, [](std::span<const double>) {
                               Ten3 g(2);
                               g(0, 1, 0) = 1.0;
                               g(1, 0, 1) = -0.6;
                               return g;
                           }};
    auto total = totalChart(d);
    SmoothMap potential = d.potential;
    LagrangianField Lkk{total, SmoothMap(6, 1, [potential]<TowerScalar T>(std::span<const T> q) {
                            auto x = q.first(2);
                            std::vector<T> A = potential.eval<T>(x);
                            T v = q[5] + A[0] * q[3] + A[1] * q[4];
                            return std::vector<T>{0.5 * (q[3] * q[3] + q[4] * q[4]) + 0.5 * v * v};
                        })};
    ReducedLagrangian l = reduceLagrangian(Lkk, d);

    ReducedJet jet{{0.7, -0.4}, {1.3, 0.5}, {-0.2, 0.9}, 1.7, 0.6};
    // Matching full-space jet: theta arbitrary by invariance.
    Vec A = d.potential.evalReal(jet.x);
    Mat J = jacobian(d.potential, jet.x);
    double thetadot = jet.v - dot(A, jet.xdot);
    double thetaddot = jet.vdot;
    for (int a = 0; a < 2; ++a) {
        thetaddot -= A[static_cast<std::size_t>(a)] * jet.xddot[static_cast<std::size_t>(a)];
        for (int b = 0; b < 2; ++b)
            thetaddot -= J(a, b) * jet.xdot[static_cast<std::size_t>(b)] * jet.xdot[static_cast<std::size_t>(a)];
    }
    JetPoint fullJet{total,
                     {jet.x[0], jet.x[1], 0.4},
                     {jet.xdot[0], jet.xdot[1], thetadot},
                     {jet.xddot[0], jet.xddot[1], thetaddot}};
    Vec expected = horizontalProjection(d, jet.x, coordinateELResidual(Lkk, fullJet).r);

    std::pair<double, double> winner{0.0, 0.0};
    int matches = 0;
    for (double sT : {+1.0, -1.0})
        for (double sB : {+1.0, -1.0}) {
            Vec got = assembleLpResidual(l, cBase, d, jet, sT, sB).r;
            double dev = 0.0;
            for (std::size_t i = 0; i < got.size(); ++i) dev = std::max(dev, std::abs(got[i] - expected[i]));
            if (dev < 1e-8) {
                winner = {sT, sB};
                ++matches;
            }
        }
    if (matches != 1) throw NumericError("resolveLpSigns: sign probe was not decisive");
    return winner;
}

std::vector<std::pair<double, double>> reconstructState(const AbelianPrincipalData& d,
                                                        const std::vector<TrajectorySample>& baseTrajectory,
                                                        const std::function<double(double)>& v,
                                                        double theta0) {
    if (baseTrajectory.size() < 2) throw DomainError("reconstructState: need at least two samples");
    const std::size_t n = baseTrajectory.size();
    const double h = baseTrajectory[1].t - baseTrajectory[0].t;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(baseTrajectory[i].t - baseTrajectory[i - 1].t - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw DomainError("reconstructState: samples must be uniform in time");

    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = baseTrajectory[i];
        requireBasePoint(d, s.q, "reconstructState");
        Vec A = d.potential.evalReal(s.q);
        f[i] = v(s.t) - dot(A, s.qdot);
    }

    // Cumulative composite Simpson; the odd interior point of each panel
    // uses the half-panel Newton-Cotes rule, a trailing odd interval a
    // trapezoid.
    std::vector<std::pair<double, double>> out(n);
    out[0] = {baseTrajectory[0].t, theta0};
    std::size_t i = 0;
    while (i + 2 < n) {
        out[i + 1] = {baseTrajectory[i + 1].t, out[i].second + (h / 12.0) * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2])};
        out[i + 2] = {baseTrajectory[i + 2].t, out[i].second + (h / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2])};
        i += 2;
    }
    if (i + 1 < n) out[i + 1] = {baseTrajectory[i + 1].t, out[i].second + 0.5 * h * (f[i] + f[i + 1])};
    return out;
}

} // namespace covel
