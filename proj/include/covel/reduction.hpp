#pragma once

#include "covel/variational.hpp"

namespace covel {

enum class GroupKind { Circle, Line };

// Trivial abelian principal bundle Q = M x G with connection one-form
// A = dtheta + A_a(x) dx^a (mechanical convention, A(vertical) = 1).
// Total-space coordinates are (x^1..x^m, theta), velocities likewise.
struct AbelianPrincipalData {
    ChartPtr baseChart;
    GroupKind group = GroupKind::Line;
    SmoothMap potential; // x -> (A_1..A_m)
};

// (x, xdot, v) with v = thetadot + A_a(x) xdot^a; the adjoint bundle of an
// abelian group is trivial, so the vertical part is a plain scalar.
struct ReducedState {
    Vec x;
    Vec xdot;
    double v = 0.0;
};

// Reduced Lagrangian l(x, xdot, v): arity 2m+1 -> 1.
struct ReducedLagrangian {
    ChartPtr baseChart;
    SmoothMap l;
};

// Second-order reduced data for the horizontal Lagrange-Poincare residual.
struct ReducedJet {
    Vec x;
    Vec xdot;
    Vec xddot;
    double v = 0.0;
    double vdot = 0.0;
};

// Signs in the horizontal LP assembly, frozen from the full-space oracle
// (resolveLpSigns re-derives them; a unit test pins the constants).
// kLpTorsionSign matches the variational module; kLpCurvatureSign carries
// the bracket term <dl/dv, B(xdot, .)> to the left-hand side.
inline constexpr double kLpTorsionSign = +1.0;
inline constexpr double kLpCurvatureSign = -1.0;
std::pair<double, double> resolveLpSigns();

// Chart for the total space M x G (dim m+1); theta is unconstrained.
ChartPtr totalChart(const AbelianPrincipalData& d);

// B_ab = d_a A_b - d_b A_a, via dual differentiation of the potential.
Mat curvature(const AbelianPrincipalData& d, std::span<const double> x);

// alpha_A: (q, qdot) on M x G -> (x, xdot, v).
ReducedState reduceState(const AbelianPrincipalData& d, std::span<const double> q,
                         std::span<const double> qdot);

// Second-order companion of reduceState:
// vdot = thetaddot + (d_b A_a) xdot^b xdot^a + A_a xddot^a.
ReducedJet reduceJet(const AbelianPrincipalData& d, const JetPoint& j);

// l(x, xdot, v) = L(x, 0, xdot, v - A_a(x) xdot^a). Rejects Lagrangians
// that fail G-invariance (numerically sampled) since the quotient would be
// ill-defined.
ReducedLagrangian reduceLagrangian(const LagrangianField& L, const AbelianPrincipalData& d,
                                   std::uint64_t invarianceSeed = 2024);

// Horizontal Lagrange-Poincare residual on the base, component a:
//   (D/Dt dl/dxdot)_a - (Dl/Dx)_a
//     + kLpCurvatureSign * (dl/dv) B_ab xdot^b
//     + kLpTorsionSign   * (dl/dxdot)_k T^k_{ba} xdot^b
// with D/Dt, Dl/Dx taken over the base connection, v a scalar passenger
// whose rate vdot enters through d/dt(dl/dxdot).
ResidualCovector horizontalLPResidual(const ReducedLagrangian& l, const ChristoffelField& cBase,
                                      const AbelianPrincipalData& d, const ReducedJet& jet);

// Horizontal part of a full-space covector: E^h_a = E_a - A_a(x) E_theta.
Vec horizontalProjection(const AbelianPrincipalData& d, std::span<const double> x,
                         std::span<const double> fullResidual);

// theta(t) = theta0 + integral of (v(s) - A_a(x(s)) xdot^a(s)) ds by
// cumulative composite Simpson over the uniformly sampled base trajectory.
std::vector<std::pair<double, double>> reconstructState(const AbelianPrincipalData& d,
                                                        const std::vector<TrajectorySample>& baseTrajectory,
                                                        const std::function<double(double)>& v,
                                                        double theta0);

// Re-express a circle coordinate in one of the two catalog circle charts;
// returns the chart key and the coordinate. Used when reconstructed
// trajectories cross the chart seam.
std::pair<std::string, double> circleChartCoordinate(double theta);

} // namespace covel
