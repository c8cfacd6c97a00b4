#pragma once

#include <utility>

#include "covel/connection.hpp"

namespace covel {

// A Lagrangian L(q, qdot) on velocity phase space: a scalar smooth map on
// the concatenated chart coordinates (q, qdot), arity 2n -> 1.
struct LagrangianField {
    ChartPtr chart;
    SmoothMap l;
};

// A covector of generalized forces at q; houses Euler-Lagrange residuals.
struct ResidualCovector {
    ChartPtr chart;
    Vec q;
    Vec r;
};

// delta q(t) with delta(t0) = delta(t1) = 0 (checked to 1e-14 where used).
struct VariationField {
    Curve deltaq;
};

// Sign of the torsion force term in the covariant residual assembly. The
// derivation under convention C1 with first-slot contraction fixes it to +1;
// resolveTorsionTermSign() re-derives it numerically from the residual
// identity on a torsion-full probe, and a unit test pins the two together.
inline constexpr double kTorsionTermSign = +1.0;
double resolveTorsionTermSign();

// Momentum covector (dL/dqdot^i)(q, qdot), by dual seeding of the velocity
// slots only.
CovectorAtPoint fibreDerivative(const LagrangianField& L, const VelocityPhasePoint& p);

// (DL/Dq)_i = dL/dq^i - (dL/dqdot^k) Gamma^k_{ij} qdot^j: the closed form of
// the directional derivative of L along a curve whose velocity argument is
// parallel-transported.
CovectorAtPoint covariantPositionDerivative(const LagrangianField& L, const ChristoffelField& c,
                                            const VelocityPhasePoint& p);

// E_j = (d2L/dqdot^j dq^i) qdot^i + (d2L/dqdot^j dqdot^i) qddot^i - dL/dq^j.
// Contains no Christoffel symbols; serves as the ground-truth oracle.
ResidualCovector coordinateELResidual(const LagrangianField& L, const JetPoint& j);

// Component j = (dL/dqdot^k) T^k_{ij} qdot^i.
ResidualCovector torsionForceTerm(const LagrangianField& L, const ChristoffelField& c,
                                  const VelocityPhasePoint& p);

// d/dt (dL/dqdot^j) expanded exactly on jet data via nested duals:
// (d2L/dqdot^j dq^i) qdot^i + (d2L/dqdot^j dqdot^i) qddot^i.
Vec fibreDerivativeRate(const LagrangianField& L, const JetPoint& j);

// (D/Dt dL/dqdot)_j - (DL/Dq)_j + kTorsionTermSign * torsionForceTerm_j.
// Equals coordinateELResidual identically, for every connection.
ResidualCovector covariantELResidual(const LagrangianField& L, const ChristoffelField& c,
                                     const JetPoint& j);

// Composite Simpson quadrature of L(q(t), qdot(t)) over [t0, t1] on
// `samples` grid points; an odd interval count gets one trapezoid panel.
double action(const LagrangianField& L, const Curve& path, double t0, double t1, int samples);

// lhs: central difference of the action under path +- eps*delta.
// rhs: -integral E(t).delta(t) dt with E on the path's jet.
std::pair<double, double> variationCheck(const LagrangianField& L, const Curve& path,
                                         const VariationField& delta, double eps, int samples,
                                         double t0, double t1);

struct TrajectorySample {
    double t;
    Vec q;
    Vec qdot;
};

inline constexpr double kHessianConditionLimit = 1e10;

// qddot = M^-1 (dL/dq - (d2L/dqdot dq) qdot) with M = d2L/dqdot dqdot;
// throws NumericError when M is singular (degenerate Lagrangian).
Vec lagrangianAcceleration(const LagrangianField& L, std::span<const double> q,
                           std::span<const double> qdot);

// Fixed-step RK4 on the second-order equation above.
std::vector<TrajectorySample> simulate(const LagrangianField& L, const VelocityPhasePoint& p0,
                                       double t0, double t1, double step);

// E = <dL/dqdot, qdot> - L; conserved along solutions of time-independent L.
double energy(const LagrangianField& L, const VelocityPhasePoint& p);

// The same Lagrangian expressed on the other side of a transition t: A -> B,
// L_B(q', v') = L_A(x(q'), dx(q') v'). Supports first and second derivatives
// of the result (the transition map absorbs one extra tangent level).
LagrangianField pushforwardLagrangian(const LagrangianField& L, const Transition& t);

} // namespace covel
