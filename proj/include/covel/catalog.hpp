#pragma once

#include <array>
#include <map>

#include "covel/atlas.hpp"
#include "covel/reduction.hpp"
#include "covel/rng.hpp"
#include "covel/variational.hpp"

namespace covel {

// Named builders for the test catalog. Keys:
//
// metrics
//   euclidean          identity metric, any chart
//   round-sphere       diag(1, sin^2 theta) on s2-angles,
//                      4/(1+u^2+v^2)^2 * I on the stereographic charts
//   torus-embedded     diag(1, (2 + cos q1)^2) on t2 (doughnut of radii 2,1)
//   rank1              delta_ij + q_i q_j on r1/r2/r3
//
// connections
//   flat                       Gamma = 0
//   constant-torsion           constant entries; default Gamma^1_{21} = 1
//                              (n = 2; analogues for n = 1, 3)
//   levi-civita:<metric>       torsion-free, from the metric
//   contorsion:<metric>        levi-civita plus a constant perturbation
//                              antisymmetric in the lower indices
//
// lagrangians
//   free-particle              |qdot|^2 / 2
//   harmonic-oscillator        |qdot|^2 / 2 - |q|^2 / 2
//   metric-kinetic:<metric>    g_ij(q) qdot^i qdot^j / 2
//   kinetic-potential          |qdot|^2 / 2 - sum(q_i^2/2 + q_i^4/4)
//   magnetic                   |qdot|^2 / 2 + A.qdot - |q|^2 / 2 with the
//                              uniform-field potential A = (-q2, q1)/2
MetricField catalogMetric(const std::string& key, const ChartPtr& chart);
ChristoffelField catalogConnection(const std::string& key, const ChartPtr& chart);
LagrangianField catalogLagrangian(const std::string& key, const ChartPtr& chart);

bool catalogConnectionHasTorsion(const std::string& key);

std::vector<std::string> catalogMetricKeys(const ChartPtr& chart);
std::vector<std::string> catalogConnectionKeys(const ChartPtr& chart);
std::vector<std::string> catalogLagrangianKeys(const ChartPtr& chart);

// Constant-torsion connection with explicit entries (k, i, j) -> value.
ChristoffelField constantChristoffel(const ChartPtr& chart,
                                     const std::map<std::array<int, 3>, double>& entries);

// The identity-suite cross-product: per atlas, every catalog connection
// against every catalog Lagrangian.
struct IdentityCase {
    std::string chart;
    std::string connection;
    std::string lagrangian;
};
std::vector<IdentityCase> identityCrossProduct();

// Kaluza-Klein setup on R^2 x G with the uniform-field potential:
// L = |xdot|^2/2 + (thetadot + A.xdot)^2/2. Reduces to Larmor dynamics.
struct KaluzaKleinSetup {
    AbelianPrincipalData data;
    LagrangianField total;   // on totalChart(data)
    ReducedLagrangian reduced;
};
KaluzaKleinSetup kaluzaKleinUniformField(GroupKind group = GroupKind::Circle);

// Random jets for identity checks: q uniform on [-2,2]^n clipped to the
// chart domain by rejection, qdot/qddot uniform on [-3,3]^n.
JetPoint randomJet(const ChartPtr& chart, SplitMix64& rng);

} // namespace covel
