#pragma once

#include "covel/chart.hpp"

namespace covel {

// An affine connection D on TQ in chart coordinates. Index convention C1,
// fixed globally:
//
//   (D_X Y)^k = X^i (d_i Y^k + Gamma^k_{ij} Y^j)
//
// i.e. the FIRST lower index contracts with the differentiation direction
// and the SECOND with the transported slot. Every formula in this module is
// stated in C1.
struct ChristoffelField {
    ChartPtr chart;
    std::function<Ten3(std::span<const double>)> gamma;

    Ten3 at(std::span<const double> q) const;
};

// T^k_{ij} at a point; antisymmetric in (i, j) exactly.
struct TorsionValue {
    ChartPtr chart;
    Vec q;
    Ten3 t;
};

// Symmetric positive-definite metric, stored row-major as an n -> n*n
// smooth map so its derivatives come from dual numbers.
struct MetricField {
    ChartPtr chart;
    SmoothMap g;
};

Mat metricAt(const MetricField& m, std::span<const double> q);

// sqrt(g(v, v)) at q.
double metricNorm(const MetricField& m, std::span<const double> q, std::span<const double> v);

// T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji}.
TorsionValue torsion(const ChristoffelField& c, std::span<const double> q);

// (Dv/Dt)^k = vdot^k + Gamma^k_{ij} u^i v^j, u the curve velocity at q.
Vec covDerivVectorAlongCurve(const ChristoffelField& c, std::span<const double> q,
                             std::span<const double> u, std::span<const double> v,
                             std::span<const double> vdot);

// Leibnitz companion on covectors: (Da/Dt)_j = alphadot_j - alpha_k Gamma^k_{ij} u^i.
Vec covDerivCovectorAlongCurve(const ChristoffelField& c, std::span<const double> q,
                               std::span<const double> u, std::span<const double> alpha,
                               std::span<const double> alphadot);

inline constexpr int kDefaultTransportSteps = 1000;

// Solves dv^k/dl = -Gamma^k_{ij}(q(l)) (dq^i/dl) v^j from l=0 to 1 with
// classical fixed-step RK4; the path tangent comes from dual differentiation
// of the path. Throws DomainError on domain exit mid-path.
Vec parallelTransport(const ChristoffelField& c, const Curve& path, std::span<const double> v0,
                      int steps = kDefaultTransportSteps);

struct TransportSample {
    double lambda;
    Vec q;
    Vec v;
};

// Same integration, returning the transported vector at every step.
std::vector<TransportSample> parallelTransportTrace(const ChristoffelField& c, const Curve& path,
                                                    std::span<const double> v0, int steps);

// Christoffel transformation law under a chart transition A -> B:
//   Gt^c_{ab} = (dxB^c/dxA^k) [ (dxA^i/dxB^a)(dxA^j/dxB^b) G^k_{ij}
//                               + d^2 xA^k / dxB^a dxB^b ]
ChristoffelField transformChristoffel(const ChristoffelField& c, const Transition& t);

// Gbar^k_{ij} = (G^k_{ij} + G^k_{ji}) / 2; torsion of the result is zero.
ChristoffelField symmetrize(const ChristoffelField& c);

// Gamma^k_{ij} = g^{kl} (d_i g_{lj} + d_j g_{li} - d_l g_{ij}) / 2,
// metric derivatives via dual numbers.
ChristoffelField leviCivita(const MetricField& m);

// Parallel transport around a closed loop on a 2-dimensional chart,
// measured in the g-orthonormalized coordinate frame. frameRotation is the
// unwrapped angle swept by the vector relative to that frame; for a simple
// loop traversed once the holonomy deficit is 2*pi - |frameRotation|.
struct HolonomyResult {
    Vec vEnd;
    double frameRotation;
    double deficit;
};

HolonomyResult holonomyAroundLoop(const ChristoffelField& c, const MetricField& g, const Curve& loop,
                                  std::span<const double> v0, int steps);

} // namespace covel
