#pragma once

#include <functional>
#include <memory>
#include <string>

#include "covel/smooth.hpp"

namespace covel {

// A coordinate patch: an open subset of R^n with an explicit membership
// predicate. The manifold itself is only ever the atlas plus transitions.
struct Chart {
    std::string name;
    int dim = 0;
    std::function<bool(std::span<const double>)> domain;

    bool contains(std::span<const double> q) const {
        return static_cast<int>(q.size()) == dim && domain(q);
    }
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr makeChart(std::string name, int dim, std::function<bool(std::span<const double>)> domain);

inline bool sameChart(const ChartPtr& a, const ChartPtr& b) {
    return a == b || (a && b && a->name == b->name && a->dim == b->dim);
}

void requireInChart(const ChartPtr& chart, std::span<const double> q, const char* op);

// (q, qdot) in TQ, components in chart coordinates.
struct VelocityPhasePoint {
    ChartPtr chart;
    Vec q;
    Vec qdot;
};

// Second-order data (q, qdot, qddot); the natural domain of the
// Euler-Lagrange operator.
struct JetPoint {
    ChartPtr chart;
    Vec q;
    Vec qdot;
    Vec qddot;
};

// A covector at q, components alpha_i.
struct CovectorAtPoint {
    ChartPtr chart;
    Vec q;
    Vec alpha;
};

// Chart transition with smooth forward/inverse maps. `overlap` is the
// validity predicate in from-chart coordinates; both maps must be evaluable
// over the tower there.
struct Transition {
    ChartPtr from;
    ChartPtr to;
    SmoothMap forward;
    SmoothMap inverse;
    std::function<bool(std::span<const double>)> overlap;
};

Transition reversed(const Transition& t);

// Base points must agree to this tolerance before pairing; operands are
// expected to originate from identical computations.
inline constexpr double kBasePointTol = 1e-12;

// <alpha, v> = sum_i alpha_i v^i.
double pairing(const CovectorAtPoint& alpha, const VelocityPhasePoint& v);

VelocityPhasePoint pushforwardVelocity(const Transition& t, const VelocityPhasePoint& p);

// Transpose-Jacobian action, so that pairing is preserved; carries a
// covector at a to-chart point back to the from-chart.
CovectorAtPoint pullbackCovector(const Transition& t, const CovectorAtPoint& a);

CovectorAtPoint pushforwardCovector(const Transition& t, const CovectorAtPoint& a);

// qddot'^a = J^a_i qddot^i + H^a_{ij} qdot^i qdot^j.
JetPoint pushforwardJet(const Transition& t, const JetPoint& j);

} // namespace covel
