#include "covel/chart.hpp"

#include <cmath>

namespace covel {

ChartPtr makeChart(std::string name, int dim, std::function<bool(std::span<const double>)> domain) {
    auto c = std::make_shared<Chart>();
    c->name = std::move(name);
    c->dim = dim;
    c->domain = std::move(domain);
    return c;
}

void requireInChart(const ChartPtr& chart, std::span<const double> q, const char* op) {
    if (static_cast<int>(q.size()) != chart->dim)
        throw DomainError(std::string(op) + ": dimension mismatch on chart " + chart->name);
    if (!chart->domain(q))
        throw DomainError(std::string(op) + ": point outside domain of chart " + chart->name);
}

Transition reversed(const Transition& t) {
    // Overlap in to-chart coordinates: image membership is what the forward
    // op checks anyway, so reuse the inverse map's validity via both domains.
    auto inv = t.inverse;
    auto fromDomain = t.from->domain;
    auto overlap = [inv, fromDomain](std::span<const double> q) {
        Vec back = inv.evalReal(q);
        return allFinite(back) && fromDomain(back);
    };
    return Transition{t.to, t.from, t.inverse, t.forward, overlap};
}

namespace {

void requireSameBase(const CovectorAtPoint& a, const VelocityPhasePoint& v) {
    if (!sameChart(a.chart, v.chart)) throw DomainError("pairing: chart mismatch");
    if (a.q.size() != v.q.size()) throw DomainError("pairing: dimension mismatch");
    Vec diff = a.q - v.q;
    if (normInf(diff) > kBasePointTol) throw DomainError("pairing: base-point mismatch");
}

void requireInOverlap(const Transition& t, std::span<const double> q, const char* op) {
    requireInChart(t.from, q, op);
    if (t.overlap && !t.overlap(q)) throw DomainError(std::string(op) + ": point outside chart overlap");
}

} // namespace

double pairing(const CovectorAtPoint& alpha, const VelocityPhasePoint& v) {
    requireSameBase(alpha, v);
    return dot(alpha.alpha, v.qdot);
}

VelocityPhasePoint pushforwardVelocity(const Transition& t, const VelocityPhasePoint& p) {
    if (!sameChart(p.chart, t.from)) throw DomainError("pushforwardVelocity: chart mismatch");
    requireInOverlap(t, p.q, "pushforwardVelocity");
    Vec qNew = t.forward.evalReal(p.q);
    requireInChart(t.to, qNew, "pushforwardVelocity");
    Mat J = jacobian(t.forward, p.q);
    return {t.to, std::move(qNew), matVec(J, p.qdot)};
}

CovectorAtPoint pullbackCovector(const Transition& t, const CovectorAtPoint& a) {
    if (!sameChart(a.chart, t.to)) throw DomainError("pullbackCovector: chart mismatch");
    Vec qFrom = t.inverse.evalReal(a.q);
    requireInOverlap(t, qFrom, "pullbackCovector");
    Mat J = jacobian(t.forward, qFrom);
    // alpha_i = J^a_i alpha'_a
    return {t.from, std::move(qFrom), matTVec(J, a.alpha)};
}

CovectorAtPoint pushforwardCovector(const Transition& t, const CovectorAtPoint& a) {
    return pullbackCovector(reversed(t), a);
}

JetPoint pushforwardJet(const Transition& t, const JetPoint& j) {
    if (!sameChart(j.chart, t.from)) throw DomainError("pushforwardJet: chart mismatch");
    requireInOverlap(t, j.q, "pushforwardJet");
    Vec qNew = t.forward.evalReal(j.q);
    requireInChart(t.to, qNew, "pushforwardJet");
    Mat J = jacobian(t.forward, j.q);
    std::vector<Mat> H = secondDerivativeArray(t.forward, j.q);
    const int m = t.to->dim;
    const int n = t.from->dim;
    Vec qdNew = matVec(J, j.qdot);
    Vec qddNew = matVec(J, j.qddot);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) qddNew[static_cast<std::size_t>(a)] += H[static_cast<std::size_t>(a)](i, k) * j.qdot[static_cast<std::size_t>(i)] * j.qdot[static_cast<std::size_t>(k)];
    return {t.to, std::move(qNew), std::move(qdNew), std::move(qddNew)};
}

} // namespace covel
