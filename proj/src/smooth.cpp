#include "covel/smooth.hpp"

#include <cmath>

namespace covel {

namespace {

void requireFinite(std::span<const double> v, const char* op) {
    if (!allFinite(v)) throw NumericError(std::string(op) + ": non-finite value produced by evaluator");
}

void requireScalar(const SmoothMap& f, const char* op) {
    if (f.arityOut() != 1) throw DomainError(std::string(op) + ": map must be scalar-valued");
}

} // namespace

Vec gradient(const SmoothMap& f, std::span<const double> point) {
    requireScalar(f, "gradient");
    auto lifted = seedIdentity<double>(point);
    auto y = f.eval<D1>(lifted);
    Vec g = y[0].tangents;
    g.resize(point.size(), 0.0); // constant output: no tangents were touched
    requireFinite(g, "gradient");
    return g;
}

Mat jacobian(const SmoothMap& F, std::span<const double> point) {
    auto lifted = seedIdentity<double>(point);
    auto y = F.eval<D1>(lifted);
    Mat J(F.arityOut(), F.arityIn());
    for (int r = 0; r < F.arityOut(); ++r) {
        const auto& t = y[static_cast<std::size_t>(r)].tangents;
        for (int c = 0; c < F.arityIn(); ++c)
            J(r, c) = c < static_cast<int>(t.size()) ? t[static_cast<std::size_t>(c)] : 0.0;
    }
    requireFinite(J.a, "jacobian");
    return J;
}

namespace {

// Nested seeding: outer and inner layers both carry the identity, so the
// result holds the gradient in the primal tangents and the Hessian in the
// tangent-of-tangent slots.
std::vector<D2> seedNested(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<D2> lifted(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> inner(n, 0.0);
        inner[i] = 1.0;
        D1 primal(x[i], inner);
        std::vector<D1> outer(n, D1(0.0));
        outer[i] = D1(1.0);
        lifted[i] = D2(std::move(primal), std::move(outer));
    }
    return lifted;
}

double nestedEntry(const D2& y, std::size_t i, std::size_t j) {
    if (i >= y.tangents.size()) return 0.0;
    const D1& ti = y.tangents[i];
    return j < ti.tangents.size() ? ti.tangents[j] : 0.0;
}

} // namespace

std::pair<Vec, Mat> gradientAndHessian(const SmoothMap& f, std::span<const double> point) {
    requireScalar(f, "hessian");
    const std::size_t n = point.size();
    auto y = f.eval<D2>(seedNested(point));
    Vec g(n, 0.0);
    for (std::size_t i = 0; i < n && i < y[0].primal.tangents.size(); ++i)
        g[i] = y[0].primal.tangents[i];
    Mat H(static_cast<int>(n), static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H(static_cast<int>(i), static_cast<int>(j)) = nestedEntry(y[0], i, j);
    requireFinite(g, "hessian");
    requireFinite(H.a, "hessian");
    return {std::move(g), std::move(H)};
}

Mat hessian(const SmoothMap& f, std::span<const double> point) {
    return gradientAndHessian(f, point).second;
}

std::vector<Mat> secondDerivativeArray(const SmoothMap& F, std::span<const double> point) {
    const std::size_t n = point.size();
    auto y = F.eval<D2>(seedNested(point));
    std::vector<Mat> H(static_cast<std::size_t>(F.arityOut()));
    for (int r = 0; r < F.arityOut(); ++r) {
        Mat& Hr = H[static_cast<std::size_t>(r)];
        Hr = Mat(static_cast<int>(n), static_cast<int>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                Hr(static_cast<int>(i), static_cast<int>(j)) = nestedEntry(y[static_cast<std::size_t>(r)], i, j);
        requireFinite(Hr.a, "secondDerivativeArray");
    }
    return H;
}

Vec fdDirectional(const SmoothMap& F, std::span<const double> point,
                  std::span<const double> direction, double step) {
    if (step <= 0.0) throw DomainError("fdDirectional: step must be positive");
    if (point.size() != direction.size()) throw DomainError("fdDirectional: dimension mismatch");
    Vec plus = toVec(point);
    Vec minus = toVec(point);
    axpy(step, toVec(direction), plus);
    axpy(-step, toVec(direction), minus);
    Vec fp = F.evalReal(plus);
    Vec fm = F.evalReal(minus);
    requireFinite(fp, "fdDirectional");
    requireFinite(fm, "fdDirectional");
    Vec r(fp.size());
    for (std::size_t i = 0; i < fp.size(); ++i) r[i] = (fp[i] - fm[i]) / (2.0 * step);
    return r;
}

Vec Curve::value(double t) const {
    Vec q = map_.evalReal(std::span<const double>(&t, 1));
    if (!allFinite(q)) throw NumericError("Curve::value: non-finite point");
    return q;
}

Vec Curve::velocity(double t) const {
    D1 lifted(t, {1.0});
    auto y = at<D1>(lifted);
    Vec v(y.size(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!y[i].tangents.empty()) v[i] = y[i].tangents[0];
    if (!allFinite(v)) throw NumericError("Curve::velocity: non-finite velocity");
    return v;
}

Curve::Jet2 Curve::jet(double t) const {
    D2 lifted(D1(t, {1.0}), {D1(1.0)});
    auto y = at<D2>(lifted);
    const std::size_t n = y.size();
    Jet2 j{Vec(n, 0.0), Vec(n, 0.0), Vec(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        j.q[i] = y[i].primal.primal;
        if (!y[i].primal.tangents.empty()) j.qdot[i] = y[i].primal.tangents[0];
        if (!y[i].tangents.empty() && !y[i].tangents[0].tangents.empty())
            j.qddot[i] = y[i].tangents[0].tangents[0];
    }
    if (!allFinite(j.q) || !allFinite(j.qdot) || !allFinite(j.qddot))
        throw NumericError("Curve::jet: non-finite jet");
    return j;
}

} // namespace covel
