#pragma once

#include <cassert>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <utility>
#include <vector>

#include "covel/errors.hpp"

namespace covel {

// Forward-mode dual number carrying a dynamic tangent vector, one slot per
// seeded direction. An empty tangent vector means "constant": it behaves as
// all-zero tangents without storing them, so constants stay cheap.
//
// Nesting Dual<Dual<double>> yields exact second derivatives; one more level
// handles maps that internally push a tangent through another map (chart
// transitions applied to Lagrangians).
template <class T>
struct Dual {
    T primal{};
    std::vector<T> tangents{};

    Dual() = default;

    Dual(double v)
        requires(!std::same_as<T, double>)
        : primal(v) {}

    Dual(T p) : primal(std::move(p)) {}

    Dual(T p, std::vector<T> t) : primal(std::move(p)), tangents(std::move(t)) {}

    std::size_t width() const { return tangents.size(); }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

// Any level of the numeric tower.
template <class T>
inline constexpr bool is_dual_v = false;
template <class T>
inline constexpr bool is_dual_v<Dual<T>> = true;

template <class T>
inline constexpr int tower_depth_v = 0;
template <class T>
inline constexpr int tower_depth_v<Dual<T>> = 1 + tower_depth_v<T>;

template <class T>
concept TowerScalar = std::same_as<T, double> || is_dual_v<T>;

inline double primalValue(double x) { return x; }
template <class T>
double primalValue(const Dual<T>& x) {
    return primalValue(x.primal);
}

inline bool towerFinite(double x) { return std::isfinite(x); }
template <class T>
bool towerFinite(const Dual<T>& x) {
    if (!towerFinite(x.primal)) return false;
    for (const auto& t : x.tangents)
        if (!towerFinite(t)) return false;
    return true;
}

namespace detail {

// r = ca*ta + cb*tb elementwise; an empty side contributes nothing.
template <class T>
std::vector<T> linearCombine(const std::vector<T>& ta, const T& ca,
                             const std::vector<T>& tb, const T& cb) {
    if (ta.empty() && tb.empty()) return {};
    if (tb.empty()) {
        std::vector<T> r(ta.size());
        for (std::size_t i = 0; i < ta.size(); ++i) r[i] = ca * ta[i];
        return r;
    }
    if (ta.empty()) {
        std::vector<T> r(tb.size());
        for (std::size_t i = 0; i < tb.size(); ++i) r[i] = cb * tb[i];
        return r;
    }
    assert(ta.size() == tb.size() && "tangent widths must agree");
    std::vector<T> r(ta.size());
    for (std::size_t i = 0; i < ta.size(); ++i) r[i] = ca * ta[i] + cb * tb[i];
    return r;
}

// r = c*t elementwise.
template <class T>
std::vector<T> scaleTangents(const std::vector<T>& t, const T& c) {
    std::vector<T> r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = c * t[i];
    return r;
}

} // namespace detail

// ---- arithmetic ----

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    return {a.primal + b.primal, detail::linearCombine(a.tangents, T(1.0), b.tangents, T(1.0))};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return {a.primal - b.primal, detail::linearCombine(a.tangents, T(1.0), b.tangents, T(-1.0))};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    // product rule, exact
    return {a.primal * b.primal, detail::linearCombine(a.tangents, b.primal, b.tangents, a.primal)};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T q = a.primal / b.primal; // primal path stays bitwise equal to plain division
    T inv = T(1.0) / b.primal;
    return {q, detail::linearCombine(a.tangents, inv, b.tangents, T(0.0) - q * inv)};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
    return {T(0.0) - a.primal, detail::scaleTangents(a.tangents, T(-1.0))};
}
template <class T>
Dual<T> operator+(const Dual<T>& a) {
    return a;
}

template <class T>
Dual<T> operator+(const Dual<T>& a, double b) {
    return {a.primal + T(b), a.tangents};
}
template <class T>
Dual<T> operator+(double a, const Dual<T>& b) {
    return b + a;
}
template <class T>
Dual<T> operator-(const Dual<T>& a, double b) {
    return {a.primal - T(b), a.tangents};
}
template <class T>
Dual<T> operator-(double a, const Dual<T>& b) {
    return {T(a) - b.primal, detail::scaleTangents(b.tangents, T(-1.0))};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double b) {
    return {a.primal * T(b), detail::scaleTangents(a.tangents, T(b))};
}
template <class T>
Dual<T> operator*(double a, const Dual<T>& b) {
    return b * a;
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double b) {
    return a * (1.0 / b);
}
template <class T>
Dual<T> operator/(double a, const Dual<T>& b) {
    T inv = T(1.0) / b.primal;
    T q = T(a) * inv;
    return {q, detail::scaleTangents(b.tangents, T(0.0) - q * inv)};
}

// ---- elementary functions ----
// Each returns {f(p), f'(p) * tangents}; the derivative factor lives in T
// arithmetic so nesting produces exact higher derivatives.

namespace detail {
template <class T>
Dual<T> lift1(const Dual<T>& x, T value, T deriv) {
    return {std::move(value), scaleTangents(x.tangents, deriv)};
}
} // namespace detail

template <class T>
Dual<T> sin(const Dual<T>& x) {
    using std::cos;
    using std::sin;
    return detail::lift1(x, sin(x.primal), cos(x.primal));
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
    using std::cos;
    using std::sin;
    return detail::lift1(x, cos(x.primal), T(0.0) - sin(x.primal));
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
    using std::cos;
    using std::tan;
    T c = cos(x.primal);
    return detail::lift1(x, tan(x.primal), T(1.0) / (c * c));
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
    using std::exp;
    T e = exp(x.primal);
    return detail::lift1(x, e, e);
}
template <class T>
Dual<T> log(const Dual<T>& x) {
    using std::log;
    if (primalValue(x) <= 0.0) throw NumericError("log of non-positive value");
    return detail::lift1(x, log(x.primal), T(1.0) / x.primal);
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
    using std::sqrt;
    if (primalValue(x) < 0.0) throw NumericError("sqrt of negative value");
    T s = sqrt(x.primal);
    return detail::lift1(x, s, T(0.5) / s);
}
template <class T>
Dual<T> abs(const Dual<T>& x) {
    // derivative at 0 taken as +1
    if (primalValue(x) >= 0.0) return x;
    return -x;
}
template <class T>
Dual<T> asin(const Dual<T>& x) {
    using std::asin;
    using std::sqrt;
    if (std::abs(primalValue(x)) >= 1.0) throw NumericError("asin outside (-1, 1)");
    return detail::lift1(x, asin(x.primal), T(1.0) / sqrt(T(1.0) - x.primal * x.primal));
}
template <class T>
Dual<T> acos(const Dual<T>& x) {
    using std::acos;
    using std::sqrt;
    if (std::abs(primalValue(x)) >= 1.0) throw NumericError("acos outside (-1, 1)");
    return detail::lift1(x, acos(x.primal), T(-1.0) / sqrt(T(1.0) - x.primal * x.primal));
}
template <class T>
Dual<T> atan(const Dual<T>& x) {
    using std::atan;
    return detail::lift1(x, atan(x.primal), T(1.0) / (T(1.0) + x.primal * x.primal));
}

template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
    using std::atan2;
    T denom = x.primal * x.primal + y.primal * y.primal;
    if (primalValue(denom) == 0.0) throw NumericError("atan2 at origin");
    return {atan2(y.primal, x.primal),
            detail::linearCombine(y.tangents, x.primal / denom, x.tangents, (T(0.0) - y.primal) / denom)};
}

// Integer power by squaring; valid for any base sign, exact derivatives.
template <TowerScalar T>
T powInt(const T& base, long long e) {
    if (e < 0) return T(1.0) / powInt(base, -e);
    T result(1.0);
    T b = base;
    while (e > 0) {
        if (e & 1) result = result * b;
        b = b * b;
        e >>= 1;
    }
    return result;
}

template <class T>
Dual<T> pow(const Dual<T>& x, double e) {
    if (e == std::floor(e) && std::abs(e) <= 64.0) return powInt(x, static_cast<long long>(e));
    if (primalValue(x) <= 0.0) throw NumericError("pow of non-positive base with non-integer exponent");
    return exp(e * log(x));
}

template <class T>
Dual<T> pow(const Dual<T>& x, const Dual<T>& e) {
    if (primalValue(x) <= 0.0) throw NumericError("pow of non-positive base with variable exponent");
    return exp(e * log(x));
}

// towerConstant<T>(v): the tower value with primal v and no tangents.
template <TowerScalar T>
T towerConstant(double v) {
    return T(v);
}

} // namespace covel
