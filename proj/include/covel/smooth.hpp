#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "covel/dual.hpp"
#include "covel/linalg.hpp"

namespace covel {

// Default steps for the finite-difference oracles: 1e-5 balances truncation
// against rounding for first derivatives at double precision, 1e-4 for
// second derivatives obtained by differencing gradients.
inline constexpr double kFdStepFirst = 1e-5;
inline constexpr double kFdStepSecond = 1e-4;

// A deterministic, side-effect-free map R^n -> R^m evaluable over the whole
// numeric tower (double, D1, D2, D3). Construct from one generic callable
// taking std::span<const T> and returning std::vector<T>; the constructor
// instantiates it at every tower level.
class SmoothMap {
public:
    template <class F>
    SmoothMap(int arity_in, int arity_out, F f)
        : nin_(arity_in), nout_(arity_out), f0_(f), f1_(f), f2_(f), f3_(f) {}

    int arityIn() const { return nin_; }
    int arityOut() const { return nout_; }

    template <TowerScalar T>
    std::vector<T> eval(std::span<const T> x) const {
        if (static_cast<int>(x.size()) != nin_) throw DomainError("SmoothMap: input dimension mismatch");
        std::vector<T> y;
        if constexpr (std::same_as<T, double>) y = f0_(x);
        else if constexpr (std::same_as<T, D1>) y = f1_(x);
        else if constexpr (std::same_as<T, D2>) y = f2_(x);
        else if constexpr (std::same_as<T, D3>) y = f3_(x);
        else static_assert(!sizeof(T), "numeric tower supports up to three nested tangent levels");
        if (static_cast<int>(y.size()) != nout_) throw DomainError("SmoothMap: output dimension mismatch");
        return y;
    }

    template <TowerScalar T>
    std::vector<T> eval(const std::vector<T>& x) const {
        return eval(std::span<const T>(x));
    }

    Vec evalReal(std::span<const double> x) const { return eval<double>(x); }

private:
    int nin_;
    int nout_;
    std::function<std::vector<double>(std::span<const double>)> f0_;
    std::function<std::vector<D1>(std::span<const D1>)> f1_;
    std::function<std::vector<D2>(std::span<const D2>)> f2_;
    std::function<std::vector<D3>(std::span<const D3>)> f3_;
};

// Seed one tangent slot per input coordinate.
template <TowerScalar T>
std::vector<Dual<T>> seedIdentity(std::span<const T> x) {
    const std::size_t n = x.size();
    std::vector<Dual<T>> lifted(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<T> t(n, T(0.0));
        t[i] = T(1.0);
        lifted[i] = Dual<T>(x[i], std::move(t));
    }
    return lifted;
}

// Seed a single tangent slot holding the given direction.
template <TowerScalar T>
std::vector<Dual<T>> seedDirection(std::span<const T> x, std::span<const T> dir) {
    if (x.size() != dir.size()) throw DomainError("seedDirection: dimension mismatch");
    std::vector<Dual<T>> lifted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) lifted[i] = Dual<T>(x[i], {dir[i]});
    return lifted;
}

// Gradient of a scalar map by one vector-forward evaluation.
Vec gradient(const SmoothMap& f, std::span<const double> point);

// Jacobian, row r / column c = dF^r/dx^c.
Mat jacobian(const SmoothMap& F, std::span<const double> point);

// Symmetric matrix of second partials of a scalar map, by nested duals.
Mat hessian(const SmoothMap& f, std::span<const double> point);

// Gradient and Hessian from a single nested evaluation.
std::pair<Vec, Mat> gradientAndHessian(const SmoothMap& f, std::span<const double> point);

// H[r](i,j) = d^2 F^r / dx^i dx^j for a vector-valued map (r selects Ten3 k).
std::vector<Mat> secondDerivativeArray(const SmoothMap& F, std::span<const double> point);

// Central difference (F(x+h d) - F(x-h d)) / (2h); the independent oracle.
Vec fdDirectional(const SmoothMap& F, std::span<const double> point,
                  std::span<const double> direction, double step);

// A smooth curve t -> q(t), evaluable over the tower. Velocity and jet come
// from dual differentiation, never finite differences.
class Curve {
public:
    template <class F>
    Curve(int dim, F f) : map_(1, dim, std::move(f)) {}

    explicit Curve(SmoothMap m) : map_(std::move(m)) {
        if (map_.arityIn() != 1) throw DomainError("Curve: map must have one input");
    }

    int dim() const { return map_.arityOut(); }
    const SmoothMap& map() const { return map_; }

    template <TowerScalar T>
    std::vector<T> at(const T& t) const {
        const T buf[1] = {t};
        return map_.eval(std::span<const T>(buf, 1));
    }

    Vec value(double t) const;
    Vec velocity(double t) const;

    struct Jet2 {
        Vec q, qdot, qddot;
    };
    Jet2 jet(double t) const;

private:
    SmoothMap map_;
};

// t -> map(base(t)), over the whole tower.
inline Curve composeCurve(const SmoothMap& map, const Curve& base) {
    if (map.arityIn() != base.dim()) throw DomainError("composeCurve: dimension mismatch");
    return Curve(map.arityOut(), [map, base]<TowerScalar T>(std::span<const T> t) {
        return map.eval<T>(base.at<T>(t[0]));
    });
}

// t -> ca*a(t) + cb*b(t); used to perturb paths by variation fields.
inline Curve affineCombination(const Curve& a, double ca, const Curve& b, double cb) {
    if (a.dim() != b.dim()) throw DomainError("affineCombination: dimension mismatch");
    return Curve(a.dim(), [a, ca, b, cb]<TowerScalar T>(std::span<const T> t) {
        auto va = a.at<T>(t[0]);
        auto vb = b.at<T>(t[0]);
        std::vector<T> r(va.size());
        for (std::size_t i = 0; i < va.size(); ++i) r[i] = ca * va[i] + cb * vb[i];
        return r;
    });
}

} // namespace covel
