#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "covel/errors.hpp"

namespace covel {

// Chart dimensions in the catalog never exceed 3; one extra slot covers the
// total space of a principal bundle M x G with dim M = 3.
inline constexpr int kMaxDim = 4;

using Vec = std::vector<double>;

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

// Rank-3 array T^k_{ij}, fixed shape (n,n,n), inline storage.
struct Ten3 {
    int n = 0;
    std::array<double, kMaxDim * kMaxDim * kMaxDim> a{};

    Ten3() = default;
    explicit Ten3(int dim) : n(dim) {
        if (dim < 1 || dim > kMaxDim) throw DomainError("Ten3 dimension out of range");
    }

    double& operator()(int k, int i, int j) { return a[static_cast<std::size_t>((k * n + i) * n + j)]; }
    double operator()(int k, int i, int j) const { return a[static_cast<std::size_t>((k * n + i) * n + j)]; }
};

inline void requireSize(std::span<const double> v, std::size_t n, const char* what) {
    if (v.size() != n) throw DomainError(std::string(what) + ": dimension mismatch");
}

inline Vec toVec(std::span<const double> v) { return Vec(v.begin(), v.end()); }

inline Vec operator+(const Vec& a, const Vec& b) {
    requireSize(b, a.size(), "vector add");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    requireSize(b, a.size(), "vector sub");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec operator*(double s, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

inline void axpy(double s, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    requireSize(b, a.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double normInf(std::span<const double> a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline bool allFinite(std::span<const double> a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

inline Vec matVec(const Mat& m, std::span<const double> x) {
    requireSize(x, static_cast<std::size_t>(m.cols), "matVec");
    Vec r(static_cast<std::size_t>(m.rows), 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * x[j];
    return r;
}

// alpha' = J^T alpha (covector action of a Jacobian).
inline Vec matTVec(const Mat& m, std::span<const double> x) {
    requireSize(x, static_cast<std::size_t>(m.rows), "matTVec");
    Vec r(static_cast<std::size_t>(m.cols), 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[j] += m(i, j) * x[i];
    return r;
}

inline double norm1(const Mat& m) {
    double best = 0.0;
    for (int j = 0; j < m.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < m.rows; ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

// Solve A x = b by Gauss elimination with partial pivoting. Throws
// NumericError on (near-)singular A. Sizes here are tiny (n <= 4).
Vec solve(Mat A, Vec b);

Mat inverse(const Mat& m);

// norm1(A) * norm1(inv(A)); throws if A is singular.
double conditionNumber1(const Mat& m);

} // namespace covel
