#include "covel/linalg.hpp"

#include <cmath>

namespace covel {

Vec solve(Mat A, Vec b) {
    if (A.rows != A.cols) throw DomainError("solve: matrix not square");
    const int n = A.rows;
    requireSize(b, static_cast<std::size_t>(n), "solve rhs");

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A(r, col)) > std::abs(A(pivot, col))) pivot = r;
        if (A(pivot, col) == 0.0) throw NumericError("solve: singular matrix");
        if (pivot != col) {
            for (int c = col; c < n; ++c) std::swap(A(pivot, c), A(col, c));
            std::swap(b[pivot], b[col]);
        }
        const double inv = 1.0 / A(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) A(r, c) -= f * A(col, c);
            b[r] -= f * b[col];
        }
    }
    Vec x(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A(r, c) * x[c];
        x[r] = s / A(r, r);
    }
    if (!allFinite(x)) throw NumericError("solve: non-finite solution");
    return x;
}

Mat inverse(const Mat& m) {
    if (m.rows != m.cols) throw DomainError("inverse: matrix not square");
    const int n = m.rows;
    Mat inv(n, n);
    for (int j = 0; j < n; ++j) {
        Vec e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        Vec col = solve(m, e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<std::size_t>(i)];
    }
    return inv;
}

double conditionNumber1(const Mat& m) {
    return norm1(m) * norm1(inverse(m));
}

} // namespace covel
