#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

namespace trimap {

// Exact dense linear algebra over any field type F supporting +,-,*,
// inverse(), is_zero(), zero_like(), one_like(). Matrices are row-major
// vector<vector<F>>. Desk-scale sizes; no pivot-magnitude concerns in exact
// fields, first nonzero pivot wins.

template <class F>
using Mat = std::vector<std::vector<F>>;
template <class F>
using Vec = std::vector<F>;

template <class F>
Mat<F> mat_identity(size_t n, const F& ex) {
    Mat<F> m(n, Vec<F>(n, ex.zero_like()));
    for (size_t i = 0; i < n; ++i) m[i][i] = ex.one_like();
    return m;
}

template <class F>
Mat<F> mat_mul(const Mat<F>& a, const Mat<F>& b) {
    size_t n = a.size(), m = b[0].size(), k = b.size();
    if (a[0].size() != k) throw std::invalid_argument("mat_mul: shape");
    Mat<F> c(n, Vec<F>(m, a[0][0].zero_like()));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero()) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

template <class F>
Vec<F> mat_vec(const Mat<F>& a, const Vec<F>& x) {
    size_t n = a.size(), k = x.size();
    Vec<F> y(n, x[0].zero_like());
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) y[i] += a[i][t] * x[t];
    return y;
}

template <class F>
Mat<F> mat_transpose(const Mat<F>& a) {
    size_t n = a.size(), m = a[0].size();
    Mat<F> t(m, Vec<F>(n, a[0][0].zero_like()));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) t[j][i] = a[i][j];
    return t;
}

// Row echelon reduction in place; returns pivot columns.
template <class F>
std::vector<size_t> row_reduce(Mat<F>& m) {
    std::vector<size_t> pivots;
    size_t rows = m.size();
    if (rows == 0) return pivots;
    size_t cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && m[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[r]);
        F inv = m[r][c].inverse();
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            F f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class F>
size_t mat_rank(Mat<F> m) {
    return row_reduce(m).size();
}

template <class F>
std::optional<Mat<F>> mat_inverse(const Mat<F>& a) {
    size_t n = a.size();
    Mat<F> aug(n, Vec<F>(2 * n, a[0][0].zero_like()));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = a[0][0].one_like();
    }
    auto piv = row_reduce(aug);
    if (piv.size() != n) return std::nullopt;
    Mat<F> inv(n, Vec<F>(n, a[0][0].zero_like()));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

template <class F>
F mat_det(Mat<F> m) {
    size_t n = m.size();
    F det = m[0][0].one_like();
    for (size_t c = 0; c < n; ++c) {
        size_t sel = c;
        while (sel < n && m[sel][c].is_zero()) ++sel;
        if (sel == n) return m[0][0].zero_like();
        if (sel != c) {
            std::swap(m[sel], m[c]);
            det = -det;
        }
        det *= m[c][c];
        F inv = m[c][c].inverse();
        for (size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            F f = m[i][c] * inv;
            for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

// Solve a x = b; returns one solution or nullopt if inconsistent.
template <class F>
std::optional<Vec<F>> solve_linear(const Mat<F>& a, const Vec<F>& b) {
    size_t rows = a.size(), cols = a.empty() ? 0 : a[0].size();
    Mat<F> aug(rows, Vec<F>(cols + 1, b[0].zero_like()));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    auto piv = row_reduce(aug);
    for (size_t i = piv.size(); i < rows; ++i)
        if (!aug[i][cols].is_zero()) return std::nullopt;
    if (!piv.empty() && piv.back() == cols) return std::nullopt;
    Vec<F> x(cols, b[0].zero_like());
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug[i][cols];
    return x;
}

// Basis of the right null space of a (vectors x with a x = 0).
template <class F>
std::vector<Vec<F>> null_space(Mat<F> a) {
    if (a.empty()) return {};
    size_t cols = a[0].size();
    const F zero = a[0][0].zero_like();
    auto piv = row_reduce(a);
    std::vector<bool> is_piv(cols, false);
    for (size_t c : piv) is_piv[c] = true;
    std::vector<Vec<F>> basis;
    for (size_t free = 0; free < cols; ++free) {
        if (is_piv[free]) continue;
        Vec<F> v(cols, zero);
        v[free] = zero.one_like();
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace trimap
