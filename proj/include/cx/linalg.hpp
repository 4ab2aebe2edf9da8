#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace cx {

struct QMat {
    std::size_t rows = 0, cols = 0;
    std::vector<Q> a;

    QMat() = default;
    QMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Q(0)) {}

    Q& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const Q& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

/* Rank by fraction-free (Bareiss) elimination after clearing denominators
   row by row; row scaling leaves rank unchanged. */
inline std::size_t rank_of(const QMat& m)
{
    if (m.rows == 0 || m.cols == 0)
        return 0;
    std::vector<std::vector<Z>> w(m.rows, std::vector<Z>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i) {
        Z l = 1;
        for (std::size_t j = 0; j < m.cols; ++j)
            l = lcm(l, denominator(m.at(i, j)));
        for (std::size_t j = 0; j < m.cols; ++j)
            w[i][j] = numerator(m.at(i, j)) * (l / denominator(m.at(i, j)));
    }
    std::size_t r = 0;
    Z prev = 1;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && w[p][c] == 0)
            ++p;
        if (p == m.rows)
            continue;
        std::swap(w[p], w[r]);
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            for (std::size_t j = c + 1; j < m.cols; ++j)
                w[i][j] = (w[i][j] * w[r][c] - w[i][c] * w[r][j]) / prev;
            w[i][c] = 0;
        }
        prev = w[r][c];
        ++r;
    }
    return r;
}

/* Gauss-Jordan inverse over Q; nullopt when singular. */
inline std::optional<QMat> inverse_of(QMat m)
{
    if (m.rows != m.cols)
        throw std::invalid_argument("inverse of non-square matrix");
    std::size_t n = m.rows;
    QMat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        inv.at(i, i) = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m.at(p, c) == 0)
            ++p;
        if (p == n)
            return std::nullopt;
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(m.at(p, j), m.at(c, j));
            std::swap(inv.at(p, j), inv.at(c, j));
        }
        Q d = m.at(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m.at(c, j) /= d;
            inv.at(c, j) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m.at(i, c) == 0)
                continue;
            Q f = m.at(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m.at(i, j) -= f * m.at(c, j);
                inv.at(i, j) -= f * inv.at(c, j);
            }
        }
    }
    return inv;
}

} // namespace cx
