#pragma once

// Dense Gaussian elimination over an exact field, small systems only.

#include <vector>

namespace recsolve {

template <class F>
struct LinResult {
    bool consistent = false;
    std::vector<F> x;  // free variables pinned to zero
};

template <class F>
inline LinResult<F> solve_linear(std::vector<std::vector<F>> A, std::vector<F> b) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    std::vector<long> pivot_col(rows, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && A[p][c] == F(0)) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        std::swap(b[p], b[r]);
        F inv = F(1) / A[r][c];
        for (std::size_t j = c; j < cols; ++j) A[r][j] = A[r][j] * inv;
        b[r] = b[r] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            F f = A[i][c];
            if (f == F(0)) continue;
            for (std::size_t j = c; j < cols; ++j) A[i][j] = A[i][j] - f * A[r][j];
            b[i] = b[i] - f * b[r];
        }
        pivot_col[r] = static_cast<long>(c);
        ++r;
    }
    LinResult<F> out;
    for (std::size_t i = r; i < rows; ++i) {
        if (!(b[i] == F(0))) return out;  // inconsistent
    }
    out.consistent = true;
    out.x.assign(cols, F(0));
    for (std::size_t i = 0; i < r; ++i) out.x[pivot_col[i]] = b[i];
    return out;
}

}  // namespace recsolve
