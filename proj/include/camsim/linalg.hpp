// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>

#include "camsim/common.hpp"

namespace camsim {

/// Gaussian elimination with partial pivoting for small dense systems.
template <int N>
std::array<double, N> solve_linear(std::array<std::array<double, N>, N> a,
                                   std::array<double, N> b) {
    for (int col = 0; col < N; ++col) {
        int pivot = col;
        for (int row = col + 1; row < N; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(b[pivot], b[col]);
        }
        check(std::abs(a[col][col]) > 1e-14, "solve_linear: singular system");
        const double inv = 1.0 / a[col][col];
        for (int row = col + 1; row < N; ++row) {
            const double f = a[row][col] * inv;
            if (f == 0.0) continue;
            for (int k = col; k < N; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (int row = N - 1; row >= 0; --row) {
        double sum = b[row];
        for (int k = row + 1; k < N; ++k) sum -= a[row][k] * x[k];
        x[row] = sum / a[row][row];
    }
    return x;
}

}  // namespace camsim
