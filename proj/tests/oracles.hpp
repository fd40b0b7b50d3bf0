#pragma once

// Independent reference implementations used only by the tests.

#include "tricausal/marginal.hpp"
#include "tricausal/qsqrt2.hpp"
#include "tricausal/quantum.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

using tricausal::Rational;

// Exact phase-one simplex with Bland's rule on a dense rational tableau:
// does x >= 0 with M x = rhs exist?
inline bool exact_feasible(const tricausal::SparseIncidence& m, const std::vector<Rational>& rhs) {
    const std::size_t rows = m.rows, cols = m.cols;
    // Columns: original, then one artificial per row; last column is the rhs.
    const std::size_t width = cols + rows + 1;
    std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(width, 0));
    for (std::size_t j = 0; j < cols; ++j) {
        for (auto k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) t[m.row_idx[k]][j] = m.values[k];
    }
    for (std::size_t i = 0; i < rows; ++i) {
        t[i][cols + i] = 1;
        t[i][width - 1] = rhs[i];
    }
    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) basis[i] = cols + i;
    for (;;) {
        // Reduced costs of minimizing the sum of artificials.
        std::vector<Rational> red(width - 1, 0);
        for (std::size_t j = 0; j + 1 < width; ++j) {
            Rational r = j >= cols ? Rational(1) : Rational(0);
            for (std::size_t i = 0; i < rows; ++i) {
                if (basis[i] >= cols) r -= t[i][j];
            }
            red[j] = r;
        }
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (red[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == width) break;
        std::size_t leave = rows;
        Rational best;
        for (std::size_t i = 0; i < rows; ++i) {
            if (t[i][enter] > 0) {
                Rational ratio = t[i][width - 1] / t[i][enter];
                if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave == rows) return false;  // unbounded cannot happen in phase one
        const Rational piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    Rational objective = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (basis[i] >= cols) objective += t[i][width - 1];
    }
    return objective == 0;
}

// Exhaustive search for y in {-1, 0, 1}^rows with y^T M >= 0 and y.rhs < 0.
inline std::optional<std::vector<int>> ternary_certificate(const tricausal::SparseIncidence& m,
                                                           const std::vector<double>& rhs) {
    const std::size_t rows = m.rows;
    std::vector<int> y(rows, -1);
    for (;;) {
        bool ok = true;
        for (std::size_t j = 0; j < m.cols && ok; ++j) {
            long s = 0;
            for (auto k = m.col_ptr[j]; k < m.col_ptr[j + 1]; ++k) s += y[m.row_idx[k]] * m.values[k];
            ok = s >= 0;
        }
        if (ok) {
            double v = 0;
            for (std::size_t i = 0; i < rows; ++i) v += y[i] * rhs[i];
            if (v < -1e-12) return y;
        }
        std::size_t i = 0;
        while (i < rows && y[i] == 1) y[i++] = -1;
        if (i == rows) return std::nullopt;
        ++y[i];
    }
}

// Scaling and squaring with a truncated Taylor series.
inline tricausal::CMatrix expm(const tricausal::CMatrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const tricausal::CMatrix scaled = a / std::pow(2.0, squarings);
    tricausal::CMatrix term = tricausal::CMatrix::Identity(a.rows(), a.cols());
    tricausal::CMatrix sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

}  // namespace oracle
