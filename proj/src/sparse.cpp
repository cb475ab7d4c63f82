// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "parallel.hpp"

namespace meyerslab {

CsrMatrix CsrMatrix::identity(int n) {
    CsrMatrix m;
    m.n_rows = m.n_cols = n;
    m.row_ptr.resize(n + 1);
    m.col_idx.resize(n);
    m.values.assign(n, 1.0);
    for (int i = 0; i <= n; ++i) m.row_ptr[i] = i;
    for (int i = 0; i < n; ++i) m.col_idx[i] = i;
    return m;
}

CsrMatrix CsrMatrix::from_triplets(int n_rows, int n_cols, std::vector<int> rows,
                                   std::vector<int> cols, std::vector<double> vals) {
    require(rows.size() == cols.size() && cols.size() == vals.size(),
            ErrorCode::invalid_argument, "triplet arrays must have equal length");

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a] != rows[b]) return rows[a] < rows[b];
        if (cols[a] != cols[b]) return cols[a] < cols[b];
        return a < b;
    });

    CsrMatrix m;
    m.n_rows = n_rows;
    m.n_cols = n_cols;
    m.row_ptr.assign(n_rows + 1, 0);
    m.col_idx.reserve(order.size());
    m.values.reserve(order.size());

    int prev_row = -1, prev_col = -1;
    for (std::size_t k : order) {
        const int r = rows[k];
        const int c = cols[k];
        require(r >= 0 && r < n_rows && c >= 0 && c < n_cols,
                ErrorCode::invalid_argument, "triplet index out of range");
        if (r == prev_row && c == prev_col) {
            m.values.back() += vals[k];
        } else {
            m.col_idx.push_back(c);
            m.values.push_back(vals[k]);
            m.row_ptr[r + 1] += 1;
            prev_row = r;
            prev_col = c;
        }
    }
    for (int i = 0; i < n_rows; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
    return m;
}

void CsrMatrix::validate() const {
    require(n_rows >= 0 && n_cols >= 0, ErrorCode::invalid_argument,
            "negative matrix dimensions");
    require(static_cast<int>(row_ptr.size()) == n_rows + 1,
            ErrorCode::invalid_argument, "row_ptr length must be n_rows + 1");
    require(row_ptr.front() == 0, ErrorCode::invalid_argument,
            "row_ptr must start at 0");
    for (int i = 0; i < n_rows; ++i) {
        require(row_ptr[i] <= row_ptr[i + 1], ErrorCode::invalid_argument,
                "row_ptr must be nondecreasing");
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            require(col_idx[k] >= 0 && col_idx[k] < n_cols,
                    ErrorCode::invalid_argument, "column index out of range");
            if (k > row_ptr[i])
                require(col_idx[k] > col_idx[k - 1], ErrorCode::invalid_argument,
                        "column indices must be strictly increasing within a row");
        }
    }
    require(static_cast<int>(values.size()) == row_ptr[n_rows],
            ErrorCode::invalid_argument, "values length must equal row_ptr[n_rows]");
    require(col_idx.size() == values.size(), ErrorCode::invalid_argument,
            "col_idx and values must have equal length");
}

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    require(static_cast<int>(x.size()) == n_cols, ErrorCode::invalid_argument,
            "matvec dimension mismatch");
    y.resize(n_rows);
    parallel_for(static_cast<std::size_t>(n_rows), [&](std::size_t i) {
        double sum = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            sum += values[k] * x[col_idx[k]];
        y[i] = sum;
    });
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, y);
    return y;
}

double CsrMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n_rows, 0.0);
    for (int i = 0; i < n_rows; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            if (col_idx[k] == static_cast<int>(i)) d[i] = values[k];
    return d;
}

double CsrMatrix::at(int i, int j) const {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
        if (col_idx[k] == j) return values[k];
    return 0.0;
}

CsrMatrix CsrMatrix::plus(const CsrMatrix& other) const {
    require(n_rows == other.n_rows && n_cols == other.n_cols,
            ErrorCode::invalid_argument, "matrix sum dimension mismatch");
    CsrMatrix m;
    m.n_rows = n_rows;
    m.n_cols = n_cols;
    m.row_ptr.assign(n_rows + 1, 0);
    for (int i = 0; i < n_rows; ++i) {
        int ka = row_ptr[i], kb = other.row_ptr[i];
        const int ea = row_ptr[i + 1], eb = other.row_ptr[i + 1];
        while (ka < ea || kb < eb) {
            int col;
            double val;
            if (kb >= eb || (ka < ea && col_idx[ka] < other.col_idx[kb])) {
                col = col_idx[ka];
                val = values[ka];
                ++ka;
            } else if (ka >= ea || other.col_idx[kb] < col_idx[ka]) {
                col = other.col_idx[kb];
                val = other.values[kb];
                ++kb;
            } else {
                col = col_idx[ka];
                val = values[ka] + other.values[kb];
                ++ka;
                ++kb;
            }
            m.col_idx.push_back(col);
            m.values.push_back(val);
            m.row_ptr[i + 1] += 1;
        }
    }
    for (int i = 0; i < n_rows; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
    return m;
}

} // namespace meyerslab
