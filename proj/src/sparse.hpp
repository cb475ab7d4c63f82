// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace meyerslab {

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
struct CsrMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> row_ptr;  // length n_rows + 1
    std::vector<int> col_idx;
    std::vector<double> values;

    static CsrMatrix identity(int n);

    /// Builds from unsorted (row, col, value) triplets; duplicates are summed
    /// in a fixed (row, col) order.
    static CsrMatrix from_triplets(int n_rows, int n_cols,
                                   std::vector<int> rows, std::vector<int> cols,
                                   std::vector<double> vals);

    void validate() const;

    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    std::vector<double> multiply(const std::vector<double>& x) const;

    double max_abs() const;
    std::vector<double> diagonal() const;

    /// Value at (i, j), zero if the entry is not stored.
    double at(int i, int j) const;

    CsrMatrix plus(const CsrMatrix& other) const;
};

} // namespace meyerslab
