#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace courtrack {

/// Dense rows x cols cost matrix plus a sentinel value for padding and gated
/// entries.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols, double pad_value = 1e6, double fill = 0.0);
    /// Row-major initializer; all rows must have equal length.
    CostMatrix(const std::vector<std::vector<double>>& values, double pad_value = 1e6);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double pad_value() const { return pad_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    /// Throws std::invalid_argument on non-finite entries.
    void validate() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    double pad_;
    std::vector<double> data_;
};

using Assignment = std::vector<std::pair<std::size_t, std::size_t>>;

/// Minimum-cost perfect matching on the matrix padded to square (Kuhn-Munkres
/// with potentials). Padding rows or columns are constant and never change the
/// optimum, so pad_value does not affect the result. Among equal-cost optima the
/// lexicographically smallest set of (row, col) pairs is returned. Pairs that
/// touch padding are dropped; the result is sorted by row.
Assignment solve_assignment(const CostMatrix& m);

/// Sum of m(r, c) over the pairs, in row order.
double assignment_cost(const CostMatrix& m, const Assignment& pairs);

}  // namespace courtrack
