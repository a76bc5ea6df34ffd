#include "courtrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace courtrack {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double pad_value, double fill)
    : rows_(rows), cols_(cols), pad_(pad_value), data_(rows * cols, fill) {}

CostMatrix::CostMatrix(const std::vector<std::vector<double>>& values, double pad_value)
    : rows_(values.size()), cols_(values.empty() ? 0 : values.front().size()), pad_(pad_value) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : values) {
        if (row.size() != cols_) {
            throw std::invalid_argument("cost matrix rows have different lengths");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

void CostMatrix::validate() const {
    if (!std::isfinite(pad_)) {
        throw std::invalid_argument("cost matrix pad value must be finite");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("cost matrix entries must be finite");
        }
    }
}

double assignment_cost(const CostMatrix& m, const Assignment& pairs) {
    Assignment sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    for (const auto& [r, c] : sorted) {
        total += m(r, c);
    }
    return total;
}

namespace {

class LexMatcher {
public:
    LexMatcher(const std::vector<std::vector<bool>>& tight, std::vector<std::size_t> row_to_col)
        : tight_(tight), n_(tight.size()), row_to_col_(std::move(row_to_col)), col_to_row_(n_) {
        for (std::size_t r = 0; r < n_; ++r) {
            col_to_row_[row_to_col_[r]] = r;
        }
    }

    // Rewrites the perfect matching into the lexicographically smallest one that
    // uses only tight edges.
    std::vector<std::size_t> run() {
        std::vector<bool> fixed_col(n_, false);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (!tight_[i][j] || fixed_col[j]) {
                    continue;
                }
                if (row_to_col_[i] == j || reassign(i, j, fixed_col)) {
                    break;
                }
            }
            fixed_col[row_to_col_[i]] = true;
        }
        return row_to_col_;
    }

private:
    // Gives column j to row i by re-routing j's holder to the column i frees.
    bool reassign(std::size_t i, std::size_t j, const std::vector<bool>& fixed_col) {
        const std::size_t holder = col_to_row_[j];
        const std::size_t freed = row_to_col_[i];
        std::vector<bool> visited(n_, false);
        visited[j] = true;
        if (!augment(holder, freed, fixed_col, visited)) {
            return false;
        }
        row_to_col_[i] = j;
        col_to_row_[j] = i;
        return true;
    }

    bool augment(std::size_t row, std::size_t target, const std::vector<bool>& fixed_col,
                 std::vector<bool>& visited) {
        for (std::size_t c = 0; c < n_; ++c) {
            if (!tight_[row][c] || visited[c] || fixed_col[c]) {
                continue;
            }
            visited[c] = true;
            if (c == target || augment(col_to_row_[c], target, fixed_col, visited)) {
                row_to_col_[row] = c;
                col_to_row_[c] = row;
                return true;
            }
        }
        return false;
    }

    const std::vector<std::vector<bool>>& tight_;
    std::size_t n_;
    std::vector<std::size_t> row_to_col_;
    std::vector<std::size_t> col_to_row_;
};

}  // namespace

Assignment solve_assignment(const CostMatrix& m) {
    m.validate();
    const std::size_t n = std::max(m.rows(), m.cols());
    if (n == 0) {
        return {};
    }
    // Padding rows (or columns) are constant, so their value cannot change
    // which real pairs are optimal; zero keeps the potentials on the scale of
    // the real entries.
    auto cost = [&](std::size_t r, std::size_t c) {
        return (r < m.rows() && c < m.cols()) ? m(r, c) : 0.0;
    };

    // Shortest augmenting path Hungarian, 1-based with potentials u (rows), v (cols).
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) {
        row_to_col[p[j] - 1] = j - 1;
    }

    // Every optimal matching uses only edges with zero reduced cost.
    double scale = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            scale = std::max(scale, std::abs(m(r, c)));
        }
    }
    const double eps = 1e-12 * (1.0 + scale) * static_cast<double>(n);
    std::vector<std::vector<bool>> tight(n, std::vector<bool>(n, false));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            tight[r][c] = cost(r, c) - u[r + 1] - v[c + 1] <= eps;
        }
        tight[r][row_to_col[r]] = true;
    }
    row_to_col = LexMatcher(tight, std::move(row_to_col)).run();

    Assignment out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (row_to_col[r] < m.cols()) {
            out.emplace_back(r, row_to_col[r]);
        }
    }
    return out;
}

}  // namespace courtrack
