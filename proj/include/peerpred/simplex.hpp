// Dense two-phase simplex for small linear programs:
//
//   minimize c^T x  subject to per-row {<=, >=, =} constraints and x >= 0.
//
// The instances this solver sees can be poorly conditioned (rows that are
// nearly exact negations of each other), so reduced costs are recomputed from
// the tableau on every iteration instead of being updated incrementally, all
// pivot eligibility tests are relative to the row or column scale, and the
// ratio test prefers the numerically largest pivot, falling back to Bland's
// lowest-index rule when the objective stalls so the iteration cannot cycle.
// Sized for problems with a handful of variables and rows; everything is a
// plain dense tableau.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace peerpred::lp {

// Tableau entries below kPivotRel times their row's magnitude never serve as
// pivots; reduced costs above -kEnterFloor - kEnterRel * column magnitude do
// not trigger a pivot. Both sit well above double rounding noise for tableaus
// whose entries stay within a factor ~1e9 of each other.
inline constexpr double kPivotRel = 1e-12;
inline constexpr double kEnterFloor = 1e-12;
inline constexpr double kEnterRel = 1e-13;

// A residual artificial-variable sum above this after phase 1 means the
// constraint system has no nonnegative solution.
inline constexpr double kPhase1Tol = 1e-9;

enum class Relation { less_equal, greater_equal, equal };

struct Constraint {
    std::vector<double> coeff;
    Relation rel = Relation::greater_equal;
    double rhs = 0.0;
};

enum class SolveStatus { optimal, infeasible, unbounded };

struct Solution {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<double> x;  // primal point, populated only when optimal
    double objective = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// One tableau pass under a given cost vector. a, b, basis are updated in
// place; cost is the full cost vector over all current columns.
inline SolveStatus run_pivots(std::vector<std::vector<double>>& a, std::vector<double>& b,
                              std::vector<int>& basis, const std::vector<double>& cost,
                              const std::vector<bool>& blocked) {
    const std::size_t m = a.size();
    const std::size_t ncols = m == 0 ? 0 : a[0].size();

    std::vector<double> reduced(ncols);
    std::vector<double> colmax(ncols);
    std::vector<double> rowmax(m);

    double best_objective = std::numeric_limits<double>::infinity();
    std::size_t stalled = 0;

    const std::size_t max_iter = 10000;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // Fresh reduced costs and scales; basis columns are exact unit
        // vectors, so r_{basis[i]} comes out exactly zero.
        std::fill(colmax.begin(), colmax.end(), 0.0);
        for (std::size_t j = 0; j < ncols; ++j) reduced[j] = cost[j];
        double objective = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            rowmax[i] = 0.0;
            for (std::size_t j = 0; j < ncols; ++j) {
                double v = std::abs(a[i][j]);
                if (v > colmax[j]) colmax[j] = v;
                if (v > rowmax[i]) rowmax[i] = v;
            }
            double cb = cost[static_cast<std::size_t>(basis[i])];
            objective += cb * b[i];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < ncols; ++j) reduced[j] -= cb * a[i][j];
        }

        if (objective < best_objective - 1e-12 * (1.0 + std::abs(best_objective))) {
            best_objective = objective;
            stalled = 0;
        } else {
            ++stalled;
        }
        // Largest-pivot tie-breaking can in principle cycle on degenerate
        // vertices; after a long stall, switch to Bland's rule, which cannot.
        const bool bland = stalled > 50;

        // Entering column: lowest index whose reduced cost is negative
        // beyond the noise expected at that column's scale.
        std::size_t enter = ncols;
        for (std::size_t j = 0; j < ncols; ++j) {
            if (blocked[j]) continue;
            if (reduced[j] < -(kEnterFloor + kEnterRel * colmax[j])) {
                enter = j;
                break;
            }
        }
        if (enter == ncols) return SolveStatus::optimal;

        // Ratio test, two passes: find the minimum ratio, then pick among
        // rows within a relative whisker of it.
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (a[i][enter] <= kPivotRel * (1.0 + rowmax[i])) continue;
            min_ratio = std::min(min_ratio, b[i] / a[i][enter]);
        }
        if (min_ratio == std::numeric_limits<double>::infinity()) return SolveStatus::unbounded;

        const double ratio_cut = min_ratio + 1e-9 * (1.0 + std::abs(min_ratio));
        std::size_t leave = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (a[i][enter] <= kPivotRel * (1.0 + rowmax[i])) continue;
            if (b[i] / a[i][enter] > ratio_cut) continue;
            if (leave == m) {
                leave = i;
            } else if (bland) {
                if (basis[i] < basis[leave]) leave = i;
            } else if (a[i][enter] > a[leave][enter]) {
                leave = i;
            }
        }

        // Pivot on (leave, enter).
        double piv = a[leave][enter];
        for (std::size_t j = 0; j < ncols; ++j) a[leave][j] /= piv;
        a[leave][enter] = 1.0;
        b[leave] /= piv;
        if (b[leave] < 0.0) b[leave] = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            double factor = a[i][enter];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < ncols; ++j) a[i][j] -= factor * a[leave][j];
            a[i][enter] = 0.0;
            b[i] -= factor * b[leave];
            if (b[i] < 0.0) b[i] = 0.0;
        }
        basis[leave] = static_cast<int>(enter);
    }
    throw std::runtime_error("simplex did not terminate within its iteration bound");
}

}  // namespace detail

inline Solution solve(const std::vector<double>& c, const std::vector<Constraint>& rows) {
    const std::size_t n = c.size();
    const std::size_t m = rows.size();

    Solution result;
    if (m == 0) {
        // Only x >= 0 remains; the minimum of a nonnegative-cost objective is
        // x = 0, and any negative cost makes the problem unbounded.
        for (double cj : c)
            if (cj < 0.0) {
                result.status = SolveStatus::unbounded;
                return result;
            }
        result.status = SolveStatus::optimal;
        result.x.assign(n, 0.0);
        result.objective = 0.0;
        return result;
    }

    // Equality form: structural columns, then one slack/surplus column per
    // inequality row, then artificials appended as needed.
    std::size_t ncols = n;
    for (const auto& row : rows)
        if (row.rel != Relation::equal) ++ncols;

    std::vector<std::vector<double>> a(m);
    std::vector<double> b(m);
    std::vector<int> slack_col(m, -1);
    std::size_t next_slack = n;
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].coeff.size() != n)
            throw std::invalid_argument("constraint arity does not match objective");
        a[i].assign(ncols, 0.0);
        for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[i].coeff[j];
        b[i] = rows[i].rhs;
        if (rows[i].rel == Relation::less_equal) a[i][next_slack] = 1.0;
        if (rows[i].rel == Relation::greater_equal) a[i][next_slack] = -1.0;
        if (rows[i].rel != Relation::equal) slack_col[i] = static_cast<int>(next_slack++);
        if (b[i] < 0.0) {
            for (auto& v : a[i]) v = -v;
            b[i] = -b[i];
        }
    }

    // Starting basis: a slack column that survived sign normalization with
    // coefficient +1 where available, an artificial column otherwise.
    std::vector<int> basis(m, -1);
    std::size_t first_artificial = ncols;
    for (std::size_t i = 0; i < m; ++i) {
        if (slack_col[i] >= 0 && a[i][static_cast<std::size_t>(slack_col[i])] > 0.5) {
            basis[i] = slack_col[i];
            continue;
        }
        for (std::size_t r = 0; r < m; ++r) a[r].push_back(r == i ? 1.0 : 0.0);
        basis[i] = static_cast<int>(ncols);
        ++ncols;
    }

    std::vector<bool> blocked(ncols, false);

    // Phase 1: minimize the artificial sum.
    if (first_artificial < ncols) {
        std::vector<double> phase1_cost(ncols, 0.0);
        for (std::size_t j = first_artificial; j < ncols; ++j) phase1_cost[j] = 1.0;
        SolveStatus st = detail::run_pivots(a, b, basis, phase1_cost, blocked);
        if (st == SolveStatus::unbounded)
            throw std::runtime_error("phase 1 objective is bounded by construction");
        double artificial_sum = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] >= static_cast<int>(first_artificial)) artificial_sum += b[i];
        if (artificial_sum > kPhase1Tol) {
            result.status = SolveStatus::infeasible;
            return result;
        }
        // Drive remaining zero-valued artificials out of the basis so they
        // cannot re-enter and distort phase 2; rows that cannot pivot are
        // redundant and are dropped.
        for (std::size_t i = 0; i < m;) {
            if (basis[i] < static_cast<int>(first_artificial)) {
                ++i;
                continue;
            }
            double rowscale = 0.0;
            for (std::size_t j = 0; j < ncols; ++j) rowscale = std::max(rowscale, std::abs(a[i][j]));
            std::size_t pivot_col = first_artificial;
            double pivot_mag = 0.0;
            for (std::size_t j = 0; j < first_artificial; ++j) {
                double mag = std::abs(a[i][j]);
                if (mag > 1e-11 * (1.0 + rowscale) && mag > pivot_mag) {
                    pivot_col = j;
                    pivot_mag = mag;
                }
            }
            if (pivot_col == first_artificial) {
                a.erase(a.begin() + static_cast<std::ptrdiff_t>(i));
                b.erase(b.begin() + static_cast<std::ptrdiff_t>(i));
                basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
                continue;
            }
            double piv = a[i][pivot_col];
            for (std::size_t j = 0; j < ncols; ++j) a[i][j] /= piv;
            a[i][pivot_col] = 1.0;
            b[i] /= piv;
            if (b[i] < 0.0) b[i] = 0.0;
            for (std::size_t r = 0; r < a.size(); ++r) {
                if (r == i) continue;
                double factor = a[r][pivot_col];
                if (factor == 0.0) continue;
                for (std::size_t j = 0; j < ncols; ++j) a[r][j] -= factor * a[i][j];
                a[r][pivot_col] = 0.0;
                b[r] -= factor * b[i];
                if (b[r] < 0.0) b[r] = 0.0;
            }
            basis[i] = static_cast<int>(pivot_col);
            ++i;
        }
        for (std::size_t j = first_artificial; j < ncols; ++j) blocked[j] = true;
    }

    // Phase 2: the real objective over the surviving rows.
    std::vector<double> phase2_cost(ncols, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
    SolveStatus st = detail::run_pivots(a, b, basis, phase2_cost, blocked);
    if (st != SolveStatus::optimal) {
        result.status = st;
        return result;
    }

    result.status = SolveStatus::optimal;
    result.x.assign(n, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (basis[i] >= 0 && basis[i] < static_cast<int>(n))
            result.x[static_cast<std::size_t>(basis[i])] = b[i];
    }
    result.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
    return result;
}

}  // namespace peerpred::lp
