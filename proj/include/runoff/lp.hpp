#pragma once

// Dense two-phase simplex with Bland's rule, for the small linear programs
// generated by the fuzzy regression fits. Free variables are handled by
// splitting, finite bounds by shifting (plus an upper-bound row); the pivot
// rule is fully deterministic.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "runoff/errors.hpp"
#include "runoff/log.hpp"

namespace runoff::lp {

enum class Relation { LessEq, GreaterEq, Equal };

struct Constraint {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct LpProblem {
    std::vector<double> objective;    // minimize objective . x
    std::vector<Constraint> constraints;
    std::vector<double> lower;        // empty => every variable free below
    std::vector<double> upper;        // empty => every variable free above
    std::vector<std::string> names;   // optional, for diagnostics
};

struct LpSolution {
    Status status = Status::Optimal;
    std::vector<double> x;
    double objective_value = 0.0;
};

namespace detail {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-7;

struct Tableau {
    std::vector<std::vector<double>> rows; // m x (ncols + 1), rhs in last slot
    std::vector<double> obj;               // reduced costs + (-objective) in last slot
    std::vector<int> basis;                // basic column per row
    std::vector<char> alive;               // redundant rows get retired
    int ncols = 0;
    int first_artificial = 0;              // columns >= this are artificial

    void pivot(int r, int c) {
        auto& prow = rows[static_cast<std::size_t>(r)];
        const double piv = prow[static_cast<std::size_t>(c)];
        for (auto& v : prow) v /= piv;
        prow[static_cast<std::size_t>(c)] = 1.0; // exact
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<int>(i) == r || !alive[i]) continue;
            const double f = rows[i][static_cast<std::size_t>(c)];
            if (f == 0.0) continue;
            for (std::size_t s = 0; s < prow.size(); ++s) rows[i][s] -= f * prow[s];
            rows[i][static_cast<std::size_t>(c)] = 0.0;
        }
        const double fo = obj[static_cast<std::size_t>(c)];
        if (fo != 0.0) {
            for (std::size_t s = 0; s < prow.size(); ++s) obj[s] -= fo * prow[s];
            obj[static_cast<std::size_t>(c)] = 0.0;
        }
        basis[static_cast<std::size_t>(r)] = c;
    }

    // Bland's rule iteration until optimality (returns true) or unboundedness
    // (returns false). allow_artificial_entering is false in both phases: the
    // artificials start basic and may only leave.
    bool iterate(long max_iters) {
        int breakdowns = 0;
        for (long iter = 0; iter < max_iters; ++iter) {
            int entering = -1;
            for (int c = 0; c < first_artificial; ++c) {
                if (obj[static_cast<std::size_t>(c)] < -kReducedCostTol) {
                    entering = c;
                    break; // smallest index: Bland
                }
            }
            if (entering < 0) return true;

            int leave = -1;
            double best_ratio = 0.0;
            bool tiny_only = false;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (!alive[r]) continue;
                const double a = rows[r][static_cast<std::size_t>(entering)];
                if (a > kPivotTol) {
                    const double ratio = rows[r].back() / a;
                    if (leave < 0 || ratio < best_ratio - 1e-12 ||
                        (std::abs(ratio - best_ratio) <= 1e-12 &&
                         basis[r] < basis[static_cast<std::size_t>(leave)])) {
                        leave = static_cast<int>(r);
                        best_ratio = ratio;
                    }
                } else if (a > kPivotTol * 0.01) {
                    tiny_only = true;
                }
            }
            if (leave < 0) {
                if (tiny_only && ++breakdowns > 25)
                    throw NumericalBreakdown(
                        "simplex: only pivots below 1e-11 available, tableau has degraded");
                if (tiny_only) continue; // re-scan; reduced costs unchanged => same column,
                                         // so the counter above bounds this loop
                return false;            // genuinely unbounded direction
            }
            pivot(leave, entering);
        }
        throw NumericalBreakdown("simplex: iteration limit exceeded");
    }
};

} // namespace detail

inline LpSolution solve(const LpProblem& p) {
    using namespace detail;
    const int n = static_cast<int>(p.objective.size());
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& c : p.constraints)
        if (static_cast<int>(c.coeffs.size()) != n)
            throw Error("lp::solve: constraint width " + std::to_string(c.coeffs.size()) +
                        " does not match objective width " + std::to_string(n));
    if (!p.lower.empty() && static_cast<int>(p.lower.size()) != n)
        throw Error("lp::solve: lower bound vector has wrong length");
    if (!p.upper.empty() && static_cast<int>(p.upper.size()) != n)
        throw Error("lp::solve: upper bound vector has wrong length");

    auto lower_of = [&](int v) { return p.lower.empty() ? -inf : p.lower[static_cast<std::size_t>(v)]; };
    auto upper_of = [&](int v) { return p.upper.empty() ? inf : p.upper[static_cast<std::size_t>(v)]; };
    for (int v = 0; v < n; ++v)
        if (lower_of(v) > upper_of(v)) return LpSolution{Status::Infeasible, {}, 0.0};

    // Column mapping: shifted (x = lo + s), mirrored (x = up - s), or split
    // (x = s+ - s-) per variable; all tableau columns are then nonnegative.
    enum class Kind { Shifted, Mirrored, Split };
    struct VarMap {
        Kind kind;
        int col1, col2; // col2 used by Split
        double offset;  // lo for Shifted, up for Mirrored
    };
    std::vector<VarMap> vmap(static_cast<std::size_t>(n));
    int ncols = 0;
    for (int v = 0; v < n; ++v) {
        const double lo = lower_of(v), up = upper_of(v);
        if (std::isfinite(lo))
            vmap[static_cast<std::size_t>(v)] = {Kind::Shifted, ncols++, -1, lo};
        else if (std::isfinite(up))
            vmap[static_cast<std::size_t>(v)] = {Kind::Mirrored, ncols++, -1, up};
        else {
            vmap[static_cast<std::size_t>(v)] = {Kind::Split, ncols, ncols + 1, 0.0};
            ncols += 2;
        }
    }
    const int nstruct = ncols;

    // Assemble rows: user constraints plus upper-bound rows for doubly bounded
    // variables, each as (coeffs over structural columns, relation, rhs).
    struct Row {
        std::vector<double> a;
        Relation rel;
        double rhs;
    };
    std::vector<Row> rows;
    for (const auto& c : p.constraints) {
        Row row{std::vector<double>(static_cast<std::size_t>(nstruct), 0.0), c.rel, c.rhs};
        for (int v = 0; v < n; ++v) {
            const double coef = c.coeffs[static_cast<std::size_t>(v)];
            if (coef == 0.0) continue;
            const auto& m = vmap[static_cast<std::size_t>(v)];
            switch (m.kind) {
                case Kind::Shifted:
                    row.a[static_cast<std::size_t>(m.col1)] += coef;
                    row.rhs -= coef * m.offset;
                    break;
                case Kind::Mirrored:
                    row.a[static_cast<std::size_t>(m.col1)] -= coef;
                    row.rhs -= coef * m.offset;
                    break;
                case Kind::Split:
                    row.a[static_cast<std::size_t>(m.col1)] += coef;
                    row.a[static_cast<std::size_t>(m.col2)] -= coef;
                    break;
            }
        }
        rows.push_back(std::move(row));
    }
    for (int v = 0; v < n; ++v) {
        const double lo = lower_of(v), up = upper_of(v);
        if (std::isfinite(lo) && std::isfinite(up)) {
            Row row{std::vector<double>(static_cast<std::size_t>(nstruct), 0.0), Relation::LessEq,
                    up - lo};
            row.a[static_cast<std::size_t>(vmap[static_cast<std::size_t>(v)].col1)] = 1.0;
            rows.push_back(std::move(row));
        }
    }

    const int m = static_cast<int>(rows.size());
    // Standard form: append slack/surplus, normalize rhs >= 0, then identity
    // columns come from +1 slacks; the rest take artificials.
    int nslack = 0;
    for (const auto& r : rows)
        if (r.rel != Relation::Equal) ++nslack;

    Tableau t;
    t.ncols = nstruct + nslack; // artificials appended below
    std::vector<int> slack_col(static_cast<std::size_t>(m), -1);
    std::vector<double> slack_sign(static_cast<std::size_t>(m), 0.0);
    {
        int next = nstruct;
        for (int r = 0; r < m; ++r) {
            if (rows[static_cast<std::size_t>(r)].rel == Relation::Equal) continue;
            slack_col[static_cast<std::size_t>(r)] = next++;
            slack_sign[static_cast<std::size_t>(r)] =
                rows[static_cast<std::size_t>(r)].rel == Relation::LessEq ? 1.0 : -1.0;
        }
    }
    std::vector<int> art_rows;
    for (int r = 0; r < m; ++r) {
        const double sign = rows[static_cast<std::size_t>(r)].rhs < 0.0 ? -1.0 : 1.0;
        const double eff_slack = slack_sign[static_cast<std::size_t>(r)] * sign;
        if (eff_slack != 1.0) art_rows.push_back(r); // equality or negated/surplus row
    }
    const int nart = static_cast<int>(art_rows.size());
    const int total = nstruct + nslack + nart;
    t.first_artificial = nstruct + nslack;

    t.rows.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    t.basis.assign(static_cast<std::size_t>(m), -1);
    t.alive.assign(static_cast<std::size_t>(m), 1);
    {
        int next_art = t.first_artificial;
        for (int r = 0; r < m; ++r) {
            auto& trow = t.rows[static_cast<std::size_t>(r)];
            const auto& row = rows[static_cast<std::size_t>(r)];
            const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
            for (int c = 0; c < nstruct; ++c) trow[static_cast<std::size_t>(c)] = sign * row.a[static_cast<std::size_t>(c)];
            if (slack_col[static_cast<std::size_t>(r)] >= 0)
                trow[static_cast<std::size_t>(slack_col[static_cast<std::size_t>(r)])] =
                    sign * slack_sign[static_cast<std::size_t>(r)];
            trow.back() = sign * row.rhs;
            const double eff_slack = slack_sign[static_cast<std::size_t>(r)] * sign;
            if (eff_slack == 1.0) {
                t.basis[static_cast<std::size_t>(r)] = slack_col[static_cast<std::size_t>(r)];
            } else {
                trow[static_cast<std::size_t>(next_art)] = 1.0;
                t.basis[static_cast<std::size_t>(r)] = next_art++;
            }
        }
    }

    const long max_iters = 50000L + 500L * (m + total);

    // Phase 1: minimize the artificial sum.
    if (nart > 0) {
        t.obj.assign(static_cast<std::size_t>(total) + 1, 0.0);
        for (int c = t.first_artificial; c < total; ++c) t.obj[static_cast<std::size_t>(c)] = 1.0;
        for (int r = 0; r < m; ++r)
            if (t.basis[static_cast<std::size_t>(r)] >= t.first_artificial)
                for (std::size_t s = 0; s <= static_cast<std::size_t>(total); ++s)
                    t.obj[s] -= t.rows[static_cast<std::size_t>(r)][s];
        if (!t.iterate(max_iters))
            throw NumericalBreakdown("simplex: phase 1 reported an unbounded direction");
        const double art_value = -t.obj.back();
        if (art_value > kFeasTol) {
            log_debug("lp: infeasible, artificial residual " + std::to_string(art_value));
            return LpSolution{Status::Infeasible, {}, 0.0};
        }
        // Drive remaining artificials out of the basis or retire their rows.
        for (int r = 0; r < m; ++r) {
            if (!t.alive[static_cast<std::size_t>(r)]) continue;
            if (t.basis[static_cast<std::size_t>(r)] < t.first_artificial) continue;
            // The artificial sits at its (<= kFeasTol) residual; snap it to zero
            // so the pivot below preserves feasibility regardless of entry sign.
            t.rows[static_cast<std::size_t>(r)].back() = 0.0;
            int col = -1;
            for (int c = 0; c < t.first_artificial; ++c)
                if (std::abs(t.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) > 1e-9) {
                    col = c;
                    break;
                }
            if (col >= 0)
                t.pivot(r, col); // rhs is 0 here, so feasibility is preserved
            else
                t.alive[static_cast<std::size_t>(r)] = 0; // redundant constraint
        }
    }

    // Phase 2: original objective over structural columns.
    t.obj.assign(static_cast<std::size_t>(total) + 1, 0.0);
    for (int v = 0; v < n; ++v) {
        const double cv = p.objective[static_cast<std::size_t>(v)];
        if (cv == 0.0) continue;
        const auto& mp = vmap[static_cast<std::size_t>(v)];
        switch (mp.kind) {
            case Kind::Shifted:
                t.obj[static_cast<std::size_t>(mp.col1)] += cv;
                break;
            case Kind::Mirrored:
                t.obj[static_cast<std::size_t>(mp.col1)] -= cv;
                break;
            case Kind::Split:
                t.obj[static_cast<std::size_t>(mp.col1)] += cv;
                t.obj[static_cast<std::size_t>(mp.col2)] -= cv;
                break;
        }
    }
    for (int r = 0; r < m; ++r) {
        if (!t.alive[static_cast<std::size_t>(r)]) continue;
        const int b = t.basis[static_cast<std::size_t>(r)];
        const double cb = b <= -1 ? 0.0 : t.obj[static_cast<std::size_t>(b)];
        if (cb == 0.0) continue;
        for (std::size_t s = 0; s <= static_cast<std::size_t>(total); ++s)
            t.obj[s] -= cb * t.rows[static_cast<std::size_t>(r)][s];
    }
    const bool optimal = t.iterate(max_iters);
    if (!optimal) return LpSolution{Status::Unbounded, {}, 0.0};

    // Recover the original variables.
    std::vector<double> xs(static_cast<std::size_t>(total), 0.0);
    for (int r = 0; r < m; ++r)
        if (t.alive[static_cast<std::size_t>(r)] && t.basis[static_cast<std::size_t>(r)] >= 0)
            xs[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(r)])] =
                t.rows[static_cast<std::size_t>(r)].back();
    LpSolution sol;
    sol.status = Status::Optimal;
    sol.x.assign(static_cast<std::size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
        const auto& mp = vmap[static_cast<std::size_t>(v)];
        switch (mp.kind) {
            case Kind::Shifted:
                sol.x[static_cast<std::size_t>(v)] = mp.offset + xs[static_cast<std::size_t>(mp.col1)];
                break;
            case Kind::Mirrored:
                sol.x[static_cast<std::size_t>(v)] = mp.offset - xs[static_cast<std::size_t>(mp.col1)];
                break;
            case Kind::Split:
                sol.x[static_cast<std::size_t>(v)] =
                    xs[static_cast<std::size_t>(mp.col1)] - xs[static_cast<std::size_t>(mp.col2)];
                break;
        }
        sol.objective_value += p.objective[static_cast<std::size_t>(v)] * sol.x[static_cast<std::size_t>(v)];
    }

    // Defensive feasibility recheck; a violation means the tableau degraded.
    for (const auto& c : p.constraints) {
        double dot = 0.0;
        for (int v = 0; v < n; ++v) dot += c.coeffs[static_cast<std::size_t>(v)] * sol.x[static_cast<std::size_t>(v)];
        const double slack = dot - c.rhs;
        const bool ok = (c.rel == Relation::Equal && std::abs(slack) <= kFeasTol) ||
                        (c.rel == Relation::LessEq && slack <= kFeasTol) ||
                        (c.rel == Relation::GreaterEq && slack >= -kFeasTol);
        if (!ok)
            throw NumericalBreakdown("simplex: optimal vertex fails feasibility recheck by " +
                                     std::to_string(std::abs(slack)));
    }
    for (int v = 0; v < n; ++v) {
        if (sol.x[static_cast<std::size_t>(v)] < lower_of(v) - kFeasTol ||
            sol.x[static_cast<std::size_t>(v)] > upper_of(v) + kFeasTol)
            throw NumericalBreakdown("simplex: optimal vertex violates variable bounds");
    }
    log_debug("lp: optimal, " + std::to_string(m) + " rows, " + std::to_string(total) +
              " columns, objective " + std::to_string(sol.objective_value));
    return sol;
}

} // namespace runoff::lp
