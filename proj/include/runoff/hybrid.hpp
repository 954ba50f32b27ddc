#pragma once

// Hybrid fuzzy log-Poisson reserving: asymmetric triangular fuzzy coefficients
// around GLM centers. The general ATFC regression (fit_flr_atfc) covers
// arbitrary crisp designs; the reserving pipeline (fit_hybrid) follows the
// four-step scheme: GLM centers, spread LP at h = 0, optimal inclusion level
// h*, and a single re-solve at h*.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "runoff/errors.hpp"
#include "runoff/fuzzy.hpp"
#include "runoff/glm.hpp"
#include "runoff/log.hpp"
#include "runoff/lp.hpp"
#include "runoff/triangle.hpp"

namespace runoff {

struct FuzzyModel {
    int k = 0;
    Tfn tau;
    std::vector<Tfn> alpha; // alpha_2..alpha_k
    std::vector<Tfn> beta;  // beta_2..beta_k
    double h_star = 0.0;
    double lp_objective = 0.0; // total spread at the solved level
    double psi = 1.0;          // dispersion of the center model (step 1)

    Tfn alpha_at(int i) const { return i == 1 ? tfn_crisp(0.0) : alpha[static_cast<std::size_t>(i - 2)]; }
    Tfn beta_at(int j) const { return j == 1 ? tfn_crisp(0.0) : beta[static_cast<std::size_t>(j - 2)]; }
};

struct HQuantities {
    std::vector<double> s;  // per-observation distance ratios
    std::vector<double> cr; // per-observation credibilities
    std::vector<double> p;  // per-observation credibility-change rates
    double cr_total = 0.0;
    double p_total = 0.0;
};

namespace detail {

// Observations whose fuzzy prediction is this narrow carry no fuzziness
// information and are excluded from the credibility sums.
constexpr double kWidthTol = 1e-12;

struct SpreadFit {
    std::vector<Tfn> coeffs;
    double objective = 0.0;
};

// Aggregates of a fuzzy linear predictor at one observation, sign-split over
// the design entries: left/right endpoint values and the center.
struct Aggregates {
    double left = 0.0, center = 0.0, right = 0.0;
};

inline Aggregates aggregate_row(const std::vector<double>& x, const std::vector<Tfn>& coeffs) {
    Aggregates a;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        const double w = x[j];
        a.center += w * coeffs[j].center;
        if (w >= 0.0) {
            a.left += w * coeffs[j].left;
            a.right += w * coeffs[j].right;
        } else {
            a.left += w * coeffs[j].right;
            a.right += w * coeffs[j].left;
        }
    }
    return a;
}

} // namespace detail

// Ishibuchi-style asymmetric triangular fuzzy-coefficient regression around
// previously estimated centers: minimizes the summed support width of the
// fuzzy outputs subject to every observation lying inside its h-level
//   h*f^c(X_i) + (1-h)*f^L(X_i) <= Y_i <= h*f^c(X_i) + (1-h)*f^R(X_i),
// with endpoint deviations d^L_j, d^R_j >= 0 per coefficient.
inline std::vector<Tfn> fit_flr_atfc(const std::vector<std::vector<double>>& X,
                                     const std::vector<double>& Y,
                                     const std::vector<double>& centers, double h) {
    if (!(h >= 0.0 && h < 1.0))
        throw HOutOfRange("fit_flr_atfc requires 0 <= h < 1, got " + std::to_string(h));
    const std::size_t N = X.size();
    const std::size_t P = centers.size();
    if (N == 0 || Y.size() != N)
        throw LengthMismatch("fit_flr_atfc: design and response sizes disagree");
    for (const auto& row : X)
        if (row.size() != P)
            throw LengthMismatch("fit_flr_atfc: design row width does not match centers");

    lp::LpProblem prob;
    prob.objective.assign(2 * P, 0.0); // d^L_0..P-1 then d^R_0..P-1
    prob.lower.assign(2 * P, 0.0);
    prob.upper.assign(2 * P, std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t j = 0; j < P; ++j) {
            prob.objective[j] += std::abs(X[r][j]);
            prob.objective[P + j] += std::abs(X[r][j]);
        }
    for (std::size_t r = 0; r < N; ++r) {
        double fc = 0.0;
        for (std::size_t j = 0; j < P; ++j) fc += X[r][j] * centers[j];
        // lower containment: (1-h) * sum |x| d^(side) >= fc - Y
        lp::Constraint lo{std::vector<double>(2 * P, 0.0), lp::Relation::GreaterEq, fc - Y[r]};
        // upper containment: (1-h) * sum |x| d^(other side) >= Y - fc
        lp::Constraint hi{std::vector<double>(2 * P, 0.0), lp::Relation::GreaterEq, Y[r] - fc};
        for (std::size_t j = 0; j < P; ++j) {
            const double w = (1.0 - h) * std::abs(X[r][j]);
            if (X[r][j] >= 0.0) {
                lo.coeffs[j] = w;
                hi.coeffs[P + j] = w;
            } else {
                lo.coeffs[P + j] = w;
                hi.coeffs[j] = w;
            }
        }
        prob.constraints.push_back(std::move(lo));
        prob.constraints.push_back(std::move(hi));
    }
    const auto sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal)
        throw LpInfeasible("fit_flr_atfc: spread program is not solvable (status " +
                           std::to_string(static_cast<int>(sol.status)) + ")");
    std::vector<Tfn> out;
    out.reserve(P);
    for (std::size_t j = 0; j < P; ++j)
        out.push_back(Tfn{centers[j] - sol.x[j], centers[j], centers[j] + sol.x[P + j]});
    return out;
}

// Per-observation fuzziness diagnostics of an h = 0 fit, evaluated on the
// endpoint-value aggregates: S_i compares the observation's deviation from
// the center against the matching endpoint aggregate, Cr_i = 2(1 - S_i) /
// sum_j (left_j + right_j)|x_ij|, and p_i = S_i / (half total width).
inline HQuantities compute_h_quantities(const std::vector<std::vector<double>>& X,
                                        const std::vector<double>& Y,
                                        const std::vector<double>& centers,
                                        const std::vector<Tfn>& spreads_at_h0) {
    const std::size_t N = X.size();
    const std::size_t P = centers.size();
    if (Y.size() != N || spreads_at_h0.size() != P)
        throw LengthMismatch("compute_h_quantities: input sizes disagree");
    HQuantities q;
    q.s.assign(N, 0.0);
    q.cr.assign(N, 0.0);
    q.p.assign(N, 0.0);
    for (std::size_t r = 0; r < N; ++r) {
        if (X[r].size() != P) throw LengthMismatch("compute_h_quantities: ragged design row");
        const auto agg = detail::aggregate_row(X[r], spreads_at_h0);
        const double width = agg.right - agg.left;
        if (width < detail::kWidthTol) continue; // exact-fit cell: no fuzziness information
        double crden = 0.0;
        for (std::size_t j = 0; j < P; ++j)
            crden += (spreads_at_h0[j].left + spreads_at_h0[j].right) * std::abs(X[r][j]);
        if (std::abs(crden) < detail::kWidthTol)
            throw ZeroSpread("credibility undefined at observation " + std::to_string(r) +
                             ": endpoint-value aggregate vanishes");
        const double den = Y[r] <= agg.center ? agg.left : agg.right;
        if (std::abs(den) < detail::kWidthTol)
            throw ZeroSpread("distance ratio undefined at observation " + std::to_string(r) +
                             ": matching endpoint aggregate vanishes");
        const double s = std::abs(Y[r] - agg.center) / den;
        q.s[r] = s;
        q.cr[r] = 2.0 * (1.0 - s) / crden;
        q.p[r] = s / (0.5 * width);
        q.cr_total += q.cr[r];
        q.p_total += q.p[r];
    }
    return q;
}

// Optimal inclusion level h* = (1 - Cr0/p0) / 2, clamped to [0, 1/2] and set
// to 0 when the credibility already dominates (Cr0/p0 > 1).
inline double compute_h_star(const std::vector<std::vector<double>>& X,
                             const std::vector<double>& Y,
                             const std::vector<double>& centers,
                             const std::vector<Tfn>& spreads_at_h0) {
    const HQuantities q = compute_h_quantities(X, Y, centers, spreads_at_h0);
    if (q.p_total <= 0.0)
        throw DegenerateP("h* undefined: every observation sits exactly at its center");
    const double ratio = q.cr_total / q.p_total;
    if (ratio > 1.0) return 0.0;
    return std::clamp(0.5 * (1.0 - ratio), 0.0, 0.5);
}

namespace detail {

// The reserving pipeline's spread program: per-coefficient endpoint
// deviations d^L_j, d^R_j >= 0 around the GLM centers, constrained on the
// observed cells that precede the latest diagonal (i + j <= k). The level
// interval of the fuzzy log-mean is read as
//   [h*nu^c - (1-h)*nu^L, h*nu^c + (1-h)*nu^R]
// over the endpoint-value aggregates nu^L, nu^R, which makes the lower
// constraints slack at h = 0 and reproduces the left = center fits.
inline SpreadFit solve_spread_lp(const RunOffTriangle& t, const std::vector<double>& centers,
                                 double h) {
    const int k = t.k();
    const int p = n_params(k);
    CellSet cells;
    for (const auto& cell : observed_cells(t))
        if (cell.i + cell.j <= k) cells.push_back(cell);

    SpreadFit out;
    if (cells.empty()) {
        for (int c = 0; c < p; ++c) out.coeffs.push_back(tfn_crisp(centers[static_cast<std::size_t>(c)]));
        return out;
    }

    lp::LpProblem prob;
    prob.objective.assign(static_cast<std::size_t>(2 * p), 0.0);
    prob.lower.assign(static_cast<std::size_t>(2 * p), 0.0);
    prob.upper.assign(static_cast<std::size_t>(2 * p), std::numeric_limits<double>::infinity());
    for (const auto& cell : cells) {
        double nu_c = 0.0;
        for (int c : design_columns(cell, k)) nu_c += centers[static_cast<std::size_t>(c)];
        const double lny = std::log(t.amount(cell.i, cell.j));
        lp::Constraint lo{std::vector<double>(static_cast<std::size_t>(2 * p), 0.0),
                          lp::Relation::LessEq, (lny - (2.0 * h - 1.0) * nu_c) / (1.0 - h)};
        lp::Constraint hi{std::vector<double>(static_cast<std::size_t>(2 * p), 0.0),
                          lp::Relation::GreaterEq, (lny - nu_c) / (1.0 - h)};
        for (int c : design_columns(cell, k)) {
            lo.coeffs[static_cast<std::size_t>(c)] = 1.0;          // d^L_c
            hi.coeffs[static_cast<std::size_t>(p + c)] = 1.0;      // d^R_c
            prob.objective[static_cast<std::size_t>(c)] += 1.0;
            prob.objective[static_cast<std::size_t>(p + c)] += 1.0;
        }
        prob.constraints.push_back(std::move(lo));
        prob.constraints.push_back(std::move(hi));
    }
    const auto sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal)
        throw LpInfeasible("spread program unsolvable at h = " + std::to_string(h));
    out.objective = sol.objective_value;
    out.coeffs.reserve(static_cast<std::size_t>(p));
    for (int c = 0; c < p; ++c)
        out.coeffs.push_back(Tfn{centers[static_cast<std::size_t>(c)] - sol.x[static_cast<std::size_t>(c)],
                                 centers[static_cast<std::size_t>(c)],
                                 centers[static_cast<std::size_t>(c)] + sol.x[static_cast<std::size_t>(p + c)]});
    return out;
}

inline std::vector<std::vector<double>> indicator_rows(const CellSet& cells, int k) {
    std::vector<std::vector<double>> X(cells.size(),
                                       std::vector<double>(static_cast<std::size_t>(n_params(k)), 0.0));
    for (std::size_t r = 0; r < cells.size(); ++r)
        for (int c : design_columns(cells[r], k)) X[r][static_cast<std::size_t>(c)] = 1.0;
    return X;
}

} // namespace detail

// Full pipeline: GLM centers, h = 0 spread program, h*, re-solve at h*.
inline FuzzyModel fit_hybrid(const RunOffTriangle& t) {
    const GlmFit g = fit_poisson(t);
    const int k = t.k();
    const int p = detail::n_params(k);
    std::vector<double> centers(static_cast<std::size_t>(p));
    centers[0] = g.tau;
    for (int i = 2; i <= k; ++i) centers[static_cast<std::size_t>(i - 1)] = g.alpha_at(i);
    for (int j = 2; j <= k; ++j) centers[static_cast<std::size_t>(k + j - 2)] = g.beta_at(j);

    auto assemble = [&](const std::vector<Tfn>& coeffs, double h_star, double objective) {
        FuzzyModel m;
        m.k = k;
        m.psi = g.psi;
        m.h_star = h_star;
        m.lp_objective = objective;
        m.tau = coeffs[0];
        m.alpha.assign(coeffs.begin() + 1, coeffs.begin() + k);
        m.beta.assign(coeffs.begin() + k, coeffs.end());
        return m;
    };

    const auto base = detail::solve_spread_lp(t, centers, 0.0);
    if (base.objective <= 1e-12) {
        log_info("hybrid: spread program already tight at h = 0");
        return assemble(base.coeffs, 0.0, base.objective);
    }

    CellSet cells;
    for (const auto& cell : observed_cells(t))
        if (cell.i + cell.j <= k) cells.push_back(cell);
    const auto X = detail::indicator_rows(cells, k);
    std::vector<double> lny(cells.size());
    for (std::size_t r = 0; r < cells.size(); ++r)
        lny[r] = std::log(t.amount(cells[r].i, cells[r].j));
    const double h_star = compute_h_star(X, lny, centers, base.coeffs);
    log_info("hybrid: h* = " + std::to_string(h_star));

    const auto final_fit = h_star > 0.0 ? detail::solve_spread_lp(t, centers, h_star) : base;

    // Containment recheck at the solved level (the LP's feasibility restated).
    for (std::size_t r = 0; r < cells.size(); ++r) {
        const auto agg = detail::aggregate_row(X[r], final_fit.coeffs);
        const double lo = h_star * agg.center - (1.0 - h_star) * agg.left;
        const double hi = h_star * agg.center + (1.0 - h_star) * agg.right;
        if (lo > lny[r] + 1e-7 || hi < lny[r] - 1e-7)
            throw NumericalBreakdown("hybrid: fitted intervals fail to contain observation " +
                                     std::to_string(r));
    }
    return assemble(final_fit.coeffs, h_star, final_fit.objective);
}

// Fuzzy log-mean of cell (i,j): tau + alpha_i + beta_j with crisp reference
// levels alpha_1 = beta_1 = 0.
inline Tfn predict_fuzzy(const FuzzyModel& m, int i, int j) {
    if (i < 1 || i > m.k || j < 1 || j > m.k)
        throw IndexOutOfRange("predict_fuzzy: (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside 1.." + std::to_string(m.k));
    return linear_combination({m.tau, m.alpha_at(i), m.beta_at(j)}, {1.0, 1.0, 1.0});
}

// Crisp value of a fuzzy log-mean under the pipeline's level-weighted
// valuation: exp is integrated over the level family
//   [h*center - (1-h)*left,  h*center + (1-h)*right]
// with weight h. The left value enters subtractively, so this matches the
// spread program's containment reading (and the reference tables computed
// from it); it coincides with defuzzify_exp_closed only when the left
// endpoint is the negated left value.
inline double exp_level_valuation(const Tfn& v) {
    return exp_weight_integral(-v.left, v.center + v.left) +
           exp_weight_integral(v.right, v.center - v.right);
}

inline double predict_crisp(const FuzzyModel& m, int i, int j) {
    return exp_level_valuation(predict_fuzzy(m, i, j));
}

// Reserve per origin year: defuzzified future cells, summed by row.
inline OriginReserves hybrid_reserve(const FuzzyModel& m, const RunOffTriangle& t) {
    OriginReserves out;
    out.per_origin.assign(static_cast<std::size_t>(t.k()), 0.0);
    for (const auto& cell : future_cells(t)) {
        const double v = predict_crisp(m, cell.i, cell.j);
        out.per_origin[static_cast<std::size_t>(cell.i - 1)] += v;
        out.total += v;
    }
    return out;
}

} // namespace runoff
