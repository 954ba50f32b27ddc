#pragma once

// Classical log-Poisson (quasi-Poisson) regression on run-off triangles:
// IRLS fitting with dummy coding (reference levels alpha_1 = beta_1 = 0),
// Pearson dispersion, the Cameron-Trivedi overdispersion test, prediction,
// and reserves.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "runoff/errors.hpp"
#include "runoff/log.hpp"
#include "runoff/triangle.hpp"

namespace runoff {

struct GlmFit {
    int k = 0;
    double tau = 0.0;
    std::vector<double> alpha; // origin effects alpha_2..alpha_k
    std::vector<double> beta;  // development effects beta_2..beta_k
    double psi = 1.0;          // Pearson dispersion (1.0 when saturated)
    std::map<Cell, double> fitted;
    bool converged = false;
    int iterations = 0;

    double alpha_at(int i) const { return i == 1 ? 0.0 : alpha[static_cast<std::size_t>(i - 2)]; }
    double beta_at(int j) const { return j == 1 ? 0.0 : beta[static_cast<std::size_t>(j - 2)]; }
};

struct DispersionTest {
    double z = 0.0;
    double p_value = 1.0;
};

struct OriginReserves {
    std::vector<double> per_origin; // index i-1
    double total = 0.0;
};

namespace detail {

// Design row layout shared by the classical and hybrid fits:
// column 0 = intercept, columns 1..k-1 = alpha_2..alpha_k indicators,
// columns k..2k-2 = beta_2..beta_k indicators.
inline int n_params(int k) { return 2 * k - 1; }

inline std::vector<int> design_columns(const Cell& cell, int k) {
    std::vector<int> cols{0};
    if (cell.i >= 2) cols.push_back(cell.i - 1);
    if (cell.j >= 2) cols.push_back(k + cell.j - 2);
    return cols;
}

inline Eigen::MatrixXd build_design(const CellSet& cells, int k) {
    const int p = n_params(k);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cells.size()), p);
    for (std::size_t r = 0; r < cells.size(); ++r)
        for (int c : design_columns(cells[r], k)) X(static_cast<Eigen::Index>(r), c) = 1.0;
    return X;
}

// Transient etas are clamped so a wild IRLS step cannot overflow exp(); the
// cap is far outside any realistic log-payment scale.
constexpr double kEtaCap = 30.0;

inline Eigen::VectorXd clamped_exp(const Eigen::VectorXd& eta) {
    return eta.unaryExpr([](double e) { return std::exp(std::clamp(e, -kEtaCap, kEtaCap)); });
}

} // namespace detail

// Maximum-likelihood log-Poisson fit via iteratively reweighted least squares.
// Converged when the largest absolute coefficient change drops below 1e-10
// (cap 100 iterations; non-convergence is reported through the flag).
inline GlmFit fit_poisson(const RunOffTriangle& t) {
    const int k = t.k();
    const auto cells = observed_cells(t);
    const int n = static_cast<int>(cells.size());
    const int p = detail::n_params(k);
    const Eigen::MatrixXd X = detail::build_design(cells, k);
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) y[r] = t.amount(cells[static_cast<std::size_t>(r)].i, cells[static_cast<std::size_t>(r)].j);

    // Start from the saturated predictor; all responses are strictly positive.
    Eigen::VectorXd eta = y.array().log().matrix();
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
    bool have_theta = false;
    bool converged = false;
    int iterations = 0;
    for (int it = 0; it < 100; ++it) {
        iterations = it + 1;
        const Eigen::VectorXd mu = detail::clamped_exp(eta);
        const Eigen::VectorXd w = mu.array().sqrt().matrix(); // sqrt weights
        const Eigen::VectorXd z = eta + ((y - mu).array() / mu.array()).matrix();
        const Eigen::MatrixXd Xw = w.asDiagonal() * X;
        const Eigen::VectorXd zw = w.asDiagonal() * z;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
        if (qr.rank() < p)
            throw SingularDesign("normal equations are rank deficient: rank " +
                                 std::to_string(qr.rank()) + " < " + std::to_string(p));
        const Eigen::VectorXd next = qr.solve(zw);
        if (!next.allFinite())
            throw SingularDesign("IRLS produced non-finite coefficients");
        const double delta = have_theta ? (next - theta).cwiseAbs().maxCoeff()
                                        : std::numeric_limits<double>::infinity();
        theta = next;
        have_theta = true;
        eta = X * theta;
        if (delta < 1e-10) {
            converged = true;
            break;
        }
    }

    GlmFit fit;
    fit.k = k;
    fit.tau = theta[0];
    fit.alpha.assign(theta.data() + 1, theta.data() + k);
    fit.beta.assign(theta.data() + k, theta.data() + p);
    fit.converged = converged;
    fit.iterations = iterations;
    const Eigen::VectorXd mu = detail::clamped_exp(X * theta);
    for (int r = 0; r < n; ++r) fit.fitted[cells[static_cast<std::size_t>(r)]] = mu[r];

    const int dof = n - p;
    if (dof > 0) {
        double pearson = 0.0;
        for (int r = 0; r < n; ++r) pearson += (y[r] - mu[r]) * (y[r] - mu[r]) / mu[r];
        fit.psi = pearson / dof;
    } else {
        fit.psi = 1.0; // saturated model: dispersion is not identifiable
    }
    log_info("glm: fit in " + std::to_string(iterations) + " iterations, psi " +
             std::to_string(fit.psi));
    return fit;
}

inline double predict_cell(const GlmFit& fit, int i, int j) {
    if (i < 1 || i > fit.k || j < 1 || j > fit.k)
        throw IndexOutOfRange("predict_cell: (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside 1.." + std::to_string(fit.k));
    return std::exp(fit.tau + fit.alpha_at(i) + fit.beta_at(j));
}

// Pearson dispersion estimate sum((Y-mu)^2/mu) / (n - (2k-1)).
inline double estimate_dispersion(const GlmFit& fit, const RunOffTriangle& t) {
    const int n = static_cast<int>(fit.fitted.size());
    const int dof = n - detail::n_params(t.k());
    if (dof <= 0)
        throw ZeroDegreesOfFreedom("dispersion undefined: " + std::to_string(n) +
                                   " observations, " + std::to_string(detail::n_params(t.k())) +
                                   " parameters");
    double pearson = 0.0;
    for (const auto& [cell, mu] : fit.fitted) {
        const double y = t.amount(cell.i, cell.j);
        pearson += (y - mu) * (y - mu) / mu;
    }
    return pearson / dof;
}

// Cameron-Trivedi auxiliary regression: g = ((Y-mu)^2 - Y)/mu on an intercept;
// z is the coefficient over its standard error, p the upper-tail normal
// probability (H0: psi = 1 against psi > 1).
inline DispersionTest overdispersion_test(const GlmFit& fit, const RunOffTriangle& t) {
    const int n = static_cast<int>(fit.fitted.size());
    if (n - detail::n_params(t.k()) <= 0)
        throw ZeroDegreesOfFreedom("overdispersion test needs positive degrees of freedom");
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n));
    for (const auto& [cell, mu] : fit.fitted) {
        const double y = t.amount(cell.i, cell.j);
        g.push_back(((y - mu) * (y - mu) - y) / mu);
    }
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : g) var += (v - mean) * (v - mean);
    var /= (n - 1);
    DispersionTest out;
    if (var == 0.0) {
        out.z = mean > 0.0 ? std::numeric_limits<double>::infinity()
                           : (mean < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
    } else {
        out.z = mean / std::sqrt(var / n);
    }
    out.p_value = 0.5 * std::erfc(out.z / std::sqrt(2.0));
    return out;
}

// Reserve per origin year: the sum of predicted future cells in that row.
inline OriginReserves reserve(const GlmFit& fit, const RunOffTriangle& t) {
    OriginReserves out;
    out.per_origin.assign(static_cast<std::size_t>(t.k()), 0.0);
    for (const auto& cell : future_cells(t)) {
        const double v = predict_cell(fit, cell.i, cell.j);
        out.per_origin[static_cast<std::size_t>(cell.i - 1)] += v;
        out.total += v;
    }
    return out;
}

} // namespace runoff
