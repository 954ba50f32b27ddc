#pragma once

// Independent reference implementations used only by the tests: fixed-grid
// quadrature, chain-ladder reserving, brute-force LP vertex enumeration,
// deterministic random generators, and a file checksum.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "runoff/lp.hpp"
#include "runoff/triangle.hpp"

namespace oracles {

// Composite-Simpson integral on a fixed grid (independent of the library's
// adaptive quadrature). n must be even.
inline double simpson_fixed(const std::function<double(double)>& f, double a, double b,
                            int n = 20000) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Weighted exp valuation of the level family [h*c - (1-h)*l, h*c + (1-h)*r],
// by brute-force quadrature.
inline double level_valuation_quadrature(double l, double c, double r) {
    return simpson_fixed(
        [&](double h) {
            return (std::exp(h * c - (1.0 - h) * l) + std::exp(h * c + (1.0 - h) * r)) * h;
        },
        0.0, 1.0);
}

// Standard weighted exp valuation of a triangular fuzzy number (l, c, r),
// by brute-force quadrature of both alpha-cut endpoints.
inline double tfn_exp_valuation_quadrature(double l, double c, double r) {
    return simpson_fixed(
        [&](double h) {
            const double lo = c - (c - l) * (1.0 - h);
            const double hi = c + (r - c) * (1.0 - h);
            return (std::exp(lo) + std::exp(hi)) * h;
        },
        0.0, 1.0);
}

// --- chain ladder -----------------------------------------------------------

struct ChainLadder {
    std::vector<double> per_origin; // reserve per origin year, index i-1
    double total = 0.0;
};

// Classical chain-ladder reserve from development factors on cumulative sums.
inline ChainLadder chain_ladder_reserve(const runoff::RunOffTriangle& t) {
    const int k = t.k();
    // cumulative observed triangle
    std::vector<std::vector<double>> cum(k);
    for (int i = 1; i <= k; ++i) {
        double acc = 0.0;
        for (int j = 1; i + j <= k + 1; ++j) {
            acc += t.amount(i, j);
            cum[i - 1].push_back(acc);
        }
    }
    // development factors f_j: sum over rows with both columns observed
    std::vector<double> f(k > 1 ? k - 1 : 0, 1.0);
    for (int j = 1; j <= k - 1; ++j) { // factor from column j to j+1
        double num = 0.0, den = 0.0;
        for (int i = 1; i + j <= k; ++i) { // rows observing column j+1
            num += cum[i - 1][j];
            den += cum[i - 1][j - 1];
        }
        f[j - 1] = num / den;
    }
    ChainLadder out;
    out.per_origin.assign(k, 0.0);
    for (int i = 1; i <= k; ++i) {
        const int last = k - i + 1; // last observed development year for origin i
        double ult = cum[i - 1][last - 1];
        for (int j = last; j <= k - 1; ++j) ult *= f[j - 1];
        out.per_origin[i - 1] = ult - cum[i - 1][last - 1];
        out.total += out.per_origin[i - 1];
    }
    return out;
}

// Random strictly positive triangle with multiplicative (log-additive)
// structure plus lognormal noise; suitable for chain-ladder comparisons.
inline runoff::RunOffTriangle random_triangle(int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> effect(-0.8, 0.8);
    std::normal_distribution<double> noise(0.0, 0.15);
    std::vector<double> a(k + 1, 0.0), b(k + 1, 0.0);
    for (int i = 2; i <= k; ++i) a[i] = effect(rng);
    for (int j = 2; j <= k; ++j) b[j] = effect(rng);
    std::map<runoff::Cell, double> cells;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; i + j <= k + 1; ++j)
            cells[runoff::Cell{i, j}] = std::exp(7.0 + a[i] + b[j] + noise(rng));
    return runoff::RunOffTriangle::from_cells(k, std::move(cells));
}

// --- LP vertex enumeration ---------------------------------------------------

// Exhaustive vertex enumeration for small LPs: treats finite bounds as extra
// half-planes, solves every n x n active set, keeps feasible points, and
// returns the best objective. Requires the LP to be feasible and bounded.
inline bool vertex_enumeration_min(const runoff::lp::LpProblem& p, double& best) {
    const int n = static_cast<int>(p.objective.size());
    struct Row {
        std::vector<double> a;
        double rhs;
    };
    std::vector<Row> pool; // all half-planes/equalities as rows a.x (=,<=,>=) rhs
    std::vector<int> kind; // 0 '=', 1 '<=', 2 '>='
    for (const auto& c : p.constraints) {
        pool.push_back({c.coeffs, c.rhs});
        kind.push_back(c.rel == runoff::lp::Relation::Equal ? 0
                       : c.rel == runoff::lp::Relation::LessEq ? 1 : 2);
    }
    auto bound = [&](int v) {
        std::vector<double> a(n, 0.0);
        a[v] = 1.0;
        return a;
    };
    for (int v = 0; v < n; ++v) {
        if (!p.lower.empty() && std::isfinite(p.lower[v])) {
            pool.push_back({bound(v), p.lower[v]});
            kind.push_back(2);
        }
        if (!p.upper.empty() && std::isfinite(p.upper[v])) {
            pool.push_back({bound(v), p.upper[v]});
            kind.push_back(1);
        }
    }
    const int m = static_cast<int>(pool.size());
    if (m < n) return false;

    auto feasible = [&](const Eigen::VectorXd& x) {
        for (int r = 0; r < m; ++r) {
            double dot = 0.0;
            for (int v = 0; v < n; ++v) dot += pool[r].a[v] * x[v];
            const double slack = dot - pool[r].rhs;
            if (kind[r] == 0 && std::abs(slack) > 1e-7) return false;
            if (kind[r] == 1 && slack > 1e-7) return false;
            if (kind[r] == 2 && slack < -1e-7) return false;
        }
        return true;
    };

    bool found = false;
    best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(n);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == n) {
            Eigen::MatrixXd A(n, n);
            Eigen::VectorXd b(n);
            for (int r = 0; r < n; ++r) {
                for (int v = 0; v < n; ++v) A(r, v) = pool[idx[r]].a[v];
                b[r] = pool[idx[r]].rhs;
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (!lu.isInvertible()) return;
            Eigen::VectorXd x = lu.solve(b);
            if (!feasible(x)) return;
            double obj = 0.0;
            for (int v = 0; v < n; ++v) obj += p.objective[v] * x[v];
            best = std::min(best, obj);
            found = true;
            return;
        }
        for (int r = start; r <= m - (n - depth); ++r) {
            idx[depth] = r;
            rec(r + 1, depth + 1);
        }
    };
    rec(0, 0);
    return found;
}

// Random feasible bounded LP with integer-ish data: box 0 <= x <= 10 plus up
// to 8 extra <=/>= rows built around an interior point, random objective.
inline runoff::lp::LpProblem random_lp(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto randint = [&](int lo, int hi) {
        return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    const int n = randint(2, 6);
    const int m = randint(2, 8);
    runoff::lp::LpProblem p;
    p.objective.resize(n);
    for (auto& c : p.objective) c = randint(-3, 3);
    p.lower.assign(n, 0.0);
    p.upper.assign(n, 10.0);
    std::vector<double> x0(n);
    for (auto& v : x0) v = randint(0, 3);
    for (int r = 0; r < m; ++r) {
        runoff::lp::Constraint c;
        c.coeffs.resize(n);
        double dot = 0.0;
        for (int v = 0; v < n; ++v) {
            c.coeffs[v] = randint(-4, 4);
            dot += c.coeffs[v] * x0[v];
        }
        const int slack = randint(0, 5);
        if (rng() % 2 == 0) {
            c.rel = runoff::lp::Relation::LessEq;
            c.rhs = dot + slack;
        } else {
            c.rel = runoff::lp::Relation::GreaterEq;
            c.rhs = dot - slack;
        }
        p.constraints.push_back(std::move(c));
    }
    return p;
}

// --- misc ---------------------------------------------------------------

inline std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ULL;
    char ch;
    while (in.get(ch)) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace oracles
