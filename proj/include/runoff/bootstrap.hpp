#pragma once

// Residual bootstrap for reserve variability. Observed cells are resampled
// through adjusted Pearson residuals, the chosen model is refitted on each
// pseudo-triangle, and the spread of the refitted total reserves yields the
// estimation error; the process error enters through the dispersion of the
// center model.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "runoff/errors.hpp"
#include "runoff/glm.hpp"
#include "runoff/hybrid.hpp"
#include "runoff/triangle.hpp"

namespace runoff {

enum class Model { Classical, Hybrid };

struct BootstrapConfig {
    int replications = 1000;
    std::uint64_t seed = 0;
    Model model = Model::Classical;
    int threads = 1;
};

struct BootstrapResult {
    OriginReserves reserves; // point estimates of the base fit
    double ep = 0.0;         // prediction (process + estimation) error of the total
    double sd = 0.0;         // bootstrap standard deviation of the total
    double mse = 0.0;        // root mean squared deviation from the base total
    double psi_used = 1.0;   // dispersion feeding the process-error term
    int failures = 0;        // replications discarded for failed refits
};

// Adjusted Pearson residuals (y - mu)/sqrt(mu) * sqrt(n/(n - p)).
inline std::vector<double> pearson_residuals(const std::vector<double>& y,
                                             const std::vector<double>& mu, int n_params) {
    if (y.size() != mu.size())
        throw LengthMismatch("pearson_residuals: observed and fitted sizes disagree");
    const int n = static_cast<int>(y.size());
    if (n <= n_params)
        throw ZeroDegreesOfFreedom("pearson_residuals: " + std::to_string(n) +
                                   " observations for " + std::to_string(n_params) + " parameters");
    const double adj = std::sqrt(static_cast<double>(n) / (n - n_params));
    std::vector<double> r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(mu[i] > 0.0))
            throw NonPositiveFitted("pearson_residuals: fitted value " + std::to_string(mu[i]) +
                                    " at observation " + std::to_string(i));
        r[i] = adj * (y[i] - mu[i]) / std::sqrt(mu[i]);
    }
    return r;
}

namespace detail {

// splitmix64-style mix of (seed, replication) into an independent substream
// seed, so results are identical for any thread partition.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t rep) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (rep + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

inline BootstrapResult bootstrap_reserve(const RunOffTriangle& t, const BootstrapConfig& cfg) {
    if (cfg.replications < 100)
        throw InvalidConfig("bootstrap needs at least 100 replications, got " +
                            std::to_string(cfg.replications));
    if (cfg.threads < 1)
        throw InvalidConfig("bootstrap needs at least one thread, got " +
                            std::to_string(cfg.threads));

    const int k = t.k();
    const int p = detail::n_params(k);
    const CellSet cells = observed_cells(t);
    const std::size_t n = cells.size();

    BootstrapResult out;
    std::vector<double> mu(n);
    if (cfg.model == Model::Classical) {
        const GlmFit g = fit_poisson(t);
        out.reserves = reserve(g, t);
        out.psi_used = g.psi;
        for (std::size_t c = 0; c < n; ++c) mu[c] = g.fitted.at(cells[c]);
    } else {
        const FuzzyModel m = fit_hybrid(t);
        out.reserves = hybrid_reserve(m, t);
        out.psi_used = m.psi;
        for (std::size_t c = 0; c < n; ++c) mu[c] = predict_crisp(m, cells[c].i, cells[c].j);
    }

    std::vector<double> y(n);
    for (std::size_t c = 0; c < n; ++c) y[c] = t.amount(cells[c].i, cells[c].j);
    const std::vector<double> res = pearson_residuals(y, mu, p);

    const int B = cfg.replications;
    std::vector<double> totals(static_cast<std::size_t>(B),
                               std::numeric_limits<double>::quiet_NaN());
    const auto run_rep = [&](int b) {
        std::mt19937_64 rng(detail::mix_seed(cfg.seed, static_cast<std::uint64_t>(b)));
        std::map<Cell, double> resampled;
        for (std::size_t c = 0; c < n; ++c) {
            const double r = res[rng() % n];
            resampled[cells[c]] = std::max(mu[c] + r * std::sqrt(mu[c]), 1e-6 * mu[c]);
        }
        try {
            const RunOffTriangle tb = RunOffTriangle::from_cells(k, resampled);
            double total;
            if (cfg.model == Model::Classical) {
                const GlmFit g = fit_poisson(tb);
                if (!g.converged) return;
                total = reserve(g, tb).total;
            } else {
                total = hybrid_reserve(fit_hybrid(tb), tb).total;
            }
            if (std::isfinite(total)) totals[static_cast<std::size_t>(b)] = total;
        } catch (const Error&) {
            // refit failure: replication discarded, counted below
        }
    };

    const int threads = std::min(cfg.threads, B);
    if (threads == 1) {
        for (int b = 0; b < B; ++b) run_rep(b);
    } else {
        std::vector<std::exception_ptr> errs(static_cast<std::size_t>(threads));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int tid = 0; tid < threads; ++tid)
            pool.emplace_back([&, tid] {
                try {
                    for (int b = tid; b < B; b += threads) run_rep(b);
                } catch (...) {
                    errs[static_cast<std::size_t>(tid)] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    std::vector<double> ok;
    ok.reserve(static_cast<std::size_t>(B));
    for (double v : totals)
        if (std::isfinite(v)) ok.push_back(v);
    out.failures = B - static_cast<int>(ok.size());
    if (out.failures * 20 > B)
        throw RefitFailed(std::to_string(out.failures) + " of " + std::to_string(B) +
                          " replications failed to refit");

    const double m = static_cast<double>(ok.size());
    double mean = 0.0;
    for (double v : ok) mean += v;
    mean /= m;
    double ss = 0.0, dev = 0.0;
    for (double v : ok) {
        ss += (v - mean) * (v - mean);
        dev += (v - out.reserves.total) * (v - out.reserves.total);
    }
    out.sd = ok.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    out.mse = std::sqrt(dev / m);
    out.ep = std::sqrt(out.psi_used * out.reserves.total + out.sd * out.sd);
    return out;
}

} // namespace runoff
