#pragma once

// Report assembly and rendering: builds ReserveReport values from fits and
// bootstrap runs, serializes them as schema-versioned JSON (full precision)
// or plain-text tables (two decimals).

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "runoff/bootstrap.hpp"
#include "runoff/glm.hpp"
#include "runoff/hybrid.hpp"
#include "runoff/triangle.hpp"

namespace runoff {

struct Variability {
    double ep = 0.0;
    double sd = 0.0;
    double mse = 0.0;
};

struct ReserveReport {
    Model model = Model::Classical;
    std::vector<std::pair<int, double>> per_origin; // (origin year, reserve)
    double total = 0.0;
    std::optional<double> h_star;
    std::optional<double> psi;
    std::optional<Variability> variability;
    std::vector<std::pair<std::string, std::string>> provenance; // config echo
    // fit payloads, rendered when present
    std::optional<GlmFit> glm;
    std::optional<FuzzyModel> fuzzy;
    std::vector<std::vector<double>> square; // full k x k crisp prediction square
};

struct Comparison {
    std::string ep_winner;
    std::string sd_winner;
    std::string mse_winner;
};

inline const char* model_name(Model m) { return m == Model::Classical ? "classical" : "hybrid"; }

inline ReserveReport make_fit_report(const RunOffTriangle& t, Model model,
                                     const std::string& input) {
    ReserveReport rep;
    rep.model = model;
    const int k = t.k();
    OriginReserves r;
    if (model == Model::Classical) {
        const GlmFit g = fit_poisson(t);
        rep.psi = g.psi;
        r = reserve(g, t);
        rep.square.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= k; ++j)
                rep.square[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                    predict_cell(g, i, j);
        rep.glm = g;
    } else {
        const FuzzyModel m = fit_hybrid(t);
        rep.psi = m.psi;
        rep.h_star = m.h_star;
        r = hybrid_reserve(m, t);
        rep.square.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= k; ++j)
                rep.square[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                    predict_crisp(m, i, j);
        rep.fuzzy = m;
    }
    for (int i = 1; i <= k; ++i)
        rep.per_origin.emplace_back(i, r.per_origin[static_cast<std::size_t>(i - 1)]);
    rep.total = r.total;
    rep.provenance = {{"input", input}, {"model", model_name(model)}};
    return rep;
}

inline ReserveReport make_bootstrap_report(const RunOffTriangle& t, const BootstrapConfig& cfg,
                                           const std::string& input) {
    ReserveReport rep;
    rep.model = cfg.model;
    const BootstrapResult b = bootstrap_reserve(t, cfg);
    for (int i = 1; i <= t.k(); ++i)
        rep.per_origin.emplace_back(i, b.reserves.per_origin[static_cast<std::size_t>(i - 1)]);
    rep.total = b.reserves.total;
    rep.psi = b.psi_used;
    rep.variability = Variability{b.ep, b.sd, b.mse};
    rep.provenance = {{"input", input},
                      {"model", model_name(cfg.model)},
                      {"reps", std::to_string(cfg.replications)},
                      {"seed", std::to_string(cfg.seed)}};
    return rep;
}

inline Comparison compare_reports(const ReserveReport& classical, const ReserveReport& hybrid) {
    const Variability& c = *classical.variability;
    const Variability& h = *hybrid.variability;
    Comparison cmp;
    cmp.ep_winner = h.ep < c.ep ? "hybrid" : "classical";
    cmp.sd_winner = h.sd < c.sd ? "hybrid" : "classical";
    cmp.mse_winner = h.mse < c.mse ? "hybrid" : "classical";
    return cmp;
}

// ---- JSON rendering (full precision) --------------------------------------

inline nlohmann::json tfn_json(const Tfn& v) {
    return nlohmann::json::array({v.left, v.center, v.right});
}

inline nlohmann::json report_json(const ReserveReport& rep) {
    nlohmann::json j;
    j["model"] = model_name(rep.model);
    auto& po = j["per_origin"] = nlohmann::json::array();
    for (const auto& [origin, res] : rep.per_origin)
        po.push_back({{"origin", origin}, {"reserve", res}});
    j["total"] = rep.total;
    if (rep.h_star) j["h_star"] = *rep.h_star;
    if (rep.psi) j["psi"] = *rep.psi;
    if (rep.variability)
        j["variability"] = {{"ep", rep.variability->ep},
                            {"sd", rep.variability->sd},
                            {"mse", rep.variability->mse}};
    // Coefficients always serialize as [left, center, right]; classical fits
    // are crisp, so the three entries coincide.
    if (rep.glm) {
        const GlmFit& g = *rep.glm;
        nlohmann::json coef;
        coef["tau"] = tfn_json(tfn_crisp(g.tau));
        auto &a = coef["alpha"] = nlohmann::json::array(), &b = coef["beta"] = nlohmann::json::array();
        for (int i = 2; i <= g.k; ++i) a.push_back(tfn_json(tfn_crisp(g.alpha_at(i))));
        for (int jj = 2; jj <= g.k; ++jj) b.push_back(tfn_json(tfn_crisp(g.beta_at(jj))));
        j["coefficients"] = std::move(coef);
    }
    if (rep.fuzzy) {
        const FuzzyModel& m = *rep.fuzzy;
        nlohmann::json coef;
        coef["tau"] = tfn_json(m.tau);
        auto &a = coef["alpha"] = nlohmann::json::array(), &b = coef["beta"] = nlohmann::json::array();
        for (int i = 2; i <= m.k; ++i) a.push_back(tfn_json(m.alpha_at(i)));
        for (int jj = 2; jj <= m.k; ++jj) b.push_back(tfn_json(m.beta_at(jj)));
        j["coefficients"] = std::move(coef);
    }
    if (!rep.square.empty()) j["square"] = rep.square;
    nlohmann::json prov;
    for (const auto& [key, val] : rep.provenance) prov[key] = val;
    j["provenance"] = std::move(prov);
    return j;
}

inline nlohmann::json envelope_json(const std::string& kind,
                                    const std::vector<ReserveReport>& reports,
                                    const Comparison* cmp = nullptr) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["kind"] = kind;
    auto& arr = j["reports"] = nlohmann::json::array();
    for (const auto& rep : reports) arr.push_back(report_json(rep));
    if (cmp)
        j["comparison"] = {{"ep_winner", cmp->ep_winner},
                           {"sd_winner", cmp->sd_winner},
                           {"mse_winner", cmp->mse_winner}};
    return j;
}

// ---- table rendering (two decimals) ----------------------------------------

namespace detail {

inline std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string pad_left(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

inline std::string tfn_row(const Tfn& v) {
    return pad_left(fmt2(v.left), 14) + pad_left(fmt2(v.center), 14) + pad_left(fmt2(v.right), 14);
}

} // namespace detail

inline std::string render_fit_table(const ReserveReport& rep) {
    using detail::fmt2;
    using detail::pad_left;
    std::ostringstream os;
    os << "model: " << model_name(rep.model) << "\n";
    if (rep.h_star) os << "h_star: " << fmt2(*rep.h_star) << "\n";
    if (rep.psi) os << "psi: " << fmt2(*rep.psi) << "\n";
    os << "coefficients (left, center, right):\n";
    if (rep.glm) {
        const GlmFit& g = *rep.glm;
        os << "  tau      " << detail::tfn_row(tfn_crisp(g.tau)) << "\n";
        for (int i = 2; i <= g.k; ++i)
            os << "  alpha_" << i << (i < 10 ? " " : "") << " " << detail::tfn_row(tfn_crisp(g.alpha_at(i))) << "\n";
        for (int j = 2; j <= g.k; ++j)
            os << "  beta_" << j << (j < 10 ? " " : "") << "  " << detail::tfn_row(tfn_crisp(g.beta_at(j))) << "\n";
    }
    if (rep.fuzzy) {
        const FuzzyModel& m = *rep.fuzzy;
        os << "  tau      " << detail::tfn_row(m.tau) << "\n";
        for (int i = 2; i <= m.k; ++i)
            os << "  alpha_" << i << (i < 10 ? " " : "") << " " << detail::tfn_row(m.alpha_at(i)) << "\n";
        for (int j = 2; j <= m.k; ++j)
            os << "  beta_" << j << (j < 10 ? " " : "") << "  " << detail::tfn_row(m.beta_at(j)) << "\n";
    }
    os << "prediction square (origin rows, development columns):\n";
    for (const auto& row : rep.square) {
        os << " ";
        for (double v : row) os << pad_left(fmt2(v), 13);
        os << "\n";
    }
    os << "reserves:\n  origin        reserve\n";
    for (const auto& [origin, res] : rep.per_origin)
        os << pad_left(std::to_string(origin), 8) << pad_left(fmt2(res), 15) << "\n";
    os << "   total" << pad_left(fmt2(rep.total), 15) << "\n";
    return os.str();
}

inline std::string render_bootstrap_table(const ReserveReport& rep) {
    using detail::fmt2;
    using detail::pad_left;
    std::ostringstream os;
    os << "model: " << model_name(rep.model) << "\n";
    os << "reserves:\n  origin        reserve\n";
    for (const auto& [origin, res] : rep.per_origin)
        os << pad_left(std::to_string(origin), 8) << pad_left(fmt2(res), 15) << "\n";
    os << "   total" << pad_left(fmt2(rep.total), 15) << "\n";
    if (rep.variability) {
        os << "variability:\n";
        os << "  ep " << pad_left(fmt2(rep.variability->ep), 15) << "\n";
        os << "  sd " << pad_left(fmt2(rep.variability->sd), 15) << "\n";
        os << "  mse" << pad_left(fmt2(rep.variability->mse), 15) << "\n";
    }
    if (rep.psi) os << "psi: " << fmt2(*rep.psi) << "\n";
    return os.str();
}

inline std::string render_compare_table(const ReserveReport& classical, const ReserveReport& hybrid,
                                        const Comparison& cmp) {
    using detail::fmt2;
    using detail::pad_left;
    std::ostringstream os;
    os << "criterion      classical         hybrid     winner\n";
    os << "reserve " << pad_left(fmt2(classical.total), 16) << pad_left(fmt2(hybrid.total), 15)
       << pad_left("-", 11) << "\n";
    os << "ep      " << pad_left(fmt2(classical.variability->ep), 16)
       << pad_left(fmt2(hybrid.variability->ep), 15) << pad_left(cmp.ep_winner, 11) << "\n";
    os << "sd      " << pad_left(fmt2(classical.variability->sd), 16)
       << pad_left(fmt2(hybrid.variability->sd), 15) << pad_left(cmp.sd_winner, 11) << "\n";
    os << "mse     " << pad_left(fmt2(classical.variability->mse), 16)
       << pad_left(fmt2(hybrid.variability->mse), 15) << pad_left(cmp.mse_winner, 11) << "\n";
    return os.str();
}

} // namespace runoff
