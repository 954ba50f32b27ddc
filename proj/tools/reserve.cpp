// reserve: fit and compare claims-reserving models on run-off triangles.
//
// Subcommands:
//   validate <file>                 parse + validate a triangle
//   fit <file> [--model] [--format] fit one model, print report
//   bootstrap <file> [--model] [--reps] [--seed] [--threads] [--format]
//   compare <file> [--reps] [--seed] [--threads] [--format]
//
// Exit codes: 0 success, 2 input error, 3 computation error.
// RESERVE_LOG={error|info|debug} controls stderr verbosity.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "runoff/report.hpp"

namespace {

struct ExitWith {
    int code;
};

runoff::RunOffTriangle load_triangle(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        throw ExitWith{2};
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return runoff::parse_triangle(buf.str());
    } catch (const runoff::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        throw ExitWith{2};
    }
}

void emit(const nlohmann::json& j, const std::string& table, const std::string& format) {
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << table;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"claims reserving: log-Poisson and hybrid fuzzy models on run-off triangles"};
    app.require_subcommand(1);

    const std::map<std::string, runoff::Model> model_names{
        {"classical", runoff::Model::Classical}, {"hybrid", runoff::Model::Hybrid}};

    std::string path, format = "json";
    runoff::Model model = runoff::Model::Classical;
    int reps = 1000, threads = 1;
    std::uint64_t seed = 0;
    int rc = 0;

    auto* validate = app.add_subcommand("validate", "parse and validate a triangle file");
    validate->add_option("file", path, "triangle CSV (wide or long layout)")->required();
    validate->callback([&] {
        const auto t = load_triangle(path);
        std::cout << "valid: k=" << t.k() << ", " << runoff::observed_cells(t).size()
                  << " observed cells\n";
    });

    auto add_common = [&](CLI::App* sub, bool with_model, bool with_boot) {
        sub->add_option("file", path, "triangle CSV (wide or long layout)")->required();
        if (with_model)
            sub->add_option("--model", model, "model to fit")
                ->transform(CLI::CheckedTransformer(model_names, CLI::ignore_case));
        if (with_boot) {
            sub->add_option("--reps", reps, "bootstrap replications (>= 100)");
            sub->add_option("--seed", seed, "bootstrap seed");
            sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
        }
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "table"}));
    };

    auto* fit = app.add_subcommand("fit", "fit one model and print the reserve report");
    add_common(fit, true, false);
    fit->callback([&] {
        const auto t = load_triangle(path);
        const auto rep = runoff::make_fit_report(t, model, path);
        emit(runoff::envelope_json("fit", {rep}), runoff::render_fit_table(rep), format);
    });

    auto* boot = app.add_subcommand("bootstrap", "bootstrap reserve variability");
    add_common(boot, true, true);
    boot->callback([&] {
        const auto t = load_triangle(path);
        runoff::BootstrapConfig cfg;
        cfg.replications = reps;
        cfg.seed = seed;
        cfg.model = model;
        cfg.threads = threads;
        const auto rep = runoff::make_bootstrap_report(t, cfg, path);
        emit(runoff::envelope_json("bootstrap", {rep}), runoff::render_bootstrap_table(rep),
             format);
    });

    auto* cmp = app.add_subcommand("compare", "bootstrap both models and compare");
    add_common(cmp, false, true);
    cmp->callback([&] {
        const auto t = load_triangle(path);
        runoff::BootstrapConfig cfg;
        cfg.replications = reps;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.model = runoff::Model::Classical;
        const auto classical = runoff::make_bootstrap_report(t, cfg, path);
        cfg.model = runoff::Model::Hybrid;
        const auto hybrid = runoff::make_bootstrap_report(t, cfg, path);
        const auto winners = runoff::compare_reports(classical, hybrid);
        emit(runoff::envelope_json("compare", {classical, hybrid}, &winners),
             runoff::render_compare_table(classical, hybrid, winners), format);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? 0 : 2;
    } catch (const ExitWith& e) {
        return e.code;
    } catch (const runoff::InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const runoff::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
