// Command line front end: solve, verify, sweep, friedrichs.
#include "feshbach/feshbach.hpp"
#include "feshbach/workflows.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace feshbach;

void emit(const json& j, const std::optional<std::string>& path) {
    const std::string text = j.dump(2) + "\n";
    if (path)
        write_atomic(*path, text);
    else
        std::cout << text;
}

void print_identity_table(const Report& r) {
    for (const auto& row : r.identities) {
        std::cerr << (row.skipped ? "SKIP " : row.pass ? "ok   " : "FAIL ") << row.name << "  residual=" << row.residual
                  << "  tol=" << row.tolerance;
        if (!row.note.empty()) std::cerr << "  (" << row.note << ")";
        std::cerr << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator roots of the continued Schur complement"};
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path;
    auto* solve = app.add_subcommand("solve", "compute operator roots Z^(l) and classify their spectra");
    solve->add_option("--config", config_path, "run configuration (JSON)")->required();
    solve->add_option("--out", out_path, "report path (default: config output.report or stdout)");

    auto* verify = app.add_subcommand("verify", "run the identity checks on both sides");
    verify->add_option("--config", config_path, "run configuration (JSON)")->required();
    verify->add_option("--out", out_path, "report path");

    auto* sweep = app.add_subcommand("sweep", "coupling homotopy along t_grid");
    sweep->add_option("--config", config_path, "run configuration (JSON)")->required();
    sweep->add_option("--out-csv", csv_path, "trajectory CSV path");
    sweep->add_option("--out", out_path, "report path");

    friedrichs::Params fp;
    auto* fried = app.add_subcommand("friedrichs", "scalar model on [-alpha, alpha] with b(mu) = b");
    fried->add_option("--alpha", fp.alpha)->required();
    fried->add_option("--a1", fp.a1)->default_val(0.0);
    fried->add_option("--b", fp.b)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*fried) {
            std::cout << cmd_friedrichs(fp).dump(2) << '\n';
            return exit_ok;
        }
        const RunConfig cfg = load_config(config_path);
        auto report_path = out_path.empty() ? cfg.output.report : std::optional<std::string>(out_path);
        if (*solve) {
            const auto rep = cmd_solve(cfg);
            emit(to_json(rep), report_path);
            if (!rep.message.empty()) std::cerr << rep.message << '\n';
            return rep.exit_code();
        }
        if (*verify) {
            const auto rep = cmd_verify(cfg);
            emit(to_json(rep), report_path);
            print_identity_table(rep);
            if (!rep.message.empty()) std::cerr << rep.message << '\n';
            return rep.exit_code();
        }
        const auto res = cmd_sweep(cfg);
        const auto csv = csv_path.empty() ? cfg.output.csv : std::optional<std::string>(csv_path);
        if (csv)
            write_atomic(*csv, res.csv());
        else
            std::cout << res.csv();
        if (report_path) write_atomic(*report_path, to_json(res.report).dump(2) + "\n");
        if (!res.report.message.empty()) std::cerr << res.report.message << '\n';
        return res.report.exit_code();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::invalid_input: return exit_config;
            case ErrorKind::inadmissible: return exit_inadmissible;
            default: return exit_numerical;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
}
