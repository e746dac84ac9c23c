#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "commands.hpp"

namespace {

using grounded::cli::OutputFormat;
using grounded::cli::RunConfig;

enum ExitCode : int { ok = 0, parse_error = 2, convergence_error = 3, guard_violation = 4 };

std::vector<grounded::Method> parse_methods(const std::string& list) {
    std::vector<grounded::Method> methods;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        auto m = grounded::parse_method(name);
        if (!m) throw CLI::ValidationError("--method", "unknown method '" + name + "'");
        methods.push_back(*m);
    }
    return methods;
}

struct RawOptions {
    std::string methods = "fast";
    std::string solver = "inverse_power";
    std::string format;
};

void add_common(CLI::App* cmd, RunConfig& config, RawOptions& raw, bool needs_input) {
    auto* input = cmd->add_option("--input", config.input_path, "Edge list file (u v [w ...] per line)");
    if (needs_input) input->required()->check(CLI::ExistingFile);
    cmd->add_option("--method", raw.methods,
                    "optimum|naive|fast|degree|eigenvector|betweenness|closeness (comma list for sweep)");
    cmd->add_option("--k", config.k, "Number of grounded nodes");
    cmd->add_option("--eps", config.eps, "Error parameter for solver and eigensolver");
    cmd->add_option("--seed", config.seed, "Seed for every random choice");
    cmd->add_option("--solver", raw.solver, "inverse_power|lanczos")
        ->check(CLI::IsMember({"inverse_power", "lanczos"}));
    cmd->add_option("--format", raw.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", config.output_path, "Write output here instead of stdout");
    cmd->add_option("--label-map", config.label_map_path, "Also write the external,internal label map CSV");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grounded node selection maximizing the smallest eigenvalue of the grounded Laplacian"};
    app.require_subcommand(1);

    RunConfig config;
    RawOptions raw;

    auto* select = app.add_subcommand("select", "Run one selection method and print JSON");
    add_common(select, config, raw, true);

    auto* sweep = app.add_subcommand("sweep", "lambda for k = 1..k_max per method as CSV");
    add_common(sweep, config, raw, true);
    sweep->add_option("--k-max", config.k_max, "Largest k")->required();

    auto* gap = app.add_subcommand("gap-compare", "Exact vs estimated eigenvalue gaps as CSV");
    add_common(gap, config, raw, true);
    gap->add_option("--set-size", config.set_size, "Size of the random grounded set");
    gap->add_option("--grounded", config.grounded_labels, "Explicit grounded labels instead of sampling")
        ->delimiter(',');

    auto* bench = app.add_subcommand("solver-bench", "Time inverse power vs Lanczos as CSV");
    add_common(bench, config, raw, false);
    bench->add_option("--sizes", config.sizes, "Node counts of generated graphs")->delimiter(',');
    bench->add_option("--trials", config.trials, "Random grounded sets per graph");
    bench->add_option("--mean-degree", config.mean_degree, "Mean degree of generated graphs");

    try {
        app.parse(argc, argv);
        config.methods = parse_methods(raw.methods);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::ok : ExitCode::parse_error;
    }
    config.solver = raw.solver == "lanczos" ? grounded::EigenSolverKind::lanczos
                                            : grounded::EigenSolverKind::inverse_power;

    const bool is_select = app.got_subcommand(select);
    if (raw.format.empty()) {
        config.format = is_select ? OutputFormat::json : OutputFormat::csv;
    } else {
        config.format = raw.format == "json" ? OutputFormat::json : OutputFormat::csv;
    }

    std::ofstream file;
    if (!config.output_path.empty()) {
        file.open(config.output_path);
        if (!file) {
            std::cerr << "error: cannot open output file '" << config.output_path << "'\n";
            return ExitCode::guard_violation;
        }
    }
    std::ostream& out = config.output_path.empty() ? std::cout : file;

    try {
        if (is_select) {
            grounded::cli::cmd_select(config, out);
        } else if (app.got_subcommand(sweep)) {
            grounded::cli::cmd_sweep(config, out);
        } else if (app.got_subcommand(gap)) {
            grounded::cli::cmd_gap_compare(config, out);
        } else {
            grounded::cli::cmd_solver_bench(config, out);
        }
    } catch (const grounded::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return ExitCode::parse_error;
    } catch (const grounded::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return ExitCode::convergence_error;
    } catch (const grounded::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return ExitCode::convergence_error;
    } catch (const grounded::GuardError& e) {
        std::cerr << "guard violation: " << e.what() << '\n';
        return ExitCode::guard_violation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::guard_violation;
    }
    return ExitCode::ok;
}
