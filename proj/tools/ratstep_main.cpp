// ratstep: convergence sweeps for the rational and Runge-Kutta steppers.
//
//   ratstep run --problem heat1d --method sdirk3 --scheme rational --grid 100 --steps 80,160,320
//   ratstep reproduce --table T1 --out results/
//   ratstep check
//
// Exit codes: 0 success, 1 failed check or runtime failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ratstep/convergence.hpp"
#include "ratstep/diagnostics.hpp"
#include "ratstep/error.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct RunArgs {
    std::string config;
    std::string problem;
    std::string method;
    std::string scheme;
    std::string steps;
    std::string format;
    std::string norm;
    std::string out;
    int grid = 0;
};

void emit(const std::vector<ratstep::ConvergenceReport>& reports, ratstep::OutputFormat format, std::ostream& os,
          const std::string& caption) {
    if (format == ratstep::OutputFormat::Csv) {
        ratstep::write_csv(os, reports);
    } else {
        ratstep::write_markdown(os, reports, caption);
    }
}

int run_command(const RunArgs& args) {
    std::map<std::string, std::string> values;
    if (!args.config.empty()) {
        std::ifstream in(args.config);
        if (!in) throw ratstep::Error(ratstep::ErrorCode::InvalidArgument, "cannot open config " + args.config);
        values = ratstep::read_config(in);
    }
    auto pick = [&](const std::string& flag, const char* key, const std::string& fallback) {
        if (!flag.empty()) return flag;
        if (auto it = values.find(key); it != values.end()) return it->second;
        return fallback;
    };

    ratstep::SweepSpec spec;
    spec.problem = pick(args.problem, "problem", spec.problem);
    spec.method = pick(args.method, "method", spec.method);
    spec.scheme = ratstep::parse_scheme(pick(args.scheme, "scheme", "rational"));
    spec.grid_M = args.grid > 0 ? args.grid : std::stoi(pick("", "grid", "100"));
    spec.steps = ratstep::parse_steps(pick(args.steps, "steps", ""));
    spec.format = ratstep::parse_format(pick(args.format, "format", "csv"));
    spec.norm = ratstep::parse_norm(pick(args.norm, "norm", "l2"));
    const std::string out_path = pick(args.out, "out", "");

    const auto report = ratstep::run_sweep(spec);
    const std::vector<ratstep::ConvergenceReport> reports{report};
    const std::string caption =
        spec.problem + ", M = " + std::to_string(spec.grid_M) + ", " + ratstep::to_string(spec.norm) + " norm";
    if (out_path.empty()) {
        emit(reports, spec.format, std::cout, caption);
    } else {
        std::ofstream out(out_path);
        if (!out) throw ratstep::Error(ratstep::ErrorCode::InvalidArgument, "cannot write " + out_path);
        emit(reports, spec.format, out, caption);
    }
    std::cerr << "wall time: " << report.wall_seconds << " s\n";
    return kOk;
}

int reproduce_command(const std::string& table, const std::string& out_dir) {
    const auto reports = ratstep::reproduce(table);
    const std::string caption = "Observed orders, table " + table + " (" + reports.front().problem + ", M = " +
                                std::to_string(reports.front().grid_M) + ", " +
                                ratstep::to_string(ratstep::table_sweeps(table).front().norm) + " norm)";
    ratstep::write_markdown(std::cout, reports, caption);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream csv(std::filesystem::path(out_dir) / (table + ".csv"));
        ratstep::write_csv(csv, reports);
        std::ofstream md(std::filesystem::path(out_dir) / (table + ".md"));
        ratstep::write_markdown(md, reports, caption);
        if (!csv || !md) throw ratstep::Error(ratstep::ErrorCode::InvalidArgument, "cannot write into " + out_dir);
    }
    return kOk;
}

int check_command() {
    bool all = true;
    for (const auto& result : ratstep::run_self_checks()) {
        std::cout << (result.passed ? "PASS " : "FAIL ") << result.name;
        if (!result.passed) std::cout << " -- " << result.detail;
        std::cout << '\n';
        all = all && result.passed;
    }
    return all ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rational time stepping without order reduction: convergence studies"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run one convergence sweep");
    run->add_option("--config", run_args.config, "Config file with key = value lines (flags override it)");
    run->add_option("--problem", run_args.problem, "advection | heat1d | heat2d");
    run->add_option("--method", run_args.method, "implicit_euler | gauss3 | sdirk3");
    run->add_option("--scheme", run_args.scheme, "rational | rk");
    run->add_option("--grid", run_args.grid, "Spatial subdivisions M (h = 1/M)");
    run->add_option("--steps", run_args.steps, "Ascending step counts N, comma separated");
    run->add_option("--format", run_args.format, "csv | markdown");
    run->add_option("--norm", run_args.norm, "l2 | euclidean | max (error measure at t = 1)");
    run->add_option("--out", run_args.out, "Write to this file instead of stdout");

    std::string table;
    std::string out_dir;
    auto* repro = app.add_subcommand("reproduce", "Recompute one of the reference convergence tables");
    repro->add_option("--table", table, "T1 | T2 | T3 | T5")->required();
    repro->add_option("--out", out_dir, "Directory for <table>.csv and <table>.md");

    auto* chk = app.add_subcommand("check", "Run the quick property checks of every module");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) return run_command(run_args);
        if (*repro) return reproduce_command(table, out_dir);
        if (*chk) return check_command();
    } catch (const ratstep::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const auto code = e.code();
        const bool usage = code == ratstep::ErrorCode::UnknownId || code == ratstep::ErrorCode::InvalidArgument;
        return usage ? kUsage : kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
