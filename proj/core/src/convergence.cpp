#include "ratstep/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ratstep/butcher_tableau.hpp"
#include "ratstep/error.hpp"
#include "ratstep/node_weights.hpp"
#include "ratstep/steppers.hpp"
#include "ratstep/testbeds.hpp"

namespace ratstep {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string method_label(const std::string& method) {
    if (method == "gauss3") return "Gauss3";
    if (method == "sdirk3") return "SDIRK3";
    if (method == "implicit_euler") return "ImplicitEuler";
    return method;
}

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::Rational ? "rational" : "rk"; }

Scheme parse_scheme(const std::string& text) {
    if (text == "rational") return Scheme::Rational;
    if (text == "rk") return Scheme::RK;
    throw Error(ErrorCode::UnknownId, "unknown scheme '" + text + "'");
}

std::string to_string(ErrorNorm n) {
    switch (n) {
        case ErrorNorm::DiscreteL2: return "l2";
        case ErrorNorm::Euclidean: return "euclidean";
        case ErrorNorm::Max: return "max";
    }
    return "l2";
}

ErrorNorm parse_norm(const std::string& text) {
    if (text == "l2") return ErrorNorm::DiscreteL2;
    if (text == "euclidean") return ErrorNorm::Euclidean;
    if (text == "max") return ErrorNorm::Max;
    throw Error(ErrorCode::UnknownId, "unknown norm '" + text + "'");
}

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "markdown") return OutputFormat::Markdown;
    throw Error(ErrorCode::UnknownId, "unknown format '" + text + "'");
}

void SweepSpec::validate() const {
    if (problem != "advection" && problem != "heat1d" && problem != "heat2d") {
        throw Error(ErrorCode::UnknownId, "unknown problem '" + problem + "'");
    }
    if (method != "implicit_euler" && method != "gauss3" && method != "sdirk3") {
        throw Error(ErrorCode::UnknownId, "unknown method '" + method + "'");
    }
    if (grid_M < 3) throw Error(ErrorCode::InvalidArgument, "grid M must be >= 3");
    if (steps.empty()) throw Error(ErrorCode::InvalidArgument, "no step counts given");
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (steps[k] < 1) throw Error(ErrorCode::InvalidArgument, "step counts must be positive");
        if (k > 0 && steps[k] <= steps[k - 1]) throw Error(ErrorCode::InvalidArgument, "step counts must ascend");
    }
}

std::vector<ObservedOrder> estimate_orders(std::span<const double> errors, std::span<const long> steps,
                                           OrderFloor floor) {
    if (errors.size() != steps.size()) throw Error(ErrorCode::DimensionMismatch, "errors and steps differ in length");
    for (double e : errors) {
        if (!(e > 0.0)) throw Error(ErrorCode::NonPositiveError, "errors must be positive");
    }
    std::vector<ObservedOrder> out(errors.size());
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double prev = errors[k - 1];
        const double cur = errors[k];
        if (cur < floor.absolute || (cur >= prev && cur < floor.non_monotone)) {
            out[k] = ObservedOrder::floor();
            continue;
        }
        out[k] = ObservedOrder::of(std::log(prev / cur) /
                                   std::log(static_cast<double>(steps[k]) / static_cast<double>(steps[k - 1])));
    }
    return out;
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("RATSTEP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ConvergenceReport run_sweep(const SweepSpec& spec) {
    spec.validate();
    const auto started = std::chrono::steady_clock::now();

    const ProblemInstance problem = make_problem(spec.problem, spec.grid_M);
    const ButcherTableau tableau = builtin_tableau(spec.method);
    PartialFractionForm pf;
    GammaTable gamma;
    if (spec.scheme == Scheme::Rational) {
        pf = partial_fractions(stability_function(tableau));
        gamma = build_gamma_table(pf, pf.order_p);
    }
    const RealVector reference = problem.exact(problem.horizon);

    std::vector<double> errors(spec.steps.size(), 0.0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < spec.steps.size(); k = next++) {
            try {
                const long N = spec.steps[k];
                const RealVector u = spec.scheme == Scheme::Rational
                                         ? rational_integrate(problem, N, pf, gamma).final_state
                                         : rk_integrate(problem, N, tableau).final_state;
                const RealVector diff = u - reference;
                switch (spec.norm) {
                    case ErrorNorm::DiscreteL2: errors[k] = problem.norm(diff); break;
                    case ErrorNorm::Euclidean: errors[k] = diff.norm(); break;
                    case ErrorNorm::Max: errors[k] = diff.lpNorm<Eigen::Infinity>(); break;
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned threads = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(spec.steps.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    ConvergenceReport report;
    report.problem = spec.problem;
    report.method = spec.method;
    report.scheme = spec.scheme;
    report.grid_M = spec.grid_M;
    const auto orders = estimate_orders(errors, spec.steps);
    for (std::size_t k = 0; k < spec.steps.size(); ++k) {
        report.rows.push_back({spec.steps[k], 1.0 / static_cast<double>(spec.steps[k]), errors[k], orders[k]});
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

std::vector<SweepSpec> table_sweeps(const std::string& table_id) {
    auto make = [&table_id](std::string problem, std::string method, Scheme scheme, std::vector<long> steps) {
        SweepSpec s;
        s.norm = table_id == "T5" ? ErrorNorm::Max : ErrorNorm::Euclidean;
        s.problem = std::move(problem);
        s.grid_M = 100;
        s.method = std::move(method);
        s.scheme = scheme;
        s.steps = std::move(steps);
        return s;
    };
    if (table_id == "T1") {
        const std::vector<long> n{10, 20, 40, 80, 160, 320};
        return {make("heat1d", "gauss3", Scheme::Rational, n), make("heat1d", "gauss3", Scheme::RK, n),
                make("heat1d", "sdirk3", Scheme::Rational, n), make("heat1d", "sdirk3", Scheme::RK, n)};
    }
    if (table_id == "T2") {
        const std::vector<long> n{15, 30, 45, 60, 75, 90};
        return {make("heat2d", "gauss3", Scheme::Rational, n), make("heat2d", "gauss3", Scheme::RK, n)};
    }
    if (table_id == "T3") {
        const std::vector<long> n{20, 40, 80, 160, 320, 640};
        return {make("heat2d", "sdirk3", Scheme::Rational, n), make("heat2d", "sdirk3", Scheme::RK, n)};
    }
    if (table_id == "T5") {
        const std::vector<long> n{80, 160, 240, 320, 400, 480};
        return {make("advection", "sdirk3", Scheme::Rational, n), make("advection", "sdirk3", Scheme::RK, n)};
    }
    throw Error(ErrorCode::UnknownId, "unknown table '" + table_id + "' (expected T1, T2, T3 or T5)");
}

std::vector<ConvergenceReport> reproduce(const std::string& table_id) {
    std::vector<ConvergenceReport> reports;
    for (const auto& spec : table_sweeps(table_id)) reports.push_back(run_sweep(spec));
    return reports;
}

void write_csv(std::ostream& out, std::span<const ConvergenceReport> reports) {
    out << "problem,method,scheme,M,N,tau,error,order\n";
    for (const auto& r : reports) {
        for (const auto& row : r.rows) {
            out << r.problem << ',' << r.method << ',' << to_string(r.scheme) << ',' << r.grid_M << ',' << row.N
                << ',' << format_double(row.tau) << ',' << format_double(row.error) << ',';
            if (row.order.kind == ObservedOrder::Kind::Value) out << format_double(row.order.value);
            if (row.order.kind == ObservedOrder::Kind::Floor) out << '*';
            out << '\n';
        }
    }
}

std::vector<ConvergenceReport> parse_csv(std::istream& in) {
    std::vector<ConvergenceReport> reports;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            if (trim(line) != "problem,method,scheme,M,N,tau,error,order") {
                throw Error(ErrorCode::InvalidArgument, "unexpected CSV header");
            }
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 8) throw Error(ErrorCode::InvalidArgument, "CSV row needs 8 fields: " + line);
        const Scheme scheme = parse_scheme(f[2]);
        const int M = std::stoi(f[3]);
        if (reports.empty() || reports.back().problem != f[0] || reports.back().method != f[1] ||
            reports.back().scheme != scheme || reports.back().grid_M != M) {
            ConvergenceReport r;
            r.problem = f[0];
            r.method = f[1];
            r.scheme = scheme;
            r.grid_M = M;
            reports.push_back(std::move(r));
        }
        ReportRow row;
        row.N = std::stol(f[4]);
        row.tau = std::strtod(f[5].c_str(), nullptr);
        row.error = std::strtod(f[6].c_str(), nullptr);
        if (f[7] == "*") {
            row.order = ObservedOrder::floor();
        } else if (!f[7].empty()) {
            row.order = ObservedOrder::of(std::strtod(f[7].c_str(), nullptr));
        }
        reports.back().rows.push_back(row);
    }
    return reports;
}

void write_markdown(std::ostream& out, std::span<const ConvergenceReport> reports, const std::string& caption) {
    if (reports.empty()) return;
    const auto& columns = reports.front().rows;
    if (!caption.empty()) out << caption << "\n\n";
    out << "| Method | Version |";
    for (std::size_t k = 1; k < columns.size(); ++k) out << " N = " << columns[k].N << " |";
    out << "\n|---|---|";
    for (std::size_t k = 1; k < columns.size(); ++k) out << "---:|";
    out << '\n';
    std::string last_method;
    for (const auto& r : reports) {
        if (r.rows.size() != columns.size()) {
            throw Error(ErrorCode::InvalidArgument, "markdown table rows need identical step counts");
        }
        const std::string label = method_label(r.method);
        out << "| " << (label == last_method ? std::string{} : label) << " | "
            << (r.scheme == Scheme::Rational ? "Rational" : "RK") << " |";
        last_method = label;
        for (std::size_t k = 1; k < r.rows.size(); ++k) {
            const auto& o = r.rows[k].order;
            if (o.kind == ObservedOrder::Kind::Floor) {
                out << " * |";
            } else {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.2f", o.value);
                out << ' ' << buf << " |";
            }
        }
        out << '\n';
    }
}

std::map<std::string, std::string> read_config(std::istream& in) {
    static const std::vector<std::string> known{"problem", "method", "scheme", "grid", "steps", "format", "norm", "out"};
    std::map<std::string, std::string> values;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(number) + ": unknown key '" + key + "'");
        }
        values[key] = trim(line.substr(eq + 1));
    }
    return values;
}

std::vector<long> parse_steps(const std::string& text) {
    std::vector<long> steps;
    for (const auto& field : split(text, ',')) {
        if (field.empty()) continue;
        std::size_t used = 0;
        long value = 0;
        try {
            value = std::stol(field, &used);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "bad step count '" + field + "'");
        }
        if (used != field.size()) throw Error(ErrorCode::InvalidArgument, "bad step count '" + field + "'");
        steps.push_back(value);
    }
    return steps;
}

}  // namespace ratstep
