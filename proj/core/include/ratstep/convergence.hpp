#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ratstep {

enum class Scheme { Rational, RK };
enum class OutputFormat { Csv, Markdown };

/// How the error at t = 1 is measured: the problem's discrete L2 norm,
/// the unweighted Euclidean norm of the grid vector, or the max norm.
enum class ErrorNorm { DiscreteL2, Euclidean, Max };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& text);
OutputFormat parse_format(const std::string& text);
std::string to_string(ErrorNorm n);
ErrorNorm parse_norm(const std::string& text);

/// One convergence study: fixed problem, grid, method and scheme over T = 1.
struct SweepSpec {
    std::string problem = "heat1d";
    int grid_M = 100;
    std::string method = "sdirk3";
    Scheme scheme = Scheme::Rational;
    std::vector<long> steps;
    OutputFormat format = OutputFormat::Csv;
    ErrorNorm norm = ErrorNorm::DiscreteL2;

    /// Throws InvalidArgument / UnknownId for empty or non-ascending steps and bad ids.
    void validate() const;
};

/// Observed order attributed to a refinement level: absent for the first row,
/// a number, or the floor marker "*" once the error has reached roundoff level.
struct ObservedOrder {
    enum class Kind { None, Value, Floor };
    Kind kind = Kind::None;
    double value = 0.0;

    [[nodiscard]] static ObservedOrder none() { return {}; }
    [[nodiscard]] static ObservedOrder floor() { return {Kind::Floor, 0.0}; }
    [[nodiscard]] static ObservedOrder of(double v) { return {Kind::Value, v}; }

    bool operator==(const ObservedOrder&) const = default;
};

struct ReportRow {
    long N = 0;
    double tau = 0.0;
    double error = 0.0;
    ObservedOrder order;

    bool operator==(const ReportRow&) const = default;
};

struct ConvergenceReport {
    std::string problem;
    std::string method;
    Scheme scheme = Scheme::Rational;
    int grid_M = 0;
    std::vector<ReportRow> rows;
    /// Not part of equality: timing differs run to run.
    double wall_seconds = 0.0;

    bool operator==(const ConvergenceReport& other) const {
        return problem == other.problem && method == other.method && scheme == other.scheme &&
               grid_M == other.grid_M && rows == other.rows;
    }
};

struct OrderFloor {
    double absolute = 1e-12;     ///< errors below this are at the floor
    double non_monotone = 1e-11; ///< a non-decreasing error below this is at the floor
};

/// order_k = ln(e_{k-1}/e_k) / ln(N_k/N_{k-1}); the first entry has none.
/// Throws NonPositiveError for errors <= 0.
[[nodiscard]] std::vector<ObservedOrder> estimate_orders(std::span<const double> errors, std::span<const long> steps,
                                                         OrderFloor floor = {});

/// Worker count for sweeps: RATSTEP_THREADS when set and positive, else hardware concurrency.
[[nodiscard]] unsigned sweep_threads();

/// Integrates every N (in parallel, up to sweep_threads()) and measures the
/// discrete L2 error at t = 1 against the exact grid solution.
[[nodiscard]] ConvergenceReport run_sweep(const SweepSpec& spec);

/// Table ids "T1", "T2", "T3", "T5". Each returns one report per method/scheme row.
/// T1-T3 measure errors in the Euclidean norm, T5 in the max norm.
[[nodiscard]] std::vector<SweepSpec> table_sweeps(const std::string& table_id);
[[nodiscard]] std::vector<ConvergenceReport> reproduce(const std::string& table_id);

/// CSV columns: problem,method,scheme,M,N,tau,error,order (order empty or "*").
void write_csv(std::ostream& out, std::span<const ConvergenceReport> reports);
[[nodiscard]] std::vector<ConvergenceReport> parse_csv(std::istream& in);

/// Orders laid out as Method | Version | N = ... columns (first row omitted,
/// since it has no order). Reports must share the same step counts.
void write_markdown(std::ostream& out, std::span<const ConvergenceReport> reports, const std::string& caption = {});

/// Plain-text config: one `key = value` per line, '#' comments. Known keys:
/// problem, method, scheme, grid, steps, format, norm, out. Unknown keys are an error.
[[nodiscard]] std::map<std::string, std::string> read_config(std::istream& in);

/// Parses "10,20,40" into step counts.
[[nodiscard]] std::vector<long> parse_steps(const std::string& text);

}  // namespace ratstep
