// runner.hpp: run configuration, sweeps, figure pipelines and truncation convergence

#pragma once

#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "qrdiode/observables.hpp"

namespace qrdiode {

struct RunConfig {
    struct Model {
        std::string kind{"two_photon_rabi"};  // or ising_zz, asymmetric_zx, dm
        double omega_L{1.0};
        double omega_R{0.1};
        double g{0.015};
        double theta{0.0};
        std::optional<int> n_fock;  // empty = auto
    } model;
    struct Baths {
        double gamma{1e-4};
        double T_L{0.1};
        double T_R{0.5};
    } baths;
    struct Numerics {
        double deg_tol{dissipation::kRelativeDegeneracyTol};  // relative to max|E|
        double nullspace_tol{1e-10};
        bool oracle{false};
        std::optional<double> rk4_dt;   // in units of 1/gamma
        std::optional<double> t_final;  // in units of 1/gamma
    } numerics;
    struct Output {
        std::string directory{"out"};
        int precision{12};
    } output;

    // Throws ConfigError or the model's validation error.
    void validate() const;
    ModelParams model_params() const;
    SolveOptions solve_options() const;
};

namespace runner {

inline constexpr const char* kVersion = "1.0.0";

// JSON text <-> RunConfig. Unknown keys and wrong types raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& cfg, int indent = 2);

struct SweepGrid {
    std::string param;  // T_L, T_R, theta, g, omega_R
    std::vector<double> values;

    void validate() const;
};

std::vector<double> linspace(double start, double stop, int count);
// "A:B:N" -> linspace(A, B, N)
SweepGrid parse_range(const std::string& param, const std::string& range);
RunConfig with_param(RunConfig cfg, const std::string& param, double value);

struct PointResult {
    double swept_value{0.0};
    std::optional<ObservableRecord> record;
    std::string error;  // solver error, or why R / R_n is undefined
    bool failed{false};  // the point itself could not be computed
    double oracle_deviation{-1.0};  // L-inf population difference, when the oracle ran
};

// Forward/reverse pair at (T_L, T_R) of the config. With numerics.oracle the
// forward steady state is re-derived by time evolution and must agree to 1e-6.
ObservableRecord run_point(const RunConfig& cfg, double* oracle_deviation = nullptr);

// Min(QRDIODE_THREADS, hardware threads), at least 1.
int worker_count();

// Evaluates fn(0..n-1) on up to `threads` workers; results in index order.
template <class Fn>
auto parallel_map(std::size_t n, int threads, const Fn& fn) -> std::vector<decltype(fn(std::size_t{}))>;

std::vector<PointResult> run_sweep(const RunConfig& cfg, const SweepGrid& grid, int threads);

// --- CSV ---------------------------------------------------------------------

extern const std::vector<std::string> kCsvColumns;

std::string format_number(double v, int precision = 12);
// One CSV line (no newline) in kCsvColumns order; `series` appended when non-empty.
std::string csv_row(const PointResult& r, int precision = 12, const std::string* series = nullptr);
std::string csv_header(bool with_series);

struct SeriesRows {
    std::string series;
    std::vector<PointResult> rows;
};
void write_csv(const std::string& path, const std::vector<PointResult>& rows, int precision = 12);
void write_series_csv(const std::string& path, const std::vector<SeriesRows>& series, int precision = 12);

// Writes manifest.json in `dir` with the config, versions and emitted files.
// `notes` are extra string fields (figure id, swept parameter, ...).
void write_manifest(const std::string& dir, const std::string& command, const std::optional<RunConfig>& cfg,
                    const std::vector<std::string>& files, std::size_t failed_points,
                    const std::vector<std::pair<std::string, std::string>>& notes = {});

// --- figures -------------------------------------------------------------------

struct FigureResult {
    std::vector<std::string> files;
    std::size_t points{0};
    std::size_t failed_points{0};
};

std::vector<std::string> figure_ids();
// Throws ConfigError for an unknown id.
FigureResult run_figure(const std::string& id, const std::string& out_dir, int threads);

// --- truncation convergence --------------------------------------------------------

struct ConvergenceRow {
    int n_fock{0};
    double q_L{0.0};
    std::optional<double> relative_change;  // vs the previous N
    bool converged{false};                  // relative_change < tol
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool converged{false};
    std::optional<int> converged_at;
};

inline constexpr double kConvergenceTol = 1e-6;
inline constexpr int kMaxAutoFock = 80;
// Currents below kCurrentNoiseFloor * gamma * max(omega_L, omega_R) are
// treated as zero when comparing truncations.
inline constexpr double kCurrentNoiseFloor = 1e-30;

// Requires a Rabi model and strictly ascending n_list.
ConvergenceReport convergence_check(const RunConfig& cfg, const std::vector<int>& n_list,
                                    double tol = kConvergenceTol);
// Doubles N from the config's value (or 10) until converged or N = 80; the
// last step is clamped to 80.
ConvergenceReport convergence_auto(const RunConfig& cfg, double tol = kConvergenceTol);

}  // namespace runner
}  // namespace qrdiode

#include "qrdiode/runner_impl.hpp"
