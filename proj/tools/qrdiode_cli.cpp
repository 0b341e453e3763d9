// qrdiode: command-line front end of the runner
//
// Exit codes: 0 success, 1 some points failed, 2 configuration or validation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qrdiode/runner.hpp"

using namespace qrdiode;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kInvalid = 2;

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError("bad --n-list entry '" + item + "'");
        }
    }
    return out;
}

int cmd_steady(const std::string& config_path) {
    const RunConfig cfg = runner::load_config(config_path);
    runner::PointResult r;
    r.swept_value = cfg.baths.T_L;
    try {
        r.record = runner::run_point(cfg, &r.oracle_deviation);
        if (!r.record->rectification) r.error = "R undefined: |q_f - q_r| < 1e-15";
        if (!r.record->photon_asymmetry)
            r.error += std::string(r.error.empty() ? "" : "; ") + "R_n undefined: |D_f + D_r| < 1e-15";
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
    }
    const auto path = (fs::path(cfg.output.directory) / "steady.csv").string();
    runner::write_csv(path, {r}, cfg.output.precision);
    std::vector<std::pair<std::string, std::string>> notes{{"swept_param", "T_L (single point)"}};
    if (r.oracle_deviation >= 0.0) notes.emplace_back("oracle_deviation", runner::format_number(r.oracle_deviation));
    runner::write_manifest(cfg.output.directory, "steady", cfg, {path}, r.failed ? 1 : 0, notes);

    std::cout << runner::csv_header(false) << '\n' << runner::csv_row(r, cfg.output.precision) << '\n';
    if (r.failed) std::cerr << "error: " << r.error << '\n';
    return r.failed ? kPartial : kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param, const std::string& range) {
    const RunConfig cfg = runner::load_config(config_path);
    const auto grid = runner::parse_range(param, range);
    const auto rows = runner::run_sweep(cfg, grid, runner::worker_count());
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.failed;

    const auto path = (fs::path(cfg.output.directory) / ("sweep_" + param + ".csv")).string();
    runner::write_csv(path, rows, cfg.output.precision);
    runner::write_manifest(cfg.output.directory, "sweep --param " + param + " --range " + range, cfg, {path}, failed,
                           {{"swept_param", param}});
    std::cout << "wrote " << path << " (" << rows.size() << " points, " << failed << " failed)\n";
    return failed ? kPartial : kOk;
}

int cmd_figure(const std::string& id, const std::string& out) {
    const auto res = runner::run_figure(id, out, runner::worker_count());
    for (const auto& f : res.files) std::cout << "wrote " << f << '\n';
    if (res.failed_points) std::cerr << res.failed_points << " of " << res.points << " points failed\n";
    return res.failed_points ? kPartial : kOk;
}

int cmd_convergence(const std::string& config_path, const std::string& n_list, bool automatic) {
    const RunConfig cfg = runner::load_config(config_path);
    const auto rep = automatic ? runner::convergence_auto(cfg) : runner::convergence_check(cfg, parse_n_list(n_list));

    const auto path = (fs::path(cfg.output.directory) / "convergence.csv").string();
    fs::create_directories(cfg.output.directory);
    std::ostringstream csv;
    csv << "n_fock,q_L,relative_change,converged\n";
    for (const auto& row : rep.rows)
        csv << row.n_fock << ',' << runner::format_number(row.q_L, cfg.output.precision) << ','
            << (row.relative_change ? runner::format_number(*row.relative_change, cfg.output.precision) : "") << ','
            << (row.converged ? "true" : "false") << '\n';
    {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + path + "'");
        f << csv.str();
    }
    std::vector<std::pair<std::string, std::string>> notes{
        {"converged", rep.converged ? "true" : "false"},
        {"tolerance", runner::format_number(runner::kConvergenceTol)}};
    if (rep.converged_at) notes.emplace_back("converged_at", std::to_string(*rep.converged_at));
    runner::write_manifest(cfg.output.directory, automatic ? "convergence --auto" : "convergence --n-list " + n_list,
                           cfg, {path}, 0, notes);
    std::cout << csv.str();
    if (!rep.converged)
        std::cerr << "not converged: relative change stayed above " << runner::kConvergenceTol << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state heat rectification and photon detection in the dissipative two-photon Rabi model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", runner::kVersion);

    std::string config, param, range, id, out, n_list = "2,5,10,20,40";
    bool automatic = false;

    auto* steady = app.add_subcommand("steady", "solve one forward/reverse pair");
    steady->add_option("--config", config, "JSON run configuration")->required();

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
    sweep->add_option("--config", config, "JSON run configuration")->required();
    sweep->add_option("--param", param, "T_L, T_R, theta, g or omega_R")->required();
    sweep->add_option("--range", range, "A:B:N, N evenly spaced values")->required();

    auto* figure = app.add_subcommand("figure", "emit the plot data of one figure");
    figure->add_option("--id", id, "fig2 ... fig11")->required();
    figure->add_option("--out", out, "output directory")->required();

    auto* conv = app.add_subcommand("convergence", "Fock truncation ladder");
    conv->add_option("--config", config, "JSON run configuration")->required();
    conv->add_option("--n-list", n_list, "ascending comma-separated N values");
    conv->add_flag("--auto", automatic, "double N until converged or N = 80");

    auto* compare = app.add_subcommand("compare-models", "rectification of the four coupling mechanisms against g");
    compare->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*steady) return cmd_steady(config);
        if (*sweep) return cmd_sweep(config, param, range);
        if (*figure) return cmd_figure(id, out);
        if (*conv) return cmd_convergence(config, n_list, automatic);
        if (*compare) return cmd_figure("fig10", out);
    } catch (const ValidationError& e) {
        std::cerr << "error [" << e.kind() << "]: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPartial;
    }
    return kOk;
}
