// Figure pipelines. Every panel is a CSV of sweep rows, tagged by series.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <tuple>

#include "qrdiode/runner.hpp"

namespace qrdiode::runner {

namespace {

constexpr double kFixedT = 0.5;
constexpr double kPi = std::numbers::pi;

std::vector<double> temperature_grid() { return linspace(0.05, 1.0, 20); }

std::string label(const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.6g", name, v);
    return buf;
}

RunConfig rabi(double g, double omega_R, double theta = 0.0) {
    RunConfig c;
    c.model.g = g;
    c.model.omega_R = omega_R;
    c.model.theta = theta;
    return c;
}

struct Series {
    std::string name;
    RunConfig cfg;
};

// One panel: a sweep of `param` over `values` for each series.
struct Panel {
    std::string file;
    std::string param;
    std::vector<double> values;
    std::vector<Series> series;
    int same_as{-1};  // index of an earlier panel with identical rows
};

// Heat current / photon panel triple: forward currents against T_L at
// T_R = 0.5 (first), reverse against T_R at T_L = 0.5 (second), and the
// coefficient panel, which reuses the forward sweep (third).
void temperature_triple(std::vector<Panel>& out, const std::string& stem, const char letters[3],
                        const std::vector<Series>& series) {
    std::vector<Series> fwd = series, rev = series;
    for (auto& s : fwd) s.cfg.baths.T_R = kFixedT;
    for (auto& s : rev) s.cfg.baths.T_L = kFixedT;
    out.push_back({stem + letters[0] + ".csv", "T_L", temperature_grid(), fwd});
    out.push_back({stem + letters[1] + ".csv", "T_R", temperature_grid(), rev});
    out.push_back({stem + letters[2] + ".csv", "T_L", temperature_grid(), fwd, static_cast<int>(out.size()) - 2});
}

std::vector<Series> theta_series(double g, double omega_R) {
    std::vector<Series> s;
    for (double th : {0.0, kPi / 8.0, kPi / 4.0}) s.push_back({label("theta", th), rabi(g, omega_R, th)});
    return s;
}

std::vector<Series> omega_r_series(double g, std::initializer_list<double> values) {
    std::vector<Series> s;
    for (double w : values) s.push_back({label("omega_R", w), rabi(g, w)});
    return s;
}

std::vector<Series> g_series(double omega_R) {
    std::vector<Series> s;
    for (double g : {0.015, 0.05, 0.15, 0.3, 0.45}) s.push_back({label("g", g), rabi(g, omega_R)});
    return s;
}

std::vector<Panel> panels_for(const std::string& id) {
    std::vector<Panel> p;
    if (id == "fig2" || id == "fig3") {
        const double g = id == "fig2" ? 0.015 : 0.45;
        temperature_triple(p, id, "abc", theta_series(g, 0.1));
        temperature_triple(p, id, "def", theta_series(g, 2.0));
    } else if (id == "fig4" || id == "fig8") {
        if (id == "fig4") {
            temperature_triple(p, id, "abc", omega_r_series(0.015, {0.05, 0.1, 0.5, 1.0, 2.0, 5.0}));
            temperature_triple(p, id, "def", omega_r_series(0.45, {0.05, 0.1, 0.5, 1.0, 2.0, 5.0}));
        } else {
            temperature_triple(p, id, "abc", omega_r_series(0.45, {0.05, 0.1, 0.5}));
            temperature_triple(p, id, "def", omega_r_series(0.45, {1.0, 2.0, 5.0}));
        }
    } else if (id == "fig5" || id == "fig7") {
        temperature_triple(p, id, "abc", g_series(0.1));
        temperature_triple(p, id, "def", g_series(2.0));
    } else if (id == "fig6") {
        temperature_triple(p, id, "abc", theta_series(0.015, 0.1));
        temperature_triple(p, id, "def", theta_series(0.015, 2.0));
        temperature_triple(p, id, "ghi", theta_series(0.45, 0.1));
        temperature_triple(p, id, "jkl", theta_series(0.45, 2.0));
    } else if (id == "fig9") {
        for (const auto& [file, w] : {std::pair{"fig9a.csv", 0.1}, std::pair{"fig9b.csv", 2.0}}) {
            Panel panel{file, "T_L", temperature_grid(), {}};
            for (int n : {2, 5, 10, 20}) {
                RunConfig c = rabi(0.015, w);
                c.model.n_fock = n;
                c.baths.T_R = kFixedT;
                panel.series.push_back({"N=" + std::to_string(n), c});
            }
            p.push_back(panel);
        }
    } else if (id == "fig10") {
        Panel panel{"fig10.csv", "g", linspace(0.005, 0.45, 20), {}};
        for (double w : {0.1, 2.0}) panel.series.push_back({"two_photon_rabi " + label("omega_R", w), rabi(0.015, w)});
        for (const char* kind : {"ising_zz", "asymmetric_zx", "dm"})
            for (double w : {1.0, 0.5}) {
                RunConfig c;
                c.model.kind = kind;
                c.model.omega_R = w;
                panel.series.push_back({std::string(kind) + " " + label("omega_R", w), c});
            }
        for (auto& s : panel.series) {
            s.cfg.baths.T_L = 0.1;
            s.cfg.baths.T_R = 0.5;
        }
        p.push_back(panel);
    }
    return p;
}

// Allowed transitions of the N = 2 truncation (no temperature dependence).
std::string write_transitions(const std::string& path, double omega_R) {
    RabiParams rp;
    rp.g = 0.015;
    rp.omega_R = omega_R;
    rp.n_fock = 2;
    const auto sol = steady::solve_model(models::build_two_photon_rabi(rp), {Bath::L, kFixedT, 1e-4},
                                         {Bath::R, kFixedT, 1e-4});
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "bath,i,j,E_i,E_j,omega,matrix_element_sq\n";
    for (const auto& ch : sol.channels)
        for (const auto& m : ch.members)
            out << to_string(ch.bath) << ',' << m.i << ',' << m.j << ',' << format_number(sol.basis->energies(m.i))
                << ',' << format_number(sol.basis->energies(m.j)) << ',' << format_number(m.omega) << ','
                << format_number(std::norm(m.amplitude)) << '\n';
    return path;
}

// Transition ledger against temperature for N = 2.
std::size_t write_ledger(const std::string& path, double omega_R, bool forward, int threads) {
    RabiParams rp;
    rp.g = 0.015;
    rp.omega_R = omega_R;
    rp.n_fock = 2;
    const ModelSpec model = models::build_two_photon_rabi(rp);
    const auto temps = temperature_grid();

    const auto blocks = parallel_map(temps.size(), threads, [&](std::size_t k) {
        const double t_l = forward ? temps[k] : kFixedT, t_r = forward ? kFixedT : temps[k];
        std::string text;
        try {
            const auto sol = steady::solve_model(model, {Bath::L, t_l, 1e-4}, {Bath::R, t_r, 1e-4});
            for (const auto& e : observables::transition_ledger(sol.state, sol.channels))
                text += format_number(t_l) + ',' + format_number(t_r) + ',' + to_string(e.bath) + ',' +
                        std::to_string(e.i) + ',' + std::to_string(e.j) + ',' + format_number(e.omega) + ',' +
                        format_number(e.net_rate) + ',' + format_number(e.energy_flux_contribution) + ",\n";
            return std::pair{text, false};
        } catch (const std::exception& ex) {
            std::string msg = ex.what();
            for (auto& c : msg)
                if (c == ',' || c == '\n') c = ';';
            return std::pair{format_number(t_l) + ',' + format_number(t_r) + ",,,,,,," + msg + "\n", true};
        }
    });

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "T_L,T_R,bath,i,j,omega,net_rate,energy_flux_contribution,error\n";
    std::size_t failed = 0;
    for (const auto& [text, bad] : blocks) {
        out << text;
        failed += bad;
    }
    return failed;
}

}  // namespace

std::vector<std::string> figure_ids() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
}

FigureResult run_figure(const std::string& id, const std::string& out_dir, int threads) {
    const auto ids = figure_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
        throw ConfigError("unknown figure id '" + id + "'");
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    FigureResult res;
    if (id == "fig11") {
        for (const auto& [letter, w, fwd] : {std::tuple{"a", 0.1, true}, std::tuple{"b", 0.1, false},
                                             std::tuple{"c", 2.0, true}, std::tuple{"d", 2.0, false}}) {
            const auto path = (dir / ("fig11" + std::string(letter) + ".csv")).string();
            res.failed_points += write_ledger(path, w, fwd, threads);
            res.points += temperature_grid().size();
            res.files.push_back(path);
        }
    } else {
        const auto panels = panels_for(id);
        std::vector<std::vector<SeriesRows>> computed;
        for (const auto& panel : panels) {
            std::vector<SeriesRows> rows;
            if (panel.same_as >= 0) rows = computed[static_cast<std::size_t>(panel.same_as)];
            else for (const auto& s : panel.series) {
                auto r = run_sweep(s.cfg, {panel.param, panel.values}, threads);
                for (const auto& pr : r) {
                    ++res.points;
                    res.failed_points += pr.failed;
                }
                rows.push_back({s.name, std::move(r)});
            }
            const auto path = (dir / panel.file).string();
            write_series_csv(path, rows);
            computed.push_back(std::move(rows));
            res.files.push_back(path);
        }
        if (id == "fig9") {
            res.files.push_back(write_transitions((dir / "fig9c.csv").string(), 0.1));
            res.files.push_back(write_transitions((dir / "fig9d.csv").string(), 2.0));
        }
    }
    write_manifest(out_dir, "figure --id " + id, std::nullopt, res.files, res.failed_points,
                   {{"figure", id}, {"temperature_grid", "linspace(0.05, 1.0, 20)"}, {"fixed_temperature", "0.5"}});
    return res;
}

}  // namespace qrdiode::runner
