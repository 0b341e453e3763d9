#include "qrdiode/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qrdiode {

namespace {

bool is_rabi_kind(const std::string& kind) { return kind == "two_photon_rabi"; }

}  // namespace

void RunConfig::validate() const {
    if (!is_rabi_kind(model.kind)) parse_coupling_kind(model.kind);
    if (model.n_fock && *model.n_fock < 2) throw TruncationTooSmall("model.n_fock must be at least 2");
    BathSpec{Bath::L, baths.T_L, baths.gamma}.validate();
    BathSpec{Bath::R, baths.T_R, baths.gamma}.validate();
    if (!(numerics.deg_tol > 0.0)) throw ConfigError("numerics.deg_tol must be positive");
    if (!(numerics.nullspace_tol > 0.0)) throw ConfigError("numerics.nullspace_tol must be positive");
    if (numerics.rk4_dt && !(*numerics.rk4_dt > 0.0)) throw ConfigError("numerics.rk4_dt must be positive");
    if (numerics.t_final && !(*numerics.t_final > 0.0)) throw ConfigError("numerics.t_final must be positive");
    if (output.precision < 1 || output.precision > 17) throw ConfigError("output.precision must lie in [1, 17]");
    std::visit([](const auto& p) { p.validate(); }, model_params());
}

ModelParams RunConfig::model_params() const {
    if (is_rabi_kind(model.kind)) {
        RabiParams p;
        p.omega_L = model.omega_L;
        p.omega_R = model.omega_R;
        p.g = model.g;
        p.theta = model.theta;
        p.n_fock = model.n_fock.value_or(models::default_n_fock(model.g));
        return p;
    }
    TwoQubitParams p;
    p.omega_L = model.omega_L;
    p.omega_R = model.omega_R;
    p.g = model.g;
    p.kind = parse_coupling_kind(model.kind);
    return p;
}

SolveOptions RunConfig::solve_options() const {
    SolveOptions o;
    o.deg_tol_rel = numerics.deg_tol;
    o.nullspace_tol = numerics.nullspace_tol;
    return o;
}

namespace runner {

using json = nlohmann::json;

namespace {

template <class T>
void read(const json& section, const char* key, T& out, const std::string& where) {
    if (!section.contains(key)) return;
    try {
        out = section.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

template <class T>
void read_optional(const json& section, const char* key, std::optional<T>& out, const std::string& where) {
    if (!section.contains(key) || section.at(key).is_null()) return;
    T v{};
    read(section, key, v, where);
    out = v;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) throw ConfigError("unknown key '" + where + "." + item.key() + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(doc, {"model", "baths", "numerics", "output"}, "config");

    RunConfig cfg;
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        reject_unknown(m, {"kind", "omega_L", "omega_R", "g", "theta", "n_fock"}, "model");
        read(m, "kind", cfg.model.kind, "model");
        read(m, "omega_L", cfg.model.omega_L, "model");
        read(m, "omega_R", cfg.model.omega_R, "model");
        read(m, "g", cfg.model.g, "model");
        read(m, "theta", cfg.model.theta, "model");
        if (m.contains("n_fock") && !(m["n_fock"].is_string() && m["n_fock"] == "auto"))
            read_optional(m, "n_fock", cfg.model.n_fock, "model");
    }
    if (doc.contains("baths")) {
        const auto& b = doc["baths"];
        reject_unknown(b, {"gamma", "T_L", "T_R"}, "baths");
        read(b, "gamma", cfg.baths.gamma, "baths");
        read(b, "T_L", cfg.baths.T_L, "baths");
        read(b, "T_R", cfg.baths.T_R, "baths");
    }
    if (doc.contains("numerics")) {
        const auto& n = doc["numerics"];
        reject_unknown(n, {"deg_tol", "nullspace_tol", "oracle", "rk4_dt", "t_final"}, "numerics");
        read(n, "deg_tol", cfg.numerics.deg_tol, "numerics");
        read(n, "nullspace_tol", cfg.numerics.nullspace_tol, "numerics");
        read(n, "oracle", cfg.numerics.oracle, "numerics");
        read_optional(n, "rk4_dt", cfg.numerics.rk4_dt, "numerics");
        read_optional(n, "t_final", cfg.numerics.t_final, "numerics");
    }
    if (doc.contains("output")) {
        const auto& o = doc["output"];
        reject_unknown(o, {"directory", "precision"}, "output");
        read(o, "directory", cfg.output.directory, "output");
        read(o, "precision", cfg.output.precision, "output");
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

json config_json(const RunConfig& cfg) {
    json j;
    j["model"] = {{"kind", cfg.model.kind},   {"omega_L", cfg.model.omega_L}, {"omega_R", cfg.model.omega_R},
                  {"g", cfg.model.g},         {"theta", cfg.model.theta}};
    if (cfg.model.n_fock) j["model"]["n_fock"] = *cfg.model.n_fock;
    else j["model"]["n_fock"] = "auto";
    j["baths"] = {{"gamma", cfg.baths.gamma}, {"T_L", cfg.baths.T_L}, {"T_R", cfg.baths.T_R}};
    j["numerics"] = {{"deg_tol", cfg.numerics.deg_tol},
                     {"nullspace_tol", cfg.numerics.nullspace_tol},
                     {"oracle", cfg.numerics.oracle},
                     {"rk4_dt", cfg.numerics.rk4_dt ? json(*cfg.numerics.rk4_dt) : json(nullptr)},
                     {"t_final", cfg.numerics.t_final ? json(*cfg.numerics.t_final) : json(nullptr)}};
    j["output"] = {{"directory", cfg.output.directory}, {"precision", cfg.output.precision}};
    return j;
}

}  // namespace

std::string config_to_json(const RunConfig& cfg, int indent) { return config_json(cfg).dump(indent); }

// --- sweeps ------------------------------------------------------------------------

void SweepGrid::validate() const {
    static const std::set<std::string> names{"T_L", "T_R", "theta", "g", "omega_R"};
    if (!names.count(param)) throw ConfigError("cannot sweep '" + param + "'; expected T_L, T_R, theta, g or omega_R");
    if (values.size() < 2) throw ConfigError("a sweep needs at least two values");
    for (std::size_t k = 1; k < values.size(); ++k)
        if (!(values[k] > values[k - 1])) throw ConfigError("sweep values must be strictly increasing");
}

std::vector<double> linspace(double start, double stop, int count) {
    if (count < 2) throw ConfigError("linspace needs count >= 2");
    std::vector<double> v(static_cast<std::size_t>(count));
    const double step = (stop - start) / (count - 1);
    for (int k = 0; k < count; ++k) v[static_cast<std::size_t>(k)] = start + step * k;
    v.back() = stop;
    return v;
}

SweepGrid parse_range(const std::string& param, const std::string& range) {
    const auto a = range.find(':');
    const auto b = a == std::string::npos ? a : range.find(':', a + 1);
    if (b == std::string::npos || range.find(':', b + 1) != std::string::npos)
        throw ConfigError("range must look like A:B:N, got '" + range + "'");
    double start = 0.0, stop = 0.0;
    int count = 0;
    try {
        std::size_t used = 0;
        const std::string sa = range.substr(0, a), sb = range.substr(a + 1, b - a - 1), sn = range.substr(b + 1);
        start = std::stod(sa, &used);
        if (used != sa.size()) throw std::invalid_argument(sa);
        stop = std::stod(sb, &used);
        if (used != sb.size()) throw std::invalid_argument(sb);
        count = std::stoi(sn, &used);
        if (used != sn.size()) throw std::invalid_argument(sn);
    } catch (const std::logic_error&) {
        throw ConfigError("range must look like A:B:N, got '" + range + "'");
    }
    SweepGrid grid{param, linspace(start, stop, count)};
    grid.validate();
    return grid;
}

RunConfig with_param(RunConfig cfg, const std::string& param, double value) {
    if (param == "T_L") cfg.baths.T_L = value;
    else if (param == "T_R") cfg.baths.T_R = value;
    else if (param == "theta") cfg.model.theta = value;
    else if (param == "g") cfg.model.g = value;
    else if (param == "omega_R") cfg.model.omega_R = value;
    else throw ConfigError("cannot sweep '" + param + "'");
    return cfg;
}

ObservableRecord run_point(const RunConfig& cfg, double* oracle_deviation) {
    cfg.validate();
    const ModelParams params = cfg.model_params();
    ObservableRecord rec =
        observables::evaluate_pair(params, cfg.baths.T_L, cfg.baths.T_R, cfg.baths.gamma, cfg.solve_options());

    if (cfg.numerics.oracle) {
        // Time runs in units of 1/gamma: the steady state does not depend on gamma.
        const auto sol = steady::solve_model(models::build_model(params), {Bath::L, cfg.baths.T_L, cfg.baths.gamma},
                                             {Bath::R, cfg.baths.T_R, cfg.baths.gamma}, cfg.solve_options());
        const double scale = 1.0 / cfg.baths.gamma;
        const dissipation::Liouvillian l(sol.basis, sol.channels, true, scale);
        const double dt = cfg.numerics.rk4_dt.value_or(steady::default_step(l));
        const double t_final = cfg.numerics.t_final.value_or(steady::default_horizon(sol.rates, scale));
        const Eigen::Index d = sol.basis->dim();
        const auto ev = steady::evolve_to_steady(l, QOperator::Identity(d, d) / static_cast<double>(d), t_final, dt);
        const double dev = (ev.populations - sol.state.populations).cwiseAbs().maxCoeff();
        if (oracle_deviation) *oracle_deviation = dev;
        if (dev > 1e-6)
            throw NotConverged("time-evolution oracle disagrees with the rate-matrix steady state by " +
                               format_number(dev, 3));
    }
    return rec;
}

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("QRDIODE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, hw));
    }
    return hw;
}

namespace {

void annotate_undefined(PointResult& r) {
    if (!r.record) return;
    std::string msg;
    if (!r.record->rectification) msg = "R undefined: |q_f - q_r| < 1e-15";
    if (!r.record->photon_asymmetry) {
        if (!msg.empty()) msg += "; ";
        msg += "R_n undefined: |D_f + D_r| < 1e-15";
    }
    r.error = msg;
}

}  // namespace

std::vector<PointResult> run_sweep(const RunConfig& cfg, const SweepGrid& grid, int threads) {
    grid.validate();
    for (double v : grid.values) with_param(cfg, grid.param, v).validate();

    return parallel_map(grid.values.size(), threads, [&](std::size_t k) {
        PointResult r;
        r.swept_value = grid.values[k];
        try {
            double dev = -1.0;
            r.record = run_point(with_param(cfg, grid.param, r.swept_value), &dev);
            r.oracle_deviation = dev;
            annotate_undefined(r);
        } catch (const std::exception& e) {
            r.record.reset();
            r.failed = true;
            r.error = e.what();
        }
        return r;
    });
}

// --- CSV ----------------------------------------------------------------------------

const std::vector<std::string> kCsvColumns{"swept_param", "T_L",      "T_R",      "q_L", "q_R",    "q_f",
                                           "q_r",         "R",        "D_f",      "D_r", "gammaD_f", "gammaD_r",
                                           "R_n",         "n_fock",   "residual", "error"};

std::string format_number(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else if (c == '\n' || c == '\r') out += ' ';
        else out += c;
    }
    return out + "\"";
}

}  // namespace

std::string csv_header(bool with_series) {
    std::string h;
    for (std::size_t k = 0; k < kCsvColumns.size(); ++k) h += (k ? "," : "") + kCsvColumns[k];
    if (with_series) h += ",series";
    return h;
}

std::string csv_row(const PointResult& r, int precision, const std::string* series) {
    auto num = [precision](double v) { return format_number(v, precision); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string("nan"); };

    std::vector<std::string> f(kCsvColumns.size());
    f[0] = num(r.swept_value);
    if (r.record) {
        const auto& rec = *r.record;
        f[1] = num(rec.T_L);
        f[2] = num(rec.T_R);
        f[3] = num(rec.q_L);
        f[4] = num(rec.q_R);
        f[5] = num(rec.q_f);
        f[6] = num(rec.q_r);
        f[7] = opt(rec.rectification);
        f[8] = num(rec.photon_rate_f);
        f[9] = num(rec.photon_rate_r);
        f[10] = num(rec.gamma_photon_rate_f());
        f[11] = num(rec.gamma_photon_rate_r());
        f[12] = opt(rec.photon_asymmetry);
        if (rec.n_fock > 0) f[13] = std::to_string(rec.n_fock);
        f[14] = num(rec.residual);
    }
    f[15] = csv_field(r.error);

    std::string line;
    for (std::size_t k = 0; k < f.size(); ++k) line += (k ? "," : "") + f[k];
    if (series) line += "," + csv_field(*series);
    return line;
}

namespace {

std::ofstream open_output(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<PointResult>& rows, int precision) {
    auto out = open_output(path);
    out << csv_header(false) << '\n';
    for (const auto& r : rows) out << csv_row(r, precision) << '\n';
}

void write_series_csv(const std::string& path, const std::vector<SeriesRows>& series, int precision) {
    auto out = open_output(path);
    out << csv_header(true) << '\n';
    for (const auto& s : series)
        for (const auto& r : s.rows) out << csv_row(r, precision, &s.series) << '\n';
}

void write_manifest(const std::string& dir, const std::string& command, const std::optional<RunConfig>& cfg,
                    const std::vector<std::string>& files, std::size_t failed_points,
                    const std::vector<std::pair<std::string, std::string>>& notes) {
    json m;
    m["command"] = command;
    m["config"] = cfg ? config_json(*cfg) : json(nullptr);
    m["versions"] = {{"qrdiode", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", __VERSION__},
                     {"cplusplus", static_cast<long>(__cplusplus)},
                     {"extended_precision_digits", kExtendedDigits}};
    m["units"] = {{"energy", "omega_0 (omega_0 / 2pi = 20 GHz)"},
                  {"temperature", "hbar omega_0 / k_B"},
                  {"heat_current", "hbar omega_0^2"},
                  {"photon_rate", "omega_0^2 (D and gamma D, gamma dimensionless)"}};
    m["columns"] = kCsvColumns;
    for (const auto& [k, v] : notes) m[k] = v;
    std::vector<std::string> names;
    for (const auto& f : files) names.push_back(std::filesystem::path(f).filename().string());
    m["files"] = names;
    m["failed_points"] = failed_points;
    auto out = open_output((std::filesystem::path(dir) / "manifest.json").string());
    out << m.dump(2) << '\n';
}

// --- truncation convergence ------------------------------------------------------------

namespace {

// Currents at or below `floor` are rounding noise of the extended-precision
// solve and count as exact zeros.
double relative_change(double now, double before, double floor) {
    const double den = std::max(std::abs(now), std::abs(before));
    return den <= floor ? 0.0 : std::abs(now - before) / den;
}

ConvergenceRow ladder_step(const RunConfig& cfg, int n, const std::optional<double>& previous, double tol) {
    RunConfig c = cfg;
    c.model.n_fock = n;
    const auto rec = observables::evaluate_pair(c.model_params(), c.baths.T_L, c.baths.T_R, c.baths.gamma,
                                                c.solve_options());
    ConvergenceRow row;
    row.n_fock = n;
    row.q_L = rec.q_L;
    if (previous) {
        const double floor = kCurrentNoiseFloor * c.baths.gamma * std::max(c.model.omega_L, c.model.omega_R);
        row.relative_change = relative_change(rec.q_L, *previous, floor);
        row.converged = *row.relative_change < tol;
    }
    return row;
}

void require_rabi(const RunConfig& cfg) {
    if (!is_rabi_kind(cfg.model.kind)) throw ConfigError("convergence applies to the two-photon Rabi model only");
    cfg.validate();
}

}  // namespace

ConvergenceReport convergence_check(const RunConfig& cfg, const std::vector<int>& n_list, double tol) {
    require_rabi(cfg);
    if (n_list.empty()) throw ConfigError("empty N list");
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        if (n_list[k] < 2) throw TruncationTooSmall("every N must be at least 2");
        if (k && n_list[k] <= n_list[k - 1]) throw ConfigError("N list must be strictly ascending");
    }
    ConvergenceReport rep;
    std::optional<double> prev;
    for (int n : n_list) {
        rep.rows.push_back(ladder_step(cfg, n, prev, tol));
        prev = rep.rows.back().q_L;
        if (rep.rows.back().converged && !rep.converged_at) rep.converged_at = n;
    }
    rep.converged = rep.rows.size() > 1 && rep.rows.back().converged;
    return rep;
}

ConvergenceReport convergence_auto(const RunConfig& cfg, double tol) {
    require_rabi(cfg);
    ConvergenceReport rep;
    std::optional<double> prev;
    int n = std::max(2, cfg.model.n_fock.value_or(10));
    while (true) {
        rep.rows.push_back(ladder_step(cfg, n, prev, tol));
        prev = rep.rows.back().q_L;
        if (rep.rows.back().converged) {
            rep.converged = true;
            rep.converged_at = n;
            break;
        }
        if (n >= kMaxAutoFock) break;
        n = std::min(2 * n, kMaxAutoFock);
    }
    return rep;
}

}  // namespace runner
}  // namespace qrdiode
