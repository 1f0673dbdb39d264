#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <openssl/sha.h>

#include "euqoe/engine.hpp"
#include "euqoe/oracle.hpp"
#include "euqoe/protocol.hpp"
#include "euqoe/quadrature.hpp"
#include "euqoe/wightman.hpp"

namespace fs = std::filesystem;
using namespace euqoe;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitVerification = 5;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct SweepAxis {
    std::string name;
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;
    bool log_spacing = false;
};

struct RunConfig {
    CycleConfig cycle;
    std::string parity = "auto";
    std::vector<SweepAxis> axes;
    std::string cache_dir;

    void finalize() {
        if (parity == "auto") {
            cycle.parity.reset();
        } else if (parity == "symmetric") {
            cycle.parity = EntangledParity::symmetric;
        } else if (parity == "antisymmetric") {
            cycle.parity = EntangledParity::antisymmetric;
        } else {
            throw ConfigError("state.parity must be auto|symmetric|antisymmetric");
        }
        if (const char* env = std::getenv("EUQOE_CACHE_DIR")) cache_dir = env;
        cycle.validate();
        if (axes.size() > 3) throw ConfigError("at most 3 sweep axes supported");
        for (const auto& ax : axes) {
            if (ax.count < 1) throw ConfigError("sweep.count must be positive");
            if (ax.log_spacing && !(ax.lo > 0.0))
                throw ConfigError("log spacing needs a positive sweep.lo");
        }
    }
};

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("malformed number '" + s + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

Dimension parse_dimension(const std::string& s) {
    if (s == "1p1") return Dimension::d1p1;
    if (s == "1p3") return Dimension::d1p3;
    throw ConfigError("engine.dimension must be 1p1|1p3");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto axis_field = [&](int which) -> SweepAxis& {
        if (static_cast<std::size_t>(which) >= cfg.axes.size())
            cfg.axes.resize(which + 1);
        return cfg.axes[which];
    };
    auto set_tol = [&](bool rel, double v) {
        EngineTolerances t = cfg.cycle.effective_tol();
        (rel ? t.rel : t.abs) = v;
        cfg.cycle.tol = t;
    };
    if (key == "engine.omega1") cfg.cycle.omega1 = parse_double(value);
    else if (key == "engine.omega2") cfg.cycle.omega2 = parse_double(value);
    else if (key == "engine.alpha_aH") cfg.cycle.alpha_aH = parse_double(value);
    else if (key == "engine.aH2") cfg.cycle.a_h2 = parse_double(value);
    else if (key == "engine.tau_a") cfg.cycle.tau_a = parse_double(value);
    else if (key == "engine.dimension") cfg.cycle.dimension = parse_dimension(value);
    else if (key == "state.p") cfg.cycle.p = parse_double(value);
    else if (key == "state.parity") cfg.parity = value;
    else if (key == "tol.rel") set_tol(true, parse_double(value));
    else if (key == "tol.abs") set_tol(false, parse_double(value));
    else if (key == "cache.dir") cfg.cache_dir = value;
    else if (key == "sweep.axis") {
        auto items = split_csv(value);
        for (std::size_t i = 0; i < items.size(); ++i) axis_field(i).name = items[i];
    } else if (key == "sweep.lo") {
        auto items = split_csv(value);
        for (std::size_t i = 0; i < items.size(); ++i)
            axis_field(i).lo = parse_double(items[i]);
    } else if (key == "sweep.hi") {
        auto items = split_csv(value);
        for (std::size_t i = 0; i < items.size(); ++i)
            axis_field(i).hi = parse_double(items[i]);
    } else if (key == "sweep.count") {
        auto items = split_csv(value);
        for (std::size_t i = 0; i < items.size(); ++i)
            axis_field(i).count = static_cast<std::size_t>(std::stoull(items[i]));
    } else if (key == "sweep.spacing") {
        auto items = split_csv(value);
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i] != "linear" && items[i] != "log")
                throw ConfigError("sweep.spacing must be linear|log");
            axis_field(i).log_spacing = items[i] == "log";
        }
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        try {
            apply_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_sets(RunConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_key(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
}

std::string bare_axis(std::string axis) {
    if (axis.rfind("engine.", 0) == 0) return axis.substr(7);  // canonical key form
    if (axis.rfind("state.", 0) == 0) return axis.substr(6);
    return axis;
}

void set_axis_value(CycleConfig& c, std::string axis, double v) {
    axis = bare_axis(axis);
    if (axis == "omega1") c.omega1 = v;
    else if (axis == "omega2") c.omega2 = v;
    else if (axis == "alpha_aH") c.alpha_aH = v;
    else if (axis == "aH2") c.a_h2 = v;
    else if (axis == "tau_a") c.tau_a = v;
    else if (axis == "p") c.p = v;
    else throw ConfigError("unknown sweep axis '" + axis + "'");
}

double axis_value(const SweepAxis& ax, std::size_t i) {
    if (ax.count == 1) return ax.lo;
    const double t = static_cast<double>(i) / static_cast<double>(ax.count - 1);
    if (ax.log_spacing) return ax.lo * std::pow(ax.hi / ax.lo, t);
    return ax.lo + (ax.hi - ax.lo) * t;
}

// ---- result rows and cache ----------------------------------------------

const char* kDataHeader =
    "i1,i1_err,trace_v,trace_aH,trace_aC,w_total,q2,q4,conservation_residual,"
    "eta0,eta_E,eta_E_closed_form,parity,valid";

std::string row_data_csv(const CycleReport& r) {
    std::string parity = r.parity_degenerate
                             ? "degenerate"
                             : (r.parity == EntangledParity::symmetric ? "symmetric"
                                                                       : "antisymmetric");
    std::string out;
    for (double v : {r.i1, r.i1_error, r.trace_v, r.trace_aH, r.trace_aC, r.w_total,
                     r.q2, r.q4, r.residual, r.eta_0, r.eta_e, r.eta_e_closed})
        out += fmt(v) + ",";
    out += parity + ",";
    out += r.valid ? "true" : "false";
    return out;
}

std::string failed_row_csv(const std::string& reason) {
    (void)reason;
    std::string out;
    for (int i = 0; i < 12; ++i) out += "nan,";
    out += "degenerate,false";
    return out;
}

std::string sha256_hex(const std::string& s) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(s.data()), s.size(), digest);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * SHA256_DIGEST_LENGTH);
    for (unsigned char b : digest) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xf]);
    }
    return out;
}

std::string cache_key(const CycleConfig& c, const std::string& parity) {
    const EngineTolerances t = c.effective_tol();
    std::string s;
    s += "omega1=" + fmt(c.omega1) + ";omega2=" + fmt(c.omega2);
    s += ";alpha_aH=" + fmt(c.alpha_aH) + ";aH2=" + fmt(c.a_h2);
    s += ";tau_a=" + fmt(c.tau_a) + ";mu=" + fmt(c.mu) + ";p=" + fmt(c.p);
    s += ";parity=" + parity;
    s += ";dimension=" + std::string(c.dimension == Dimension::d1p1 ? "1p1" : "1p3");
    s += ";tol_rel=" + fmt(t.rel) + ";tol_abs=" + fmt(t.abs);
    return sha256_hex(s);
}

std::optional<std::string> cache_read(const std::string& dir, const std::string& key) {
    if (dir.empty()) return std::nullopt;
    std::ifstream in(fs::path(dir) / key);
    if (!in) return std::nullopt;
    std::string line;
    std::getline(in, line);
    if (line.empty()) return std::nullopt;
    return line;
}

void cache_write(const std::string& dir, const std::string& key, const std::string& row) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path final_path = fs::path(dir) / key;
    const fs::path tmp_path =
        fs::path(dir) / (key + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp_path, std::ios::trunc);
        out << row << "\n";
    }
    fs::rename(tmp_path, final_path, ec);
    if (ec) fs::remove(tmp_path, ec);
}

struct RowResult {
    std::string params_csv;
    std::string data_csv;
    bool failed = false;
};

std::atomic<std::size_t> g_engine_evaluations{0};

RowResult compute_row(const RunConfig& cfg, const CycleConfig& point,
                      const std::vector<std::string>& axis_names) {
    RowResult row;
    for (const auto& raw : axis_names) {
        const std::string name = bare_axis(raw);
        double v = 0.0;
        if (name == "omega1") v = point.omega1;
        else if (name == "omega2") v = point.omega2;
        else if (name == "alpha_aH") v = point.alpha_aH;
        else if (name == "aH2") v = point.a_h2;
        else if (name == "tau_a") v = point.tau_a;
        else if (name == "p") v = point.p;
        row.params_csv += fmt(v) + ",";
    }
    const std::string key = cache_key(point, cfg.parity);
    if (auto hit = cache_read(cfg.cache_dir, key)) {
        row.data_csv = *hit;
        return row;
    }
    try {
        const CycleReport rep = run_cycle(point);
        g_engine_evaluations += rep.evaluations;
        row.data_csv = row_data_csv(rep);
        cache_write(cfg.cache_dir, key, row.data_csv);
    } catch (const std::exception& e) {
        row.data_csv = failed_row_csv(e.what());
        row.failed = true;
    }
    return row;
}

// ---- subcommands ----------------------------------------------------------

int cmd_efficiency(const RunConfig& cfg) {
    const RowResult row = compute_row(cfg, cfg.cycle, {});
    if (row.failed) {
        std::cerr << "numeric failure: " << row.data_csv << "\n";
        return kExitNumeric;
    }
    std::cout << kDataHeader << "\n" << row.data_csv << "\n";
    const auto fields = split_csv(row.data_csv);
    const double eta_e = parse_double(fields[10]);
    const double eta_closed = parse_double(fields[11]);
    const double dev =
        std::abs(eta_e - eta_closed) / std::max(std::abs(eta_closed), 1e-300);
    std::cout << "eta_E=" << fmt(eta_e) << " eta_E_closed_form=" << fmt(eta_closed)
              << " rel_deviation=" << fmt(dev) << "\n";
    std::cerr << "engine_evaluations=" << g_engine_evaluations.load() << "\n";
    return 0;
}

void write_gnuplot_template(const std::string& csv_path, const std::string& axis) {
    std::ofstream gp(csv_path + ".gp", std::ios::trunc);
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel '" << axis << "'\n"
       << "set ylabel 'eta_E'\n"
       << "plot '" << csv_path << "' using '" << axis << "':'eta_E' with linespoints\n";
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_path, unsigned workers) {
    if (cfg.axes.empty()) throw ConfigError("sweep requires at least one sweep axis");
    std::vector<std::string> axis_names;
    std::size_t total = 1;
    for (const auto& ax : cfg.axes) {
        if (ax.name.empty()) throw ConfigError("sweep axis missing a name");
        axis_names.push_back(ax.name);
        total *= ax.count;
    }

    std::vector<CycleConfig> points(total, cfg.cycle);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t a = cfg.axes.size(); a-- > 0;) {
            const auto& ax = cfg.axes[a];
            set_axis_value(points[idx], ax.name, axis_value(ax, rem % ax.count));
            rem /= ax.count;
        }
    }

    std::vector<RowResult> rows(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
            rows[i] = compute_row(cfg, points[i], axis_names);
    };
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::string header;
    for (const auto& name : axis_names) header += name + ",";
    header += kDataHeader;

    std::ostringstream body;
    body << header << "\n";
    std::size_t failures = 0;
    for (const auto& row : rows) {
        body << row.params_csv << row.data_csv << "\n";
        if (row.failed) ++failures;
    }

    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(out_path, std::ios::trunc | std::ios::binary);
        if (!out) throw ConfigError("cannot open output file '" + out_path + "'");
        out << body.str();
        write_gnuplot_template(out_path, axis_names.front());
    }
    std::cerr << "engine_evaluations=" << g_engine_evaluations.load() << "\n";
    if (total > 0 && failures == total) {
        std::cerr << "all " << total << " rows failed\n";
        return kExitNumeric;
    }
    return 0;
}

int cmd_protocol(const RunConfig& cfg) {
    const ProtocolRecord rec =
        build_protocol(cfg.cycle.omega1, cfg.cycle.omega2, cfg.cycle.alpha_aH,
                       cfg.cycle.a_h2, cfg.cycle.tau_a, cfg.cycle.dimension);
    auto pf = [](bool b) { return b ? "pass" : "fail"; };
    std::cout << "omega1 = " << fmt(rec.omega1) << "\n"
              << "omega2 = " << fmt(rec.omega2) << "\n"
              << "alpha_aH = " << fmt(rec.alpha_aH) << "\n"
              << "alpha_aC = " << fmt(rec.alpha_aC) << "\n"
              << "tau_a = " << fmt(rec.tau_a) << "\n"
              << "i1 = " << fmt(rec.i1) << " +- " << fmt(rec.i1_error) << "\n"
              << "parity = "
              << (rec.parity_degenerate
                      ? "degenerate"
                      : (rec.parity == EntangledParity::symmetric ? "symmetric"
                                                                  : "antisymmetric"))
              << "\n"
              << "trace_v = " << fmt(rec.trace_v) << "\n"
              << "trace_aH = " << fmt(rec.trace_aH) << "\n"
              << "trace_aC = " << fmt(rec.trace_aC) << "\n"
              << "eta_E = " << fmt(rec.eta_E) << "\n"
              << "check constraint_chain: " << pf(rec.checks.constraint_chain) << "\n"
              << "check positivity_v: " << pf(rec.checks.positivity_v) << "\n"
              << "check positivity_aH: " << pf(rec.checks.positivity_aH) << "\n"
              << "check positivity_aC: " << pf(rec.checks.positivity_aC) << "\n"
              << "check conservation: " << pf(rec.checks.conservation) << "\n"
              << "check eta_below_one: " << pf(rec.checks.eta_below_one) << "\n"
              << "valid = " << (rec.valid ? "true" : "false") << "\n";
    if (!rec.note.empty()) std::cout << "note = " << rec.note << "\n";
    std::cerr << "engine_evaluations=" << g_engine_evaluations.load() << "\n";
    return rec.valid ? 0 : kExitInfeasible;
}

struct SuiteResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass() const { return max_deviation <= tolerance; }
};

SuiteResult suite_wightman(std::mt19937_64& rng) {
    SuiteResult s{"wightman_symmetry", 0.0, 1e-12};
    std::uniform_real_distribution<double> uk(0.05, 8.0), ua(0.3, 3.0), ual(0.1, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double k = uk(rng), a1 = ua(rng), alpha = ual(rng);
        const auto ker = g12_kernel_1p1(k, DetectorPairKinematics{a1, alpha});
        // exchange: the cross correlator is symmetric under swapping the two
        // detectors (weight and thermal exponent depend on {a1, a2} as a set)
        const auto ker_sw =
            g12_kernel_1p1(k, DetectorPairKinematics{a1 / alpha, 1.0 / alpha});
        s.max_deviation = std::max(
            s.max_deviation, std::abs(ker.log_weight_plus - ker_sw.log_weight_plus));
        s.max_deviation = std::max(s.max_deviation, std::abs(ker.exponent - ker_sw.exponent));
        // detector-2 self kernel rescales onto the detector-1 kernel:
        // (1/alpha) w22(y/alpha) = w11(y), exponents mapped likewise
        const double y = k;
        const auto k22 = g11_kernel_1p1(y / alpha, a1 / alpha);
        const auto k11 = g11_kernel_1p1(y, a1);
        s.max_deviation =
            std::max(s.max_deviation,
                     std::abs((k22.weight() / alpha - k11.weight()) /
                              std::max(k11.weight(), 1e-300)));
        s.max_deviation = std::max(s.max_deviation, std::abs(k22.exponent - k11.exponent));
    }
    return s;
}

SuiteResult suite_conservation(std::mt19937_64& rng, Dimension dim) {
    SuiteResult s{"conservation", 0.0, 1e-12};
    std::uniform_real_distribution<double> uo(0.5, 2.0), uf(0.05, 0.95),
        ut(0.3, 3.0), uaccel(0.5, 2.0);
    const int n = dim == Dimension::d1p1 ? 100 : 3;
    for (int i = 0; i < n; ++i) {
        CycleConfig c;
        c.omega1 = uo(rng);
        c.omega2 = c.omega1 * (1.0 + uo(rng));
        const double e0 = 1.0 - c.omega1 / c.omega2;
        c.alpha_aH = e0 + uf(rng) * (1.0 - e0);
        c.tau_a = ut(rng);
        c.a_h2 = uaccel(rng);
        c.dimension = dim;
        const CycleReport rep = run_cycle(c);
        g_engine_evaluations += rep.evaluations;
        if (rep.q2 == 0.0) continue;
        s.max_deviation =
            std::max(s.max_deviation, std::abs(rep.residual) / std::abs(rep.q2));
    }
    return s;
}

SuiteResult suite_oracle(Dimension dim) {
    SuiteResult s{"oracle", 0.0, dim == Dimension::d1p1 ? 1e-4 : 1e-3};
    OracleConfig cfg;
    cfg.cycle.omega1 = 1.0;
    cfg.cycle.omega2 = 2.0;
    cfg.cycle.alpha_aH = 0.6;
    cfg.cycle.a_h2 = 2.0;
    cfg.cycle.tau_a = 1.0;
    cfg.cycle.dimension = dim;
    const TraceReport rep = delta_rho_trace_numeric(cfg, cfg.cycle.alpha_aH);
    g_engine_evaluations += rep.evaluations;
    s.max_deviation = rep.rel_deviation;
    return s;
}

int cmd_verify(const RunConfig& cfg) {
    std::mt19937_64 rng(0x5eed5eedULL);
    std::vector<SuiteResult> suites;
    suites.push_back(suite_wightman(rng));
    suites.push_back(suite_conservation(rng, cfg.cycle.dimension));
    suites.push_back(suite_oracle(cfg.cycle.dimension));
    bool all_pass = true;
    std::string failed;
    for (const auto& s : suites) {
        std::cout << s.name << ": max_deviation=" << fmt(s.max_deviation)
                  << " tolerance=" << fmt(s.tolerance) << " "
                  << (s.pass() ? "pass" : "FAIL") << "\n";
        if (!s.pass() && all_pass) {
            all_pass = false;
            failed = s.name;
        }
    }
    std::cerr << "engine_evaluations=" << g_engine_evaluations.load() << "\n";
    if (!all_pass) {
        std::cerr << "verification failed in suite '" << failed << "'\n";
        return kExitVerification;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entangled Unruh quantum Otto engine calculator"};
    app.require_subcommand(1);

    std::string config_path, out_path, dimension_flag;
    std::vector<std::string> sets;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--set", sets, "config override key=value")->take_all();
    app.add_option("--out", out_path, "output path (CSV for sweep)");
    app.add_option("--workers", workers, "worker thread count");
    app.add_option("--dimension", dimension_flag, "1p1|1p3");

    auto* c_eff = app.add_subcommand("efficiency", "single-point cycle evaluation");
    auto* c_sweep = app.add_subcommand("sweep", "grid sweep to CSV");
    auto* c_proto = app.add_subcommand("protocol", "construct and check a full protocol");
    auto* c_verify = app.add_subcommand("verify", "run the cross-validation suites");
    for (auto* c : {c_eff, c_sweep, c_proto, c_verify}) c->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        apply_sets(cfg, sets);
        if (!dimension_flag.empty()) cfg.cycle.dimension = parse_dimension(dimension_flag);
        cfg.finalize();

        if (c_eff->parsed()) return cmd_efficiency(cfg);
        if (c_sweep->parsed()) return cmd_sweep(cfg, out_path, workers);
        if (c_proto->parsed()) return cmd_protocol(cfg);
        if (c_verify->parsed()) return cmd_verify(cfg);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const QuadratureError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
