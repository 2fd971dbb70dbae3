// SPDX-License-Identifier: Apache-2.0
#include "egk/cli.hpp"

#include "egk/distribution.hpp"
#include "egk/errors.hpp"
#include "egk/metrics.hpp"
#include "egk/montecarlo.hpp"
#include "egk/presets.hpp"
#include "egk/second_order.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace egk::cli {
namespace {

using nlohmann::json;

specfun::QuadratureSpec quad_spec(const EvalInputs& in) {
    specfun::QuadratureSpec q;
    if (in.tol) q.rel_tol = *in.tol;
    q.validate();
    return q;
}

foxh::FoxHOptions foxh_opts(const EvalInputs& in) {
    foxh::FoxHOptions o;
    if (in.tol) o.rel_tol = *in.tol;
    return o;
}

[[noreturn]] void bad_method(const std::string& stat, const std::string& method, const std::string& allowed) {
    throw DomainError("method '" + method + "' does not apply to '" + stat + "' (choose " + allowed + ")");
}

CdfOptions cdf_opts(const std::string& stat, const EvalInputs& in) {
    CdfOptions o;
    o.quad = quad_spec(in);
    o.foxh = foxh_opts(in);
    if (in.method == "quadrature") o.method = CdfMethod::quadrature;
    else if (in.method == "foxh") o.method = CdfMethod::foxh;
    else if (in.method == "gcq") o.method = CdfMethod::gcq;
    else bad_method(stat, in.method, "quadrature, foxh, gcq");
    return o;
}

TransformOptions transform_opts(const std::string& stat, const EvalInputs& in) {
    TransformOptions o;
    o.quad = quad_spec(in);
    o.foxh = foxh_opts(in);
    if (in.method == "quadrature") o.method = TransformMethod::quadrature;
    else if (in.method == "foxh") o.method = TransformMethod::foxh;
    else bad_method(stat, in.method, "quadrature, foxh");
    return o;
}

void closed_only(const std::string& stat, const EvalInputs& in) {
    if (in.method != "quadrature" && in.method != "closed_form") bad_method(stat, in.method, "closed_form");
}

OmegaSplit split_of(const EvalInputs& in) {
    if (!in.omega_s) return {in.params.omega, 1.0};
    return {*in.omega_s, in.params.omega / *in.omega_s};
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

json params_json(const ChannelParams& p) {
    json j{{"m", p.m}, {"xi", p.xi}, {"omega", p.omega}};
    if (p.shadowed()) {
        j["m_s"] = p.m_s();
        j["xi_s"] = p.xi_s();
    } else {
        j["m_s"] = nullptr;
        j["xi_s"] = nullptr;
    }
    return j;
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct CommonFlags {
    std::optional<double> m, xi, ms, xis;
    double omega = 1.0;
    std::string preset;
    EvalInputs in;
};

void add_common(CLI::App* app, CommonFlags& f) {
    app->add_option("--m", f.m, "fading figure m");
    app->add_option("--xi", f.xi, "fading shaping factor xi");
    app->add_option("--ms", f.ms, "shadowing figure m_s (omit for no shadowing)");
    app->add_option("--xis", f.xis, "shadowing shaping factor xi_s");
    app->add_option("--omega", f.omega, "average power omega")->capture_default_str();
    app->add_option("--preset", f.preset, "preset name (see `presets`)");
    app->add_option("--gbar", f.in.gamma_bar, "average SNR (linear)")->capture_default_str();
    app->add_option("--fs", f.in.f_s, "shadowing maximum Doppler shift, Hz")->capture_default_str();
    app->add_option("--fx", f.in.f_x, "multipath maximum Doppler shift, Hz")->capture_default_str();
    app->add_option("--omega-s", f.in.omega_s, "shadowing power share (default omega)");
    app->add_option("--method", f.in.method, "quadrature | foxh | gcq | series | approx")->capture_default_str();
    app->add_option("--tol", f.in.tol, "relative tolerance for quadrature and Fox H paths");
}

void add_arguments(CLI::App* app, CommonFlags& f) {
    app->add_option("--r", f.in.r, "envelope level")->capture_default_str();
    app->add_option("--gamma", f.in.gamma, "instantaneous SNR")->capture_default_str();
    app->add_option("--k", f.in.k, "moment order")->capture_default_str();
    app->add_option("--s", f.in.s, "MGF argument")->capture_default_str();
    app->add_option("--a", f.in.a, "modulation parameter (1 or 0.5)")->capture_default_str();
    app->add_option("--b", f.in.b, "detection parameter (1 or 0.5)")->capture_default_str();
    app->add_option("--gth", f.in.gamma_th, "outage SNR threshold")->capture_default_str();
    app->add_option("--cth", f.in.c_th, "outage capacity threshold, bits/s")->capture_default_str();
    app->add_option("--w", f.in.bandwidth, "bandwidth W, Hz")->capture_default_str();
    app->add_option("--terms", f.in.series_terms, "LCR series truncation N")->capture_default_str();
}

ChannelParams resolve_params(const CommonFlags& f) {
    if (!f.preset.empty()) {
        PresetArgs args{f.m, f.xi, f.ms, f.xis};
        return preset(f.preset, f.omega, args);
    }
    if (!f.m || !f.xi) throw DomainError("give --m and --xi, or --preset NAME");
    if (f.xis && !f.ms) throw DomainError("--xis needs --ms");
    if (f.ms) return make_params(*f.m, *f.xi, *f.ms, f.xis.value_or(1.0), f.omega);
    return make_unshadowed(*f.m, *f.xi, f.omega);
}

json result_json(const std::string& stat, const EvalInputs& in, const MetricResult& r) {
    json inputs = params_json(in.params);
    inputs["r"] = in.r;
    inputs["gamma"] = in.gamma;
    inputs["gamma_bar"] = in.gamma_bar;
    inputs["k"] = in.k;
    inputs["s"] = in.s;
    inputs["a"] = in.a;
    inputs["b"] = in.b;
    inputs["gamma_th"] = in.gamma_th;
    inputs["c_th"] = in.c_th;
    inputs["bandwidth"] = in.bandwidth;
    inputs["f_s"] = in.f_s;
    inputs["f_x"] = in.f_x;
    inputs["method"] = in.method;
    json j{{"statistic", stat}, {"inputs", inputs}, {"method", method_name(r.method)}};
    if (std::isfinite(r.value)) j["value"] = r.value;
    else j["value"] = format_double(r.value);
    j["err_est"] = r.err_est;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

int report_error(std::ostream& err, const std::exception& e, int code) {
    err << "egk: " << e.what() << '\n';
    return code;
}

// --- sweep ---------------------------------------------------------------

struct SweepFlags {
    std::string statistic;
    std::string variable;
    std::vector<double> grid;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    std::string spacing = "linear";
    std::string out;
};

int run_sweep(const CommonFlags& f, const SweepFlags& s, std::ostream& out, std::ostream& err) {
    EvalInputs base = f.in;
    base.params = resolve_params(f);
    std::vector<double> grid = s.grid;
    if (grid.empty()) {
        if (s.count < 1) throw DomainError("give --grid or --from/--to/--count");
        if (s.spacing != "linear" && s.spacing != "log") throw DomainError("--spacing must be linear or log");
        grid = make_grid(s.start, s.stop, s.count, s.spacing == "log");
    }
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("sweep grid must be strictly increasing");
    // Validate the statistic and variable before spending time on the grid.
    (void)with_variable(base, s.variable, grid.front());
    const auto& names = statistic_names();
    if (std::find(names.begin(), names.end(), s.statistic) == names.end())
        throw DomainError("unknown statistic '" + s.statistic + "'; valid: " + join(names));

    std::vector<MetricResult> rows(grid.size());
    std::vector<std::string> failures(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                rows[i] = evaluate(s.statistic, with_variable(base, s.variable, grid[i]));
            } catch (const std::exception& e) {
                rows[i] = {std::nan(""), Method::failed, 0.0, e.what()};
                failures[i] = e.what();
            }
        }
    };
    const unsigned nt = std::min<unsigned>(mc::worker_count(), static_cast<unsigned>(grid.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "variable,value,method,err_est\n";
    bool failed = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << format_double(grid[i]) << ',';
        if (rows[i].method == Method::failed) {
            failed = true;
            csv << ",failed,\n";
            err << "egk: row " << i << " (" << s.variable << " = " << grid[i] << ") failed: " << failures[i] << '\n';
        } else {
            csv << format_double(rows[i].value) << ',' << method_name(rows[i].method) << ','
                << format_double(rows[i].err_est) << '\n';
        }
    }
    if (s.out.empty() || s.out == "-") {
        out << csv.str();
    } else {
        std::ofstream file(s.out, std::ios::binary);
        if (!file) throw DomainError("cannot open " + s.out + " for writing");
        file << csv.str();
    }
    return failed ? kNumerical : kOk;
}

// --- validate ------------------------------------------------------------

struct ValidateFlags {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    double corrupt_beta = 1.0;
    std::string out;
};

int run_validate(const CommonFlags& f, const ValidateFlags& v, std::ostream& out) {
    const ChannelParams p = resolve_params(f);
    const double gb = f.in.gamma_bar;
    mc::SimConfig cfg;
    cfg.n_samples = v.samples;
    cfg.seed = v.seed;
    cfg.beta_scale = v.corrupt_beta;

    // Quantile-spaced CDF levels from a pilot run on a separate seed.
    mc::SimConfig pilot_cfg;
    pilot_cfg.n_samples = 20001;
    pilot_cfg.seed = v.seed ^ 0x9e3779b97f4a7c15ull;
    std::vector<double> pilot = mc::draw_envelopes(p, pilot_cfg);
    std::sort(pilot.begin(), pilot.end());
    std::vector<double> levels;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) levels.push_back(pilot[static_cast<std::size_t>(q * (pilot.size() - 1))]);

    struct Check {
        std::string name;
        double closed;
        mc::Statistic stat;
    };
    std::vector<Check> checks;
    for (double k : {1.0, 2.0, 4.0})
        checks.push_back({"moment k=" + format_double(k), moment(p, k), mc::Statistic::moment(k)});
    for (double x : levels)
        checks.push_back({"cdf r=" + format_double(x), envelope_cdf(p, x).value, mc::Statistic::cdf_at(x)});
    for (double b : {1.0, 0.5}) {
        ModulationSpec mod{1.0, b};
        checks.push_back({"abep a=1 b=" + format_double(b), abep(p, gb, mod).value, mc::Statistic::abep(1.0, b, gb)});
    }
    for (double t : {0.1, 0.5, 1.0})
        checks.push_back({"outage gth/gbar=" + format_double(t), outage_probability(p, gb, t * gb).value,
                          mc::Statistic::outage(gb, t * gb)});
    checks.push_back({"capacity", avg_capacity(p, CapacitySpec{1.0, gb}).value, mc::Statistic::capacity(gb)});

    std::vector<mc::Statistic> stats;
    for (const auto& c : checks) stats.push_back(c.stat);
    const std::vector<mc::EstimateResult> est = mc::estimate_all(stats, p, cfg);
    const mc::EstimateResult aof_est = mc::estimate_aof(p, cfg);

    json rows = json::array();
    bool ok = true;
    auto add = [&](const std::string& name, double closed, const mc::EstimateResult& e) {
        const double z = e.std_error > 0.0 ? (e.value - closed) / e.std_error : (e.value == closed ? 0.0 : INFINITY);
        const bool pass = std::abs(z) <= 4.0;
        ok = ok && pass;
        rows.push_back({{"check", name}, {"closed_form", closed}, {"estimate", e.value},
                        {"std_error", e.std_error}, {"z", std::isfinite(z) ? json(z) : json("inf")}, {"pass", pass}});
    };
    for (std::size_t i = 0; i < checks.size(); ++i) add(checks[i].name, checks[i].closed, est[i]);
    add("aof", aof(p), aof_est);

    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json report{{"statistic", "validate"},
                {"inputs", params_json(p)},
                {"gamma_bar", gb},
                {"samples", v.samples},
                {"seed", v.seed},
                {"version", EGK_VERSION},
                {"timestamp", stamp},
                {"checks", rows},
                {"pass", ok}};
    if (v.corrupt_beta != 1.0) report["beta_scale"] = v.corrupt_beta;
    const std::string text = report.dump(2) + "\n";
    if (v.out.empty() || v.out == "-") {
        out << text;
    } else {
        std::ofstream file(v.out);
        if (!file) throw DomainError("cannot open " + v.out + " for writing");
        file << text;
    }
    return ok ? kOk : kValidation;
}

// --- presets -------------------------------------------------------------

void print_presets(std::ostream& out) {
    out << std::left << std::setw(26) << "name" << std::setw(6) << "m" << std::setw(6) << "xi" << std::setw(6)
        << "m_s" << std::setw(6) << "xi_s" << "source\n";
    for (const Preset& p : builtin_presets()) {
        out << std::setw(26) << p.name << std::setw(6) << p.m << std::setw(6) << p.xi << std::setw(6) << p.m_s
            << std::setw(6) << p.xi_s << p.source << '\n';
    }
}

}  // namespace

const std::vector<std::string>& statistic_names() {
    static const std::vector<std::string> names = {
        "pdf",  "snr-pdf", "cdf",    "snr-cdf", "moment",          "snr-moment", "mgf",
        "aof",  "abep",    "outage", "outage-capacity", "capacity", "lcr",        "afd"};
    return names;
}

MetricResult evaluate(const std::string& stat, const EvalInputs& in) {
    const ChannelParams& p = in.params;
    p.validate();
    if (stat == "pdf") {
        if (in.method == "foxh") return {envelope_pdf_foxh(p, in.r, foxh_opts(in)), Method::foxh, 0.0, ""};
        if (in.method != "quadrature") bad_method(stat, in.method, "quadrature, foxh");
        return {envelope_pdf(p, in.r, quad_spec(in)), p.shadowed() ? Method::quadrature : Method::closed_form, 0.0, ""};
    }
    if (stat == "snr-pdf") {
        if (in.method != "quadrature") bad_method(stat, in.method, "quadrature");
        return {snr_pdf(p, in.gamma_bar, in.gamma, quad_spec(in)),
                p.shadowed() ? Method::quadrature : Method::closed_form, 0.0, ""};
    }
    if (stat == "cdf") return envelope_cdf(p, in.r, cdf_opts(stat, in));
    if (stat == "snr-cdf") return snr_cdf(p, in.gamma_bar, in.gamma, cdf_opts(stat, in));
    if (stat == "moment") {
        closed_only(stat, in);
        return {moment(p, in.k), Method::closed_form, 0.0, ""};
    }
    if (stat == "snr-moment") {
        closed_only(stat, in);
        return {snr_moment(p, in.gamma_bar, in.k), Method::closed_form, 0.0, ""};
    }
    if (stat == "mgf") return mgf(p, in.gamma_bar, in.s, transform_opts(stat, in));
    if (stat == "aof") {
        closed_only(stat, in);
        return {aof(p), Method::closed_form, 0.0, ""};
    }
    if (stat == "abep") return abep(p, in.gamma_bar, ModulationSpec{in.a, in.b}, transform_opts(stat, in));
    if (stat == "outage") return outage_probability(p, in.gamma_bar, in.gamma_th, cdf_opts(stat, in));
    if (stat == "outage-capacity")
        return outage_capacity(p, CapacitySpec{in.bandwidth, in.gamma_bar}, in.c_th, cdf_opts(stat, in));
    if (stat == "capacity")
        return avg_capacity(p, CapacitySpec{in.bandwidth, in.gamma_bar}, transform_opts(stat, in));
    if (stat == "lcr" || stat == "afd") {
        const DopplerSpec dop{in.f_s, in.f_x};
        const OmegaSplit split = split_of(in);
        if (stat == "afd") {
            if (in.method != "quadrature") bad_method(stat, in.method, "quadrature");
            return afd(p, split, dop, in.r, quad_spec(in));
        }
        if (in.method == "quadrature") return lcr_integral(p, split, dop, in.r, quad_spec(in));
        if (in.method == "series") {
            const SeriesResult s = lcr_series(p, split, dop, in.r, in.series_terms, SeriesForm::derived, quad_spec(in));
            return {s.value, Method::series, std::abs(s.last_term), ""};
        }
        if (in.method == "approx")
            return {lcr_approx(p, split, dop, in.r, SeriesForm::derived, quad_spec(in)), Method::series, 0.0,
                    "four-term approximation"};
        bad_method(stat, in.method, "quadrature, series, approx");
    }
    throw DomainError("unknown statistic '" + stat + "'; valid: " + join(statistic_names()));
}

EvalInputs with_variable(const EvalInputs& in, const std::string& variable, double value) {
    EvalInputs out = in;
    auto need_shadow = [&] {
        if (!out.params.shadowing) throw DomainError("cannot sweep " + variable + " without shadowing");
    };
    if (variable == "r") out.r = value;
    else if (variable == "gamma") out.gamma = value;
    else if (variable == "gamma_bar") out.gamma_bar = value;
    else if (variable == "gamma_th") out.gamma_th = value;
    else if (variable == "m") out.params.m = value;
    else if (variable == "xi") out.params.xi = value;
    else if (variable == "m_s") { need_shadow(); out.params.shadowing->m_s = value; }
    else if (variable == "xi_s") { need_shadow(); out.params.shadowing->xi_s = value; }
    else throw DomainError("unknown sweep variable '" + variable +
                           "'; valid: r, gamma, gamma_bar, m, xi, m_s, xi_s, gamma_th");
    return out;
}

std::vector<double> make_grid(double start, double stop, int count, bool log_spacing) {
    if (count < 1) throw DomainError("grid needs at least one point");
    if (!(stop >= start) || !std::isfinite(start) || !std::isfinite(stop))
        throw DomainError("grid needs finite start <= stop");
    if (log_spacing && !(start > 0.0)) throw DomainError("log grid needs start > 0");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        // Base 10 keeps decade points exact.
        g[i] = log_spacing ? std::pow(10.0, std::lerp(std::log10(start), std::log10(stop), t))
                           : std::lerp(start, stop, t);
    }
    g.front() = start;
    if (count > 1) g.back() = stop;
    return g;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"EGK composite fading statistics"};
    app.set_version_flag("--version", EGK_VERSION);
    app.require_subcommand(1);

    CommonFlags eval_flags, sweep_flags, validate_flags;
    std::string eval_stat;
    auto* eval = app.add_subcommand("eval", "evaluate one statistic and print JSON");
    eval->add_option("statistic", eval_stat, "statistic: " + join(statistic_names()))->required();
    add_common(eval, eval_flags);
    add_arguments(eval, eval_flags);

    SweepFlags sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "evaluate a statistic over a grid and write CSV");
    sweep->add_option("statistic", sweep_opts.statistic, "statistic to sweep")->required();
    sweep->add_option("--var", sweep_opts.variable, "r | gamma | gamma_bar | m | xi | m_s | xi_s | gamma_th")
        ->required();
    sweep->add_option("--grid", sweep_opts.grid, "explicit grid values")->delimiter(',');
    sweep->add_option("--from", sweep_opts.start, "grid start");
    sweep->add_option("--to", sweep_opts.stop, "grid stop");
    sweep->add_option("--count", sweep_opts.count, "grid size");
    sweep->add_option("--spacing", sweep_opts.spacing, "linear | log")->capture_default_str();
    sweep->add_option("--out", sweep_opts.out, "CSV output path (default stdout)");
    add_common(sweep, sweep_flags);
    add_arguments(sweep, sweep_flags);

    ValidateFlags vflags;
    auto* validate = app.add_subcommand("validate", "compare closed forms with Monte Carlo estimates");
    add_common(validate, validate_flags);
    validate->add_option("--samples", vflags.samples, "Monte Carlo sample count")->capture_default_str();
    validate->add_option("--seed", vflags.seed, "random seed")->capture_default_str();
    validate->add_option("--out", vflags.out, "JSON report path (default stdout)");
    validate->add_option("--corrupt-beta", vflags.corrupt_beta)->group("");

    auto* presets = app.add_subcommand("presets", "list the special-case presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*presets) {
            print_presets(out);
            return kOk;
        }
        if (*eval) {
            EvalInputs in = eval_flags.in;
            in.params = resolve_params(eval_flags);
            const MetricResult r = evaluate(eval_stat, in);
            out << result_json(eval_stat, in, r).dump(2) << '\n';
            return r.method == Method::failed ? kNumerical : kOk;
        }
        if (*sweep) return run_sweep(sweep_flags, sweep_opts, out, err);
        if (*validate) return run_validate(validate_flags, vflags, out);
    } catch (const DomainError& e) {
        return report_error(err, e, kUsage);
    } catch (const NumericalError& e) {
        return report_error(err, e, kNumerical);
    } catch (const std::exception& e) {
        return report_error(err, e, kNumerical);
    }
    return kUsage;
}

}  // namespace egk::cli
