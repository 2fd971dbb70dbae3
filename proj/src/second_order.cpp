// SPDX-License-Identifier: Apache-2.0
#include "egk/second_order.hpp"

#include "egk/distribution.hpp"
#include "egk/errors.hpp"
#include "egk/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace egk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_level(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("level r must be positive and finite");
}

// log of the generalized Nakagami-m density with power w at x.
double log_gnm_pdf(double m, double xi, double beta, double w, double x) {
    const double lx = std::log(x);
    const double lk = std::log(beta / w);
    return std::log(2.0 * xi) - specfun::ln_gamma(m) + m * xi * lk + (2.0 * m * xi - 1.0) * lx -
           std::exp(xi * (lk + 2.0 * lx));
}

// Coefficients A, B of the component variances divided by f_x^2, so that
// the multipath Doppler factors out of every integral exactly.
struct Coeffs {
    double a;
    double b;
};

// Coefficients per unit squared Doppler of each component.
Coeffs doppler_free_coeffs(const ChannelParams& p, const OmegaSplit& split) {
    const DerivedBetas d = derive_betas(p);
    Coeffs c{0.0, 0.0};
    c.b = (2.0 * kPi * kPi / (2.0 * p.xi * p.xi)) * std::pow(split.omega_x / d.beta, p.xi);
    if (p.shadowed()) {
        const double xis = p.xi_s();
        c.a = (2.0 * kPi * kPi / (2.0 * xis * xis)) * std::pow(split.omega_s / d.beta_s, xis);
    }
    return c;
}

// Same, normalised to f_x = 1.
Coeffs unit_coeffs(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop) {
    Coeffs c = doppler_free_coeffs(p, split);
    const double ratio = dop.f_s / dop.f_x;
    c.a *= ratio * ratio;
    return c;
}

void check_inputs(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop) {
    p.validate();
    dop.validate();
    check_split(split, p.omega);
}

struct SeriesLayout {
    double log_pref;
    double log_q1;  // ln Q_1
    double P0;      // P_n = P0 - n (1 + beta)
    double beta;
    double D;
    double t_star;
    double lower_shift;
    double upper_shift;
};

SeriesLayout series_layout(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r,
                           SeriesForm form) {
    check_inputs(p, split, dop);
    require_level(r);
    if (!p.shadowed()) throw DomainError("the LCR series needs a shadowing component");
    if (!(dop.f_s > 0.0)) throw DomainError("the LCR series needs f_s > 0");
    const DerivedBetas d = derive_betas(p);
    const double xi = p.xi;
    const double xis = p.xi_s();
    const double kap = d.beta_s * d.beta / (split.omega_s * split.omega_x);
    const double lk = std::log(kap);
    const double lr = std::log(r);
    const double ss = dop.sigma_s();
    const double sx = dop.sigma_x();

    SeriesLayout s{};
    s.beta = xi / xis;
    s.log_q1 = std::log(ss * ss * xi * xi / (sx * sx * xis * xis)) + xi * lk + 2.0 * xi * lr;
    s.P0 = p.m_s() - s.beta * p.m;
    s.D = std::exp(xi * lk + 2.0 * xi * lr);
    s.t_star = std::exp(s.log_q1 * xis / (xis + xi));
    const double tail = p.m * xi * lk + 2.0 * p.m * xi * lr - ln_gamma_norm(p);
    if (form == SeriesForm::derived) {
        s.log_pref = std::log(xi * ss / (std::sqrt(kPi) * xis)) + tail;
        s.lower_shift = -0.5;
        s.upper_shift = xi / (2.0 * xis);
    } else {
        s.log_pref = 0.5 * std::log(split.omega_s * xi * xi * ss * ss / (kPi * d.beta_s * xis * xis)) + tail;
        s.lower_shift = -(xis - 1.0) / (2.0 * xis);
        s.upper_shift = -(xi + 1.0) / (2.0 * xis);
    }
    return s;
}

// C(1/2, n) [Q_{-n} gamma(P_{-n} + lower, t*, D, beta) + Q_{n-1/2} Gamma(P_n + upper, t*, D, beta)]
// without the prefactor.
double series_term(const SeriesLayout& s, int n, double binom, const specfun::QuadratureSpec& quad) {
    const double P_minus = s.P0 + n * (1.0 + s.beta);
    const double P_plus = s.P0 - n * (1.0 + s.beta);
    try {
        const double lo = specfun::log_ext_lower_gamma(P_minus + s.lower_shift, s.t_star, s.D, s.beta, quad);
        const double up = specfun::log_ext_upper_gamma(P_plus + s.upper_shift, s.t_star, s.D, s.beta, quad);
        return binom * (std::exp(s.log_pref - n * s.log_q1 + lo) + std::exp(s.log_pref + (n - 0.5) * s.log_q1 + up));
    } catch (const DomainError& e) {
        std::ostringstream os;
        os << "LCR series term " << n << " cannot be evaluated: " << e.what();
        throw SeriesTermError(n, os.str());
    }
}

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

// Unit Gaussian process with the isotropic Doppler spectrum, as a bank of
// rotating phasors.
struct SinusoidBank {
    std::vector<std::complex<double>> phase;
    std::vector<std::complex<double>> step;
    std::vector<double> omega;
    std::vector<double> phi;
    double amp;

    SinusoidBank(int M, double f, double dt, bool use_sin, mc::Rng& rng) : amp(std::sqrt(2.0 / M)) {
        std::uniform_real_distribution<double> U(-kPi, kPi);
        const double theta = U(rng);
        for (int n = 1; n <= M; ++n) {
            const double alpha = (2.0 * kPi * n - kPi + theta) / (4.0 * M);
            const double w = 2.0 * kPi * f * (use_sin ? std::sin(alpha) : std::cos(alpha));
            const double ph = U(rng);
            omega.push_back(w);
            phi.push_back(ph);
            phase.push_back(std::polar(1.0, ph));
            step.push_back(std::polar(1.0, w * dt));
        }
    }
    double value() const {
        double s = 0.0;
        for (const auto& z : phase) s += z.real();
        return amp * s;
    }
    void advance() {
        for (std::size_t k = 0; k < phase.size(); ++k) phase[k] *= step[k];
    }
    void resync(double t) {
        for (std::size_t k = 0; k < phase.size(); ++k) phase[k] = std::polar(1.0, omega[k] * t + phi[k]);
    }
};

}  // namespace

void DopplerSpec::validate() const {
    if (!(f_s >= 0.0) || !std::isfinite(f_s)) throw DomainError("shadowing Doppler f_s must be >= 0");
    if (!(f_x > 0.0) || !std::isfinite(f_x)) throw DomainError("multipath Doppler f_x must be > 0");
}

double DopplerSpec::sigma_s() const { return std::sqrt(2.0) * kPi * f_s; }
double DopplerSpec::sigma_x() const { return std::sqrt(2.0) * kPi * f_x; }

ComponentVariances component_variances(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop,
                                        double r, double u) {
    check_inputs(p, split, dop);
    require_level(r);
    require_level(u);
    const Coeffs c = doppler_free_coeffs(p, split);
    ComponentVariances v;
    if (p.shadowed()) v.shadowing = dop.f_s * dop.f_s * c.a * std::pow(u, 2.0 - 2.0 * p.xi_s());
    v.multipath = dop.f_x * dop.f_x * c.b * std::pow(r / u, 2.0 - 2.0 * p.xi);
    return v;
}

double cond_variance(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r, double u) {
    const ComponentVariances v = component_variances(p, split, dop, r, u);
    const double x = r / u;
    return x * x * v.shadowing + u * u * v.multipath;
}

MetricResult lcr_integral(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r,
                          const specfun::QuadratureSpec& quad) {
    check_inputs(p, split, dop);
    require_level(r);
    const DerivedBetas d = derive_betas(p);
    const Coeffs c = unit_coeffs(p, split, dop);
    const double norm = dop.f_x / std::sqrt(2.0 * kPi);

    if (!p.shadowed()) {
        const double us = std::sqrt(split.omega_s);
        const double var = us * us * c.b * std::pow(r / us, 2.0 - 2.0 * p.xi);
        const double pdf = envelope_pdf(p, r, quad);
        return {norm * std::sqrt(var) * pdf, Method::closed_form, 0.0, ""};
    }

    const double ms = p.m_s();
    const double xis = p.xi_s();
    const double root = std::sqrt(split.omega_s);
    const double lr = std::log(r);
    auto f = [&](double theta) {
        if (theta <= 0.0 || theta >= 0.5 * kPi) return 0.0;
        const double u = root * std::tan(theta);
        if (!(u > 0.0) || !std::isfinite(u)) return 0.0;
        const double lu = std::log(u);
        const double var = c.a * std::exp(2.0 * lr - 2.0 * xis * lu) +
                           c.b * std::exp(2.0 * p.xi * lu + (2.0 - 2.0 * p.xi) * lr);
        const double lv = 0.5 * std::log(var) + log_gnm_pdf(p.m, p.xi, d.beta, split.omega_x, r / u) - lu +
                          log_gnm_pdf(ms, xis, d.beta_s, split.omega_s, u);
        const double jac = root / (std::cos(theta) * std::cos(theta));
        return std::exp(lv) * jac;
    };
    std::vector<double> pts{0.0};
    const double centre = r / std::sqrt(split.omega_x);
    for (double s : {1.0 / 64, 1.0 / 16, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0}) {
        pts.push_back(std::atan(s));
        pts.push_back(std::atan(s * centre / root));
    }
    pts.push_back(0.5 * kPi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const specfun::QuadResult q = specfun::integrate_piecewise(f, pts, quad);
    return {norm * q.value, Method::quadrature, norm * q.err_est, ""};
}

double lcr_q(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r, double n) {
    const SeriesLayout s = series_layout(p, split, dop, r, SeriesForm::derived);
    return std::exp(n * s.log_q1);
}

SeriesResult lcr_series(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r, int N,
                        SeriesForm form, const specfun::QuadratureSpec& quad) {
    if (N < 1) throw DomainError("series truncation N must be >= 1");
    const SeriesLayout s = series_layout(p, split, dop, r, form);
    SeriesResult out;
    long double sum = 0.0L;
    double binom = 1.0;
    for (int n = 0; n <= N; ++n) {
        if (n > 0) binom *= (0.5 - (n - 1)) / n;
        const double t = series_term(s, n, binom, quad);
        sum += t;
        out.last_term = t;
        out.terms = n + 1;
    }
    out.value = static_cast<double>(sum);
    return out;
}

double lcr_approx(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r,
                  SeriesForm form, const specfun::QuadratureSpec& quad) {
    const SeriesLayout s = series_layout(p, split, dop, r, form);
    const double P0 = s.P0;
    const double P1 = s.P0 - (1.0 + s.beta);
    const double Pm1 = s.P0 + (1.0 + s.beta);
    auto lo = [&](double a) { return specfun::log_ext_lower_gamma(a + s.lower_shift, s.t_star, s.D, s.beta, quad); };
    auto up = [&](double a) { return specfun::log_ext_upper_gamma(a + s.upper_shift, s.t_star, s.D, s.beta, quad); };
    const double t1 = std::exp(s.log_pref + lo(P0));
    const double t2 = std::exp(s.log_pref - 0.5 * s.log_q1 + up(P0));
    const double t3 = 0.5 * std::exp(s.log_pref - s.log_q1 + lo(Pm1));
    const double t4 = 0.5 * std::exp(s.log_pref + 0.5 * s.log_q1 + up(P1));
    return t1 + t2 + t3 + t4;
}

MetricResult afd(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r,
                 const specfun::QuadratureSpec& quad) {
    const MetricResult lcr = lcr_integral(p, split, dop, r, quad);
    CdfOptions opts;
    opts.quad = quad;
    const MetricResult cdf = envelope_cdf(p, r, opts);
    if (lcr.value < 1e-300) return {kInf, Method::quadrature, 0.0, "level crossing rate underflows; fade duration unbounded"};
    const double v = cdf.value / lcr.value;
    const double err = v * (cdf.err_est / std::max(cdf.value, 1e-300) + lcr.err_est / lcr.value);
    return {v, Method::quadrature, err, ""};
}

void ProcessConfig::validate(const DopplerSpec& dop) const {
    dop.validate();
    if (!(dt > 0.0) || !(duration > 0.0)) throw DomainError("process duration and dt must be positive");
    if (n_sinusoids < 1) throw DomainError("process needs at least one sinusoid");
    const double fmax = std::max(dop.f_s, dop.f_x);
    if (dt > 1.0 / (20.0 * fmax) * (1.0 + 1e-12))
        throw DomainError("process dt must not exceed 1/(20 max(f_s, f_x))");
    if (duration / dt < 1e4 * (1.0 - 1e-12)) throw DomainError("process needs duration/dt >= 1e4");
}

ProcessTrace simulate_process(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop,
                              const ProcessConfig& cfg) {
    check_inputs(p, split, dop);
    cfg.validate(dop);
    if (!is_integer(p.m) || (p.shadowed() && !is_integer(p.m_s())))
        throw DomainError("the sum-of-sinusoids process needs integer m and m_s");
    if (p.shadowed() && !(dop.f_s > 0.0)) throw DomainError("the shadowing process needs f_s > 0");

    const DerivedBetas d = derive_betas(p);
    mc::Rng rng = mc::make_stream(cfg.seed, 0);
    auto bank = [&](int count, double f) {
        std::vector<SinusoidBank> out;
        for (int l = 0; l < count; ++l) out.emplace_back(cfg.n_sinusoids, f, cfg.dt, l % 2 == 1, rng);
        return out;
    };
    std::vector<SinusoidBank> xs = bank(static_cast<int>(std::lround(2.0 * p.m)), dop.f_x);
    std::vector<SinusoidBank> ss;
    if (p.shadowed()) ss = bank(static_cast<int>(std::lround(2.0 * p.m_s())), dop.f_s);

    auto component = [](std::vector<SinusoidBank>& banks, double scale, double xi) {
        double g = 0.0;
        for (const auto& b : banks) {
            const double v = b.value();
            g += 0.5 * v * v;
        }
        return scale * std::pow(g, 1.0 / (2.0 * xi));
    };
    const double scale_x = std::sqrt(split.omega_x / d.beta);
    const double scale_s = p.shadowed() ? std::sqrt(split.omega_s / d.beta_s) : std::sqrt(split.omega_s);

    const auto n = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
    ProcessTrace tr;
    tr.dt = cfg.dt;
    tr.envelope.resize(n);
    constexpr std::size_t kResync = 1024;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && i % kResync == 0) {
            const double t = static_cast<double>(i) * cfg.dt;
            for (auto& b : xs) b.resync(t);
            for (auto& b : ss) b.resync(t);
        }
        const double x = component(xs, scale_x, p.xi);
        const double s = p.shadowed() ? component(ss, scale_s, p.xi_s()) : scale_s;
        tr.envelope[i] = s * x;
        for (auto& b : xs) b.advance();
        for (auto& b : ss) b.advance();
    }
    return tr;
}

EmpiricalSecondOrder empirical_second_order(const ProcessTrace& trace, double level) {
    if (trace.envelope.size() < 2) throw DomainError("trace too short");
    EmpiricalSecondOrder e;
    std::uint64_t below = 0;
    for (std::size_t i = 0; i < trace.envelope.size(); ++i) {
        if (trace.envelope[i] < level) ++below;
        if (i > 0 && trace.envelope[i - 1] >= level && trace.envelope[i] < level) ++e.crossings;
    }
    const double duration = static_cast<double>(trace.envelope.size()) * trace.dt;
    e.cdf = static_cast<double>(below) / static_cast<double>(trace.envelope.size());
    e.lcr = static_cast<double>(e.crossings) / duration;
    e.afd = e.crossings ? static_cast<double>(below) * trace.dt / static_cast<double>(e.crossings) : kInf;
    return e;
}

void write_trace_csv(const ProcessTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    out.precision(17);
    out << "time,envelope\n";
    for (std::size_t i = 0; i < trace.envelope.size(); ++i)
        out << static_cast<double>(i) * trace.dt << ',' << trace.envelope[i] << '\n';
}

}  // namespace egk
