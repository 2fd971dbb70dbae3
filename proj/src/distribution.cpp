// SPDX-License-Identifier: Apache-2.0
#include "egk/distribution.hpp"

#include "egk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace egk {
namespace {

using specfun::QuadratureSpec;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Leading behaviour coef * x^exponent of a density at the origin. `order`
// is 2 for the envelope and 1 for the SNR.
struct Origin {
    double exponent;
    double coef;
    bool log_singular;
};

Origin origin_term(const ChannelParams& p, double kap, double order) {
    const double a = p.m * p.xi;
    if (!p.shadowed()) {
        return {order * a - 1.0,
                order * p.xi * std::exp(a * std::log(kap) - specfun::ln_gamma(p.m)), false};
    }
    const double ms = p.m_s();
    const double xis = p.xi_s();
    const double as = ms * xis;
    const double norm = ln_gamma_norm(p);
    if (a < as) {
        return {order * a - 1.0,
                order * p.xi * std::exp(a * std::log(kap) + specfun::ln_gamma(ms - a / xis) - norm), false};
    }
    if (as < a) {
        return {order * as - 1.0,
                order * xis * std::exp(as * std::log(kap) + specfun::ln_gamma(p.m - as / p.xi) - norm), false};
    }
    return {order * a - 1.0, kInf, true};
}

double origin_value(const ChannelParams& p, double kap, double order) {
    const Origin o = origin_term(p, kap, order);
    constexpr double kTie = 1e-14;
    if (o.exponent > kTie) return 0.0;
    if (o.exponent > -kTie && !o.log_singular) return o.coef;
    throw DomainError("density unbounded at origin");
}

void require_positive_arg(double x, const char* name) {
    if (std::isnan(x) || x < 0.0) {
        std::ostringstream os;
        os << name << " must be >= 0 (got " << x << ")";
        throw DomainError(os.str());
    }
}

// log of int_0^inf t^{alpha-1} e^{-t - b t^{-beta}} dt for small b = e^{lb},
// from the residues of Gamma(s) Gamma(alpha + beta s) b^{-s}:
//   sum_k (-1)^k/(k! beta) Gamma(-(alpha+k)/beta) b^{(alpha+k)/beta}
// + sum_j (-1)^j/j! Gamma(alpha - beta j) b^j.
// Terms are kept down to 1e-17 of the leading one. Returns nullopt when b
// is not small enough or two pole families nearly collide (the merged
// double poles carry log terms this sum does not model).
std::optional<double> log_ext_gamma_small_b(double alpha, double beta, double lb) {
    constexpr double kDrop = -39.0;  // ln 1e-17
    if (!(lb < -40.0)) return std::nullopt;
    if (alpha == 0.0) {
        // the two leading poles merge at s = 0
        return std::log(-lb / beta - std::numbers::egamma * (1.0 + 1.0 / beta));
    }
    struct Term {
        double expo;
        double sign;
        double log_mag;
    };
    std::vector<Term> terms;
    const double lead_expo = std::min(alpha / beta, 0.0);
    for (int k = 0;; ++k) {
        const double e = (alpha + k) / beta;
        if ((e - lead_expo) * lb < kDrop) break;
        if (k == 64) return std::nullopt;
        const double g = -e;
        if (g == std::round(g) && g <= 0.0) return std::nullopt;
        const double sg = std::tgamma(g) < 0.0 ? -1.0 : 1.0;
        terms.push_back({e, (k % 2 ? -1.0 : 1.0) * sg,
                         std::lgamma(g) - std::lgamma(k + 1.0) - std::log(beta) + e * lb});
    }
    for (int j = 0;; ++j) {
        if ((j - lead_expo) * lb < kDrop) break;
        if (j == 64) return std::nullopt;
        const double g = alpha - beta * j;
        if (g == std::round(g) && g <= 0.0) return std::nullopt;
        const double sg = std::tgamma(g) < 0.0 ? -1.0 : 1.0;
        terms.push_back({static_cast<double>(j), (j % 2 ? -1.0 : 1.0) * sg,
                         std::lgamma(g) - std::lgamma(j + 1.0) + j * lb});
    }
    if (terms.empty()) return std::nullopt;
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t k = i + 1; k < terms.size(); ++k)
            if (std::abs(terms[i].expo - terms[k].expo) < 1e-3) return std::nullopt;
    double top = -kInf;
    for (const Term& t : terms) top = std::max(top, t.log_mag);
    double sum = 0.0;
    for (const Term& t : terms) sum += t.sign * std::exp(t.log_mag - top);
    if (!(sum > 0.5)) return std::nullopt;  // heavy cancellation: let quadrature decide
    return top + std::log(sum);
}

// log of the density of G = kappa X^order at x with the generic exponent
// layout shared by the envelope (order 2) and the SNR (order 1).
double log_density(const ChannelParams& p, double kap, double x, double order, const QuadratureSpec& spec) {
    const double a = p.m * p.xi;
    const double lx = std::log(x);
    const double lead = std::log(order * p.xi) + a * std::log(kap) + (order * a - 1.0) * lx;
    const double lb = p.xi * (std::log(kap) + order * lx);
    if (!p.shadowed()) return lead - specfun::ln_gamma(p.m) - std::exp(lb);
    const double alpha = p.m_s() - a / p.xi_s();
    const double beta = p.xi / p.xi_s();
    // Past b = e^700 the factor is below exp(-e^{700/(1+beta)}): zero in double.
    if (lb > 700.0) return -kInf;
    if (const auto series = log_ext_gamma_small_b(alpha, beta, lb)) return lead - ln_gamma_norm(p) + *series;
    return lead - ln_gamma_norm(p) + specfun::log_ext_upper_gamma(alpha, 0.0, std::exp(lb), beta, spec);
}

std::vector<double> scale_grid(double scale, int lo_pow, int hi_pow) {
    std::vector<double> pts{0.0};
    for (int k = lo_pow; k <= hi_pow; ++k) pts.push_back(scale * std::pow(4.0, k));
    pts.push_back(kInf);
    return pts;
}

// P(R <= r) or its complement by a single integral over the shadowing law.
specfun::QuadResult cdf_integral(const ChannelParams& p, double kap, double r, bool complement,
                                 const QuadratureSpec& spec) {
    const double ms = p.m_s();
    const double beta = p.xi / p.xi_s();
    const double D = std::exp(p.xi * std::log(kap * r * r));
    const double lg = specfun::ln_gamma(ms);
    auto f = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double w = std::exp((ms - 1.0) * std::log(t) - t - lg);
        if (w == 0.0) return 0.0;
        const double y = D * std::exp(-beta * std::log(t));
        return w * (complement ? specfun::gamma_q(p.m, y) : specfun::gamma_p(p.m, y));
    };
    std::vector<double> pts{0.0};
    const double t_switch = std::pow(D / p.m, 1.0 / beta);
    for (double s : {0.0625, 0.25, 1.0, 4.0, 16.0}) {
        if (std::isfinite(t_switch) && t_switch > 0.0) pts.push_back(s * t_switch);
        pts.push_back(s * std::max(ms, 1.0));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.push_back(kInf);
    return specfun::integrate_piecewise(f, pts, spec, std::max(ms, 1.0));
}

MetricResult foxh_result(const foxh::FoxHResult& h, double log_factor) {
    const double f = std::exp(log_factor);
    return {h.value * f, Method::foxh, h.err_est * f, ""};
}

}  // namespace

double envelope_pdf(const ChannelParams& p, double r, const QuadratureSpec& spec) {
    p.validate();
    require_positive_arg(r, "envelope level r");
    const double kap = kappa(p);
    if (r == 0.0) return origin_value(p, kap, 2.0);
    if (std::isinf(r)) return 0.0;
    return std::exp(log_density(p, kap, r, 2.0, spec));
}

double envelope_pdf_foxh(const ChannelParams& p, double r, const foxh::FoxHOptions& opts) {
    p.validate();
    require_positive_arg(r, "envelope level r");
    const double kap = kappa(p);
    if (r == 0.0) return origin_value(p, kap, 2.0);
    const foxh::FoxHResult h = foxh::foxh_eval(foxh::foxh_pdf_spec(p), kap * r * r, opts);
    return h.value * 2.0 / r * std::exp(-ln_gamma_norm(p));
}

double envelope_pdf_mixed_exponent(const ChannelParams& p, double r, const QuadratureSpec& spec) {
    p.validate();
    if (!p.shadowed()) throw DomainError("the mixed-exponent variant needs a shadowing component");
    if (!(r > 0.0)) throw DomainError("envelope level r must be > 0");
    const double kap = kappa(p);
    const double a = p.m * p.xi;
    const double lead = std::log(2.0 * p.xi) + a * std::log(kap) + (2.0 * a - 1.0) * std::log(r) - ln_gamma_norm(p);
    const double lb = a * std::log(kap) + 2.0 * p.xi * std::log(r);
    const double alpha = p.m_s() - a / p.xi_s();
    const double beta = p.xi / p.xi_s();
    if (lb > 700.0) return 0.0;
    if (const auto series = log_ext_gamma_small_b(alpha, beta, lb)) return std::exp(lead + *series);
    return std::exp(lead + specfun::log_ext_upper_gamma(alpha, 0.0, std::exp(lb), beta, spec));
}

double snr_pdf(const ChannelParams& p, double gamma_bar, double gamma, const QuadratureSpec& spec) {
    const ChannelParams q = p.with_omega(gamma_bar);
    q.validate();
    require_positive_arg(gamma, "SNR gamma");
    const double kap = kappa(q);
    if (gamma == 0.0) return origin_value(q, kap, 1.0);
    if (std::isinf(gamma)) return 0.0;
    return std::exp(log_density(q, kap, gamma, 1.0, spec));
}

MetricResult envelope_cdf(const ChannelParams& p, double r, const CdfOptions& opts) {
    p.validate();
    require_positive_arg(r, "envelope level r");
    if (r == 0.0) return {0.0, Method::closed_form, 0.0, ""};
    if (std::isinf(r)) return {1.0, Method::closed_form, 0.0, ""};
    const double kap = kappa(p);

    switch (opts.method) {
        case CdfMethod::gcq: {
            if (opts.gcq_nodes < 30) throw DomainError("GCQ path needs N >= 30 nodes");
            const specfun::GcqRule rule = specfun::gcq_rule(opts.gcq_nodes);
            long double sum = 0.0L;
            for (int n = 0; n < rule.size(); ++n)
                sum += rule.weights[n] * r * envelope_pdf(p, r * rule.nodes[n], opts.quad);
            return {static_cast<double>(sum), Method::gcq, 0.0, ""};
        }
        case CdfMethod::foxh: {
            try {
                const foxh::FoxHResult h = foxh::foxh_eval(foxh::foxh_cdf_spec(p), kap * r * r, opts.foxh);
                return foxh_result(h, -ln_gamma_norm(p));
            } catch (const ConvergenceError& e) {
                CdfOptions q = opts;
                q.method = CdfMethod::quadrature;
                MetricResult res = envelope_cdf(p, r, q);
                res.note = std::string("foxh unconverged, quadrature used: ") + e.what();
                return res;
            }
        }
        case CdfMethod::quadrature:
            break;
    }
    if (!p.shadowed()) {
        const double y = std::exp(p.xi * std::log(kap * r * r));
        return {specfun::gamma_p(p.m, y), Method::closed_form, 0.0, ""};
    }
    const specfun::QuadResult lower = cdf_integral(p, kap, r, false, opts.quad);
    if (lower.value <= 0.5) return {lower.value, Method::quadrature, lower.err_est, ""};
    const specfun::QuadResult upper = cdf_integral(p, kap, r, true, opts.quad);
    return {1.0 - upper.value, Method::quadrature, upper.err_est, ""};
}

MetricResult envelope_cdf_complement_foxh(const ChannelParams& p, double r, const foxh::FoxHOptions& opts) {
    p.validate();
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("envelope level r must be positive and finite");
    const double kap = kappa(p);
    const foxh::FoxHResult h = foxh::foxh_eval(foxh::foxh_cdf_complement_spec(p), kap * r * r, opts);
    return foxh_result(h, -ln_gamma_norm(p));
}

MetricResult snr_cdf(const ChannelParams& p, double gamma_bar, double gamma, const CdfOptions& opts) {
    require_positive_arg(gamma, "SNR gamma");
    return envelope_cdf(p.with_omega(gamma_bar), std::sqrt(gamma), opts);
}

double moment(const ChannelParams& p, double k) {
    p.validate();
    if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("moment order k must be >= 0");
    if (k == 0.0) return 1.0;
    const DerivedBetas d = derive_betas(p);
    double lv = specfun::ln_gamma(p.m + k / (2.0 * p.xi)) - specfun::ln_gamma(p.m) +
                0.5 * k * std::log(p.omega / (d.beta_s * d.beta));
    if (p.shadowed())
        lv += specfun::ln_gamma(p.m_s() + k / (2.0 * p.xi_s())) - specfun::ln_gamma(p.m_s());
    return std::exp(lv);
}

double snr_moment(const ChannelParams& p, double gamma_bar, double k) {
    return moment(p.with_omega(gamma_bar), 2.0 * k);
}

specfun::QuadResult snr_expectation(const ChannelParams& p, double gamma_bar, const specfun::Integrand& h,
                                    const QuadratureSpec& spec) {
    const ChannelParams q = p.with_omega(gamma_bar);
    q.validate();
    const double kap = kappa(q);
    auto f = [&](double g) {
        if (g <= 0.0) return 0.0;
        const double w = h(g);
        if (w == 0.0) return 0.0;
        return w * std::exp(log_density(q, kap, g, 1.0, spec));
    };
    return specfun::integrate_piecewise(f, scale_grid(gamma_bar, -8, 6), spec, gamma_bar);
}

MetricResult mgf(const ChannelParams& p, double gamma_bar, double s, const TransformOptions& opts) {
    p.validate();
    if (!(gamma_bar > 0.0)) throw DomainError("average SNR must be > 0");
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("MGF argument s must be > 0");
    if (opts.method == TransformMethod::foxh) {
        const ChannelParams q = p.with_omega(gamma_bar);
        try {
            const foxh::FoxHResult h = foxh::foxh_eval(foxh::foxh_mgf_spec(q), kappa(q) / s, opts.foxh);
            return foxh_result(h, -ln_gamma_norm(q));
        } catch (const ConvergenceError& e) {
            TransformOptions o = opts;
            o.method = TransformMethod::quadrature;
            MetricResult res = mgf(p, gamma_bar, s, o);
            res.note = std::string("foxh unconverged, quadrature used: ") + e.what();
            return res;
        }
    }
    const specfun::QuadResult r =
        snr_expectation(p, gamma_bar, [s](double g) { return std::exp(-s * g); }, opts.quad);
    return {r.value, Method::quadrature, r.err_est, ""};
}

}  // namespace egk
