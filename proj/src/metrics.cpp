// SPDX-License-Identifier: Apache-2.0
#include "egk/metrics.hpp"

#include "egk/errors.hpp"
#include "egk/foxh.hpp"

#include <cmath>
#include <numbers>

namespace egk {
namespace {

bool is_half_or_one(double v) { return v == 1.0 || v == 0.5; }

template <class Fallback>
MetricResult with_fallback(const foxh::FoxHSpec& spec, double z, double log_factor, const TransformOptions& opts,
                           Fallback&& fallback) {
    try {
        const foxh::FoxHResult h = foxh::foxh_eval(spec, z, opts.foxh);
        const double f = std::exp(log_factor);
        return {h.value * f, Method::foxh, h.err_est * f, ""};
    } catch (const ConvergenceError& e) {
        MetricResult res = fallback();
        res.note = std::string("foxh unconverged, quadrature used: ") + e.what();
        return res;
    }
}

}  // namespace

void ModulationSpec::validate() const {
    if (!is_half_or_one(a) || !is_half_or_one(b)) throw DomainError("modulation parameters a and b must be 1 or 1/2");
}

void CapacitySpec::validate() const {
    if (!(bandwidth_w > 0.0) || !std::isfinite(bandwidth_w)) throw DomainError("bandwidth must be > 0");
    if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar)) throw DomainError("average SNR must be > 0");
}

double aof(const ChannelParams& p) {
    p.validate();
    using specfun::ln_gamma;
    double lv = ln_gamma(p.m) + ln_gamma(p.m + 2.0 / p.xi) - 2.0 * ln_gamma(p.m + 1.0 / p.xi);
    if (p.shadowed()) {
        const double ms = p.m_s();
        const double xis = p.xi_s();
        lv += ln_gamma(ms) + ln_gamma(ms + 2.0 / xis) - 2.0 * ln_gamma(ms + 1.0 / xis);
    }
    return std::expm1(lv);
}

MetricResult abep(const ChannelParams& p, double gamma_bar, const ModulationSpec& mod, const TransformOptions& opts) {
    p.validate();
    mod.validate();
    if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar)) throw DomainError("average SNR must be > 0");
    auto quadrature = [&]() -> MetricResult {
        const specfun::QuadResult r = snr_expectation(
            p, gamma_bar, [&](double g) { return 0.5 * specfun::gamma_q(mod.b, mod.a * g); }, opts.quad);
        return {r.value, Method::quadrature, r.err_est, ""};
    };
    if (opts.method == TransformMethod::quadrature) return quadrature();
    const ChannelParams q = p.with_omega(gamma_bar);
    const double log_factor = -std::log(2.0) - specfun::ln_gamma(mod.b) - ln_gamma_norm(q);
    return with_fallback(foxh::foxh_abep_spec(q, mod.b), kappa(q) / mod.a, log_factor, opts, quadrature);
}

MetricResult outage_probability(const ChannelParams& p, double gamma_bar, double gamma_th, const CdfOptions& opts) {
    if (!(gamma_th >= 0.0)) throw DomainError("outage threshold must be >= 0");
    return snr_cdf(p, gamma_bar, gamma_th, opts);
}

MetricResult outage_capacity(const ChannelParams& p, const CapacitySpec& cap, double c_th, const CdfOptions& opts) {
    cap.validate();
    if (!(c_th >= 0.0)) throw DomainError("capacity threshold must be >= 0");
    return snr_cdf(p, cap.gamma_bar, std::expm1(c_th / cap.bandwidth_w * std::numbers::ln2), opts);
}

MetricResult avg_capacity(const ChannelParams& p, const CapacitySpec& cap, const TransformOptions& opts) {
    p.validate();
    cap.validate();
    auto quadrature = [&]() -> MetricResult {
        const specfun::QuadResult r =
            snr_expectation(p, cap.gamma_bar, [](double g) { return std::log1p(g); }, opts.quad);
        const double f = cap.bandwidth_w / std::numbers::ln2;
        return {r.value * f, Method::quadrature, r.err_est * f, ""};
    };
    if (opts.method == TransformMethod::quadrature) return quadrature();
    const ChannelParams q = p.with_omega(cap.gamma_bar);
    const double log_factor = std::log(cap.bandwidth_w / std::numbers::ln2) - ln_gamma_norm(q);
    return with_fallback(foxh::foxh_capacity_spec(q), kappa(q), log_factor, opts, quadrature);
}

}  // namespace egk
