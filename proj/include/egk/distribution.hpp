// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "egk/foxh.hpp"
#include "egk/params.hpp"
#include "egk/specfun.hpp"

namespace egk {

enum class CdfMethod { quadrature, foxh, gcq };
enum class TransformMethod { quadrature, foxh };

struct CdfOptions {
    CdfMethod method = CdfMethod::quadrature;
    int gcq_nodes = 30;
    specfun::QuadratureSpec quad{};
    foxh::FoxHOptions foxh{};
};

struct TransformOptions {
    TransformMethod method = TransformMethod::quadrature;
    specfun::QuadratureSpec quad{};
    foxh::FoxHOptions foxh{};
};

/// Envelope density p_R(r) through the extended incomplete gamma function;
/// the generalized Nakagami-m density when shadowing is absent. At r = 0
/// returns the limiting value, throwing DomainError if it is unbounded.
double envelope_pdf(const ChannelParams& p, double r, const specfun::QuadratureSpec& spec = {});

/// Same density through the H^{2,0}_{0,2} representation.
double envelope_pdf_foxh(const ChannelParams& p, double r, const foxh::FoxHOptions& opts = {});

/// The density with the third ext-gamma argument as (kappa)^{m xi} r^{2 xi}
/// instead of (kappa r^2)^xi. Not a density in general; kept as a
/// regression reference.
double envelope_pdf_mixed_exponent(const ChannelParams& p, double r,
                                    const specfun::QuadratureSpec& spec = {});

/// SNR density; gamma_bar replaces omega.
double snr_pdf(const ChannelParams& p, double gamma_bar, double gamma,
               const specfun::QuadratureSpec& spec = {});

/// P(R <= r). The quadrature path integrates the multipath CDF against the
/// shadowing law; foxh falls back to quadrature with a note on failure.
MetricResult envelope_cdf(const ChannelParams& p, double r, const CdfOptions& opts = {});

/// 1 - P(R <= r) through the H^{3,0}_{1,3} form.
MetricResult envelope_cdf_complement_foxh(const ChannelParams& p, double r,
                                          const foxh::FoxHOptions& opts = {});

MetricResult snr_cdf(const ChannelParams& p, double gamma_bar, double gamma, const CdfOptions& opts = {});

/// E[R^k] in closed form.
double moment(const ChannelParams& p, double k);

/// E[G^k] = E[R^{2k}] with omega -> gamma_bar.
double snr_moment(const ChannelParams& p, double gamma_bar, double k);

/// E[exp(-s G)].
MetricResult mgf(const ChannelParams& p, double gamma_bar, double s, const TransformOptions& opts = {});

/// E[h(G)] by quadrature against the SNR density.
specfun::QuadResult snr_expectation(const ChannelParams& p, double gamma_bar,
                                    const specfun::Integrand& h,
                                    const specfun::QuadratureSpec& spec = {});

}  // namespace egk
