// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace egk {

/// Shadowing component (m_s, xi_s) of the composite envelope.
struct Shadowing {
    double m_s = 1.0;
    double xi_s = 1.0;
};

/// The five EGK parameters. An empty `shadowing` is the m_s -> infinity
/// limit, where the envelope is generalized Nakagami-m with power `omega`.
struct ChannelParams {
    double m = 1.0;
    double xi = 1.0;
    std::optional<Shadowing> shadowing;
    double omega = 1.0;

    /// Throws DomainError unless m >= 0.5, xi > 0, m_s >= 0.5, xi_s > 0 and
    /// omega > 0, all finite.
    void validate() const;

    bool shadowed() const { return shadowing.has_value(); }
    double m_s() const { return shadowing ? shadowing->m_s : 0.0; }
    double xi_s() const { return shadowing ? shadowing->xi_s : 0.0; }

    ChannelParams with_omega(double w) const {
        ChannelParams p = *this;
        p.omega = w;
        return p;
    }
};

ChannelParams make_params(double m, double xi, double m_s, double xi_s, double omega = 1.0);
ChannelParams make_unshadowed(double m, double xi, double omega = 1.0);

struct DerivedBetas {
    double beta = 1.0;
    double beta_s = 1.0;
};

/// beta = Gamma(m + 1/xi)/Gamma(m), beta_s likewise (1 without shadowing).
DerivedBetas derive_betas(const ChannelParams& p);

/// kappa = beta_s beta / omega, the scale of the squared envelope.
double kappa(const ChannelParams& p);

/// ln(Gamma(m) Gamma(m_s)), dropping the shadowing factor when absent.
double ln_gamma_norm(const ChannelParams& p);

enum class Method { closed_form, quadrature, series, gcq, foxh, monte_carlo, failed };

std::string_view method_name(Method m);

/// A computed statistic together with how it was obtained.
struct MetricResult {
    double value = 0.0;
    Method method = Method::closed_form;
    double err_est = 0.0;
    std::string note;
};

/// Split of the total power into shadowing and multipath parts,
/// omega = omega_s * omega_x.
struct OmegaSplit {
    double omega_s = 1.0;
    double omega_x = 1.0;

    double product() const { return omega_s * omega_x; }
};

/// Throws DomainError unless both parts are positive and their product
/// matches `omega` to a relative 1e-12.
void check_split(const OmegaSplit& split, double omega);

}  // namespace egk
