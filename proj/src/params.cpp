// SPDX-License-Identifier: Apache-2.0
#include "egk/params.hpp"

#include "egk/errors.hpp"
#include "egk/specfun.hpp"

#include <cmath>
#include <sstream>

namespace egk {
namespace {

void need(bool ok, const char* what, double v) {
    if (ok && std::isfinite(v)) return;
    std::ostringstream os;
    os << what << " (got " << v << ")";
    throw DomainError(os.str());
}

double gamma_ratio(double m, double xi) {
    return std::exp(specfun::ln_gamma(m + 1.0 / xi) - specfun::ln_gamma(m));
}

}  // namespace

void ChannelParams::validate() const {
    need(m >= 0.5, "fading figure m must be >= 0.5", m);
    need(xi > 0.0, "shaping factor xi must be > 0", xi);
    need(omega > 0.0, "average power omega must be > 0", omega);
    if (shadowing) {
        need(shadowing->m_s >= 0.5, "shadowing figure m_s must be >= 0.5", shadowing->m_s);
        need(shadowing->xi_s > 0.0, "shadowing shaping factor xi_s must be > 0", shadowing->xi_s);
    }
}

ChannelParams make_params(double m, double xi, double m_s, double xi_s, double omega) {
    ChannelParams p{m, xi, Shadowing{m_s, xi_s}, omega};
    p.validate();
    return p;
}

ChannelParams make_unshadowed(double m, double xi, double omega) {
    ChannelParams p{m, xi, std::nullopt, omega};
    p.validate();
    return p;
}

DerivedBetas derive_betas(const ChannelParams& p) {
    p.validate();
    DerivedBetas d;
    d.beta = gamma_ratio(p.m, p.xi);
    if (p.shadowing) d.beta_s = gamma_ratio(p.shadowing->m_s, p.shadowing->xi_s);
    return d;
}

double kappa(const ChannelParams& p) {
    const DerivedBetas d = derive_betas(p);
    return d.beta_s * d.beta / p.omega;
}

double ln_gamma_norm(const ChannelParams& p) {
    double v = specfun::ln_gamma(p.m);
    if (p.shadowing) v += specfun::ln_gamma(p.shadowing->m_s);
    return v;
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::series: return "series";
        case Method::gcq: return "gcq";
        case Method::foxh: return "foxh";
        case Method::monte_carlo: return "monte_carlo";
        case Method::failed: return "failed";
    }
    return "unknown";
}

void check_split(const OmegaSplit& split, double omega) {
    need(split.omega_s > 0.0, "omega_s must be > 0", split.omega_s);
    need(split.omega_x > 0.0, "omega_x must be > 0", split.omega_x);
    const double prod = split.product();
    if (std::abs(prod - omega) > 1e-12 * omega) {
        std::ostringstream os;
        os << "omega split " << split.omega_s << " * " << split.omega_x << " does not equal omega " << omega;
        throw DomainError(os.str());
    }
}

}  // namespace egk
