// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace egk::specfun {

/// Integration control shared by every quadrature-backed routine.
struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;

    /// Throws DomainError unless both tolerances are positive and the
    /// subdivision budget is at least one.
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (10/21) quadrature on (a, b).
///
/// Either endpoint may be infinite; half-lines are mapped onto a finite
/// interval with t = a + L u / (1 - u) (and its mirror), where L is the
/// optional `scale` (default 1). Integrable algebraic endpoint
/// singularities are handled by bisection, since the rule never samples the
/// endpoints. Throws AccuracyError carrying the best estimate when the
/// subdivision budget runs out.
QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadratureSpec& spec = {}, double scale = 1.0);

/// Sum of integrate() over consecutive (points[i], points[i+1]). The last
/// point may be +infinity, in which case the final piece uses `tail_scale`
/// for its variable change. Points must be nondecreasing.
QuadResult integrate_piecewise(const Integrand& f, const std::vector<double>& points,
                               const QuadratureSpec& spec = {}, double tail_scale = 1.0);

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Gamma(x) for x > 0.
double gamma_fn(double x);

/// Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt.
double upper_gamma(double a, double x);

/// Lower incomplete gamma gamma(a, x) = int_0^x t^(a-1) e^(-t) dt.
double lower_gamma(double a, double x);

/// Regularised lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularised upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Extended upper incomplete gamma
///   Gamma(alpha, x, b, beta) = int_x^inf t^(alpha-1) exp(-t - b t^(-beta)) dt.
///
/// alpha <= 0 is admitted when b > 0 or x > 0. The integral is split at
/// max(x, b^(1/(1+beta))) and evaluated in scaled form, so results that
/// would over- or underflow a double should use log_ext_upper_gamma.
double ext_upper_gamma(double alpha, double x, double b, double beta,
                       const QuadratureSpec& spec = {});

/// Natural log of ext_upper_gamma; -inf when the integral underflows
/// completely (never for finite inputs in practice).
double log_ext_upper_gamma(double alpha, double x, double b, double beta,
                           const QuadratureSpec& spec = {});

/// Extended lower incomplete gamma
///   gamma(alpha, x, b, beta) = int_0^x t^(alpha-1) exp(-t - b t^(-beta)) dt.
double ext_lower_gamma(double alpha, double x, double b, double beta,
                       const QuadratureSpec& spec = {});

double log_ext_lower_gamma(double alpha, double x, double b, double beta,
                           const QuadratureSpec& spec = {});

/// Gauss-Chebyshev rule mapped to (0, 1):
///   weights[n] = pi/(2N) sin((2n-1) pi / (2N)),
///   nodes[n]   = 1/2 + 1/2 cos((2n-1) pi / (2N)),   n = 1..N.
/// sum_n weights[n] f(nodes[n]) approximates int_0^1 f(u) du.
struct GcqRule {
    std::vector<double> weights;
    std::vector<double> nodes;

    int size() const { return static_cast<int>(weights.size()); }
};

GcqRule gcq_rule(int n);

}  // namespace egk::specfun
