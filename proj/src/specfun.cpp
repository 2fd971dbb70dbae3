// SPDX-License-Identifier: Apache-2.0
#include "egk/specfun.hpp"

#include "egk/errors.hpp"

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace egk::specfun {
namespace {

using Policy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::errno_on_error>,
    boost::math::policies::underflow_error<boost::math::policies::errno_on_error>,
    boost::math::policies::promote_double<false>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be finite";
        throw DomainError(os.str());
    }
}

// Exponent of the extended-gamma integrand,
//   phi(t) = (alpha - 1) ln t - t - b t^(-beta).
struct Exponent {
    double alpha;
    double b;
    double beta;

    double operator()(double t) const {
        if (t <= 0.0) return -kInf;
        const double lt = std::log(t);
        const double pull = b > 0.0 ? std::exp(std::log(b) - beta * lt) : 0.0;
        return (alpha - 1.0) * lt - t - pull;
    }
    // t * phi'(t); strictly decreasing in t.
    double slope_times_t(double t) const {
        return alpha - 1.0 - t + (b > 0.0 ? beta * std::exp(std::log(b) - beta * std::log(t)) : 0.0);
    }
    // phi(t) - phi(c) without the cancellation that hits when |phi(c)| is huge.
    // Near the peak the first-order terms cancel, so they are grouped into
    // `lin` (zero at an exact peak) and the rest is carried as second-order
    // remainders that are each nonpositive.
    double delta(double t, double c) const {
        if (t <= 0.0 || std::isinf(t)) return -kInf;
        const double s = (t - c) / c;
        const double ls = std::log1p(s);
        const double k = b > 0.0 ? std::exp(std::log(b) - beta * std::log(c)) : 0.0;
        double lin = (alpha - 1.0) + beta * k - c;
        // below the rounding of c itself the peak is exact
        if (std::abs(lin) <= 64.0 * std::numeric_limits<double>::epsilon() * (c + beta * k + std::abs(alpha - 1.0)))
            lin = 0.0;
        return lin * ls + c * log1p_minus(s) - k * expm1_minus(-beta * ls);
    }
    // log1p(s) - s and expm1(x) - x, accurate for small arguments.
    static double log1p_minus(double s) {
        if (std::abs(s) > 0.1) return std::log1p(s) - s;
        double term = -s * s / 2.0, sum = 0.0;
        for (int n = 2; n < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++n) {
            sum += term;
            term *= -s * n / (n + 1.0);
        }
        return sum;
    }
    static double expm1_minus(double x) {
        if (std::abs(x) > 0.1) return std::expm1(x) - x;
        double term = x * x / 2.0, sum = 0.0;
        for (int n = 2; n < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++n) {
            sum += term;
            term *= x / (n + 1.0);
        }
        return sum;
    }
    double first(double t) const { return slope_times_t(t) / t; }
    double second(double t) const {
        const double pull = b > 0.0 ? beta * (beta + 1.0) * std::exp(std::log(b) - (beta + 2.0) * std::log(t)) : 0.0;
        return -(alpha - 1.0) / (t * t) - pull;
    }
};

// Location of the maximum of phi on (0, inf); 0 when phi is decreasing
// everywhere (b = 0, alpha <= 1).
double exponent_peak(const Exponent& phi) {
    if (phi.b <= 0.0) return phi.alpha > 1.0 ? phi.alpha - 1.0 : 0.0;
    // h(y) = t phi'(t) at t = e^y is strictly decreasing in y.
    auto h = [&](double y) { return phi.slope_times_t(std::exp(y)); };
    const double guess = std::max({std::pow(phi.b, 1.0 / (1.0 + phi.beta)), phi.alpha - 1.0, 1e-300});
    double lo = std::log(guess);
    double hi = lo;
    double step = 1.0;
    while (h(lo) < 0.0 && lo > -745.0) {
        lo -= step;
        step *= 2.0;
    }
    step = 1.0;
    while (h(hi) > 0.0 && hi < 709.0) {
        hi += step;
        step *= 2.0;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

// Characteristic width of the integrand around `c`.
double local_width(const Exponent& phi, double c, bool interior_peak) {
    double w = kInf;
    const double d2 = phi.second(c);
    if (d2 < 0.0 && std::isfinite(d2)) w = 1.0 / std::sqrt(-d2);
    if (!interior_peak) {
        const double d1 = std::abs(phi.first(c));
        if (d1 > 0.0 && std::isfinite(d1)) w = std::min(w, 1.0 / d1);
    }
    if (!std::isfinite(w) || w <= 0.0) w = std::max(c, 1.0);
    return w;
}

// log int_lo^hi exp(phi(t)) dt for hi possibly infinite, evaluated piecewise
// on a grid that is geometric in the distance from the dominant point.
double log_window_integral(const Exponent& phi, double lo, double hi,
                           const std::vector<double>& extra_breaks, const QuadratureSpec& spec) {
    const double peak = exponent_peak(phi);
    const bool interior = peak > lo && peak < hi;
    const double c = std::clamp(peak, lo, hi);
    const double w = local_width(phi, c, interior);
    const double ref = phi(c);
    if (!std::isfinite(ref)) {
        std::ostringstream os;
        os << "extended incomplete gamma exponent not finite at t = " << c;
        throw NumericalError(os.str());
    }

    // A peak this sharp is narrower than the spacing quadrature can resolve in
    // t; Laplace's error is O(w/c) relative to a log value of order -c.
    if (interior && w < 1e-6 * c) {
        const double k = w * std::numbers::sqrt2;
        const double mass = 0.5 * (std::erfc((lo - c) / k) - (std::isfinite(hi) ? std::erfc((hi - c) / k) : 0.0));
        return ref + std::log(w * std::sqrt(2.0 * std::numbers::pi) * mass);
    }

    std::vector<double> breaks{lo, c};
    for (double d = w; c - d > lo; d *= 2.0) breaks.push_back(c - d);
    if (std::isfinite(hi)) {
        for (double d = w; c + d < hi; d *= 2.0) breaks.push_back(c + d);
        breaks.push_back(hi);
    } else {
        const double reach = std::max(1.0, c);
        for (double d = w; d < reach; d *= 2.0) breaks.push_back(c + d);
    }
    for (double e : extra_breaks)
        if (e > lo && e < hi) breaks.push_back(e);
    std::sort(breaks.begin(), breaks.end());
    // near-coincident breaks leave slivers the quadrature cannot resolve
    const double gap = 1e-6 * w;
    breaks.erase(std::unique(breaks.begin(), breaks.end(), [&](double u, double v) { return v - u <= gap; }),
                 breaks.end());

    auto scaled = [&](double t) { return std::exp(c > 0.0 ? phi.delta(t, c) : phi(t) - ref); };
    long double total = 0.0L;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        total += integrate(scaled, breaks[i], breaks[i + 1], spec).value;
    if (!std::isfinite(hi)) {
        const double start = breaks.back();
        total += integrate(scaled, start, kInf, spec, std::max(w, 1.0)).value;
    }
    if (total <= 0.0L) return -kInf;
    return ref + std::log(static_cast<double>(total));
}

void check_ext_args(double alpha, double x, double b, double beta) {
    require_finite(alpha, "alpha");
    require_finite(x, "x");
    require_finite(b, "b");
    require_finite(beta, "beta");
    if (!(beta > 0.0)) throw DomainError("extended incomplete gamma needs beta > 0");
    if (x < 0.0) throw DomainError("extended incomplete gamma needs x >= 0");
    if (b < 0.0) throw DomainError("extended incomplete gamma needs b >= 0");
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("ln_gamma needs x > 0");
    require_finite(x, "x");
    return boost::math::lgamma(x, Policy());
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw DomainError("gamma needs x > 0");
    require_finite(x, "x");
    return boost::math::tgamma(x, Policy());
}

double upper_gamma(double a, double x) {
    if (!(a > 0.0)) throw DomainError("upper_gamma needs a > 0");
    if (!(x >= 0.0)) throw DomainError("upper_gamma needs x >= 0");
    require_finite(a, "a");
    if (std::isinf(x)) return 0.0;
    return boost::math::tgamma(a, x, Policy());
}

double lower_gamma(double a, double x) {
    if (!(a > 0.0)) throw DomainError("lower_gamma needs a > 0");
    if (!(x >= 0.0)) throw DomainError("lower_gamma needs x >= 0");
    require_finite(a, "a");
    if (std::isinf(x)) return gamma_fn(a);
    return boost::math::tgamma_lower(a, x, Policy());
}

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw DomainError("gamma_p needs a > 0");
    if (!(x >= 0.0)) throw DomainError("gamma_p needs x >= 0");
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(a, x, Policy());
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw DomainError("gamma_q needs a > 0");
    if (!(x >= 0.0)) throw DomainError("gamma_q needs x >= 0");
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(a, x, Policy());
}

double log_ext_upper_gamma(double alpha, double x, double b, double beta, const QuadratureSpec& spec) {
    check_ext_args(alpha, x, b, beta);
    if (b == 0.0) {
        if (alpha <= 0.0 && x == 0.0)
            throw DivergenceError("extended upper gamma diverges at the origin (alpha <= 0, x = 0, b = 0)");
        if (alpha > 0.0) {
            const double q = boost::math::gamma_q(alpha, x, Policy());
            if (q > 0.0 && std::isfinite(q)) return std::log(q) + ln_gamma(alpha);
        }
    }
    const Exponent phi{alpha, b, beta};
    std::vector<double> breaks;
    if (b > 0.0) breaks.push_back(std::pow(b, 1.0 / (1.0 + beta)));
    return log_window_integral(phi, x, kInf, breaks, spec);
}

double ext_upper_gamma(double alpha, double x, double b, double beta, const QuadratureSpec& spec) {
    return std::exp(log_ext_upper_gamma(alpha, x, b, beta, spec));
}

double log_ext_lower_gamma(double alpha, double x, double b, double beta, const QuadratureSpec& spec) {
    check_ext_args(alpha, x, b, beta);
    if (alpha <= 0.0 && b == 0.0)
        throw DivergenceError("extended lower gamma diverges at the origin (alpha <= 0, b = 0)");
    if (x == 0.0) return -kInf;
    if (b == 0.0) {
        const double p = boost::math::gamma_p(alpha, x, Policy());
        if (p > 0.0 && std::isfinite(p)) return std::log(p) + ln_gamma(alpha);
    }
    const Exponent phi{alpha, b, beta};
    std::vector<double> breaks;
    if (b > 0.0) breaks.push_back(std::pow(b, 1.0 / (1.0 + beta)));
    return log_window_integral(phi, 0.0, x, breaks, spec);
}

double ext_lower_gamma(double alpha, double x, double b, double beta, const QuadratureSpec& spec) {
    return std::exp(log_ext_lower_gamma(alpha, x, b, beta, spec));
}

}  // namespace egk::specfun
