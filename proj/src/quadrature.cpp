// SPDX-License-Identifier: Apache-2.0
#include "egk/errors.hpp"
#include "egk/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace egk::specfun {
namespace {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd indices are
// the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Segment {
    double a;
    double b;
    double value;
    double err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

double checked(const Integrand& f, double t) {
    const double v = f(t);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "integrand is not finite at t = " << t;
        throw NumericalError(os.str());
    }
    return v;
}

// One 21-point Kronrod panel with the QUADPACK error heuristic.
Segment kronrod21(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = checked(f, center);

    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double lo = checked(f, center - dx);
        const double hi = checked(f, center + dx);
        f1[j] = lo;
        f2[j] = hi;
        resk += kWgk[j] * (lo + hi);
        resabs += kWgk[j] * (std::abs(lo) + std::abs(hi));
        if (j % 2 == 1) resg += kWg[j / 2] * (lo + hi);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    return {a, b, value, err};
}

QuadResult adaptive_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    std::priority_queue<Segment> heap;
    Segment first = kronrod21(f, a, b);
    double total = first.value;
    double total_err = first.err;
    heap.push(first);

    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };

    int subdivisions = 1;
    while (total_err > tolerance()) {
        if (subdivisions >= spec.max_subdivisions) {
            std::ostringstream os;
            os << "quadrature did not converge on (" << a << ", " << b << ") after "
               << subdivisions << " subdivisions (estimate " << total << " +/- " << total_err << ")";
            throw AccuracyError(os.str(), total, total_err);
        }
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval cannot be split further in double precision.
            std::ostringstream os;
            os << "quadrature hit round-off limit near t = " << worst.a << " (estimate " << total
               << " +/- " << total_err << ")";
            throw AccuracyError(os.str(), total, total_err);
        }
        heap.pop();
        const Segment left = kronrod21(f, worst.a, mid);
        const Segment right = kronrod21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        // Re-sum periodically so the running totals do not drift.
        if (subdivisions % 64 == 0) {
            auto copy = heap;
            long double v = 0.0L;
            long double e = 0.0L;
            while (!copy.empty()) {
                v += copy.top().value;
                e += copy.top().err;
                copy.pop();
            }
            total = static_cast<double>(v);
            total_err = static_cast<double>(e);
        }
    }

    long double v = 0.0L;
    while (!heap.empty()) {
        v += heap.top().value;
        heap.pop();
    }
    return {static_cast<double>(v), total_err};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1)
        throw DomainError("quadrature needs at least one subdivision");
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                     double scale) {
    spec.validate();
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integration limits must not be NaN");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("integration scale must be positive");
    if (a == b) return {0.0, 0.0};
    if (a > b) {
        QuadResult r = integrate(f, b, a, spec, scale);
        return {-r.value, r.err_est};
    }

    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (lo_inf && hi_inf) {
        const QuadResult left = integrate(f, a, 0.0, spec, scale);
        const QuadResult right = integrate(f, 0.0, b, spec, scale);
        return {left.value + right.value, left.err_est + right.err_est};
    }
    if (hi_inf) {
        const Integrand g = [&](double u) {
            const double w = 1.0 - u;
            if (w <= 0.0) return 0.0;
            const double v = f(a + scale * u / w);
            return v == 0.0 ? 0.0 : v * scale / (w * w);
        };
        return adaptive_finite(g, 0.0, 1.0, spec);
    }
    if (lo_inf) {
        const Integrand g = [&](double u) {
            const double w = 1.0 - u;
            if (w <= 0.0) return 0.0;
            const double v = f(b - scale * u / w);
            return v == 0.0 ? 0.0 : v * scale / (w * w);
        };
        return adaptive_finite(g, 0.0, 1.0, spec);
    }
    return adaptive_finite(f, a, b, spec);
}

QuadResult integrate_piecewise(const Integrand& f, const std::vector<double>& points,
                               const QuadratureSpec& spec, double tail_scale) {
    if (points.size() < 2) throw DomainError("piecewise integration needs at least two points");
    long double value = 0.0L;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1] < points[i]) throw DomainError("piecewise integration points must be nondecreasing");
        const bool tail = std::isinf(points[i + 1]);
        const QuadResult part = integrate(f, points[i], points[i + 1], spec, tail ? tail_scale : 1.0);
        value += part.value;
        err += part.err_est;
    }
    return {static_cast<double>(value), err};
}

GcqRule gcq_rule(int n) {
    if (n < 1) throw DomainError("Gauss-Chebyshev rule needs at least one node");
    GcqRule rule;
    rule.weights.reserve(n);
    rule.nodes.reserve(n);
    const double pi = std::numbers::pi;
    for (int k = 1; k <= n; ++k) {
        const double angle = (2.0 * k - 1.0) * pi / (2.0 * n);
        rule.weights.push_back(pi / (2.0 * n) * std::sin(angle));
        rule.nodes.push_back(0.5 + 0.5 * std::cos(angle));
    }
    return rule;
}

}  // namespace egk::specfun
