// Shared helpers for the unit tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "egk/params.hpp"
#include "egk/specfun.hpp"

#include <boost/math/special_functions/trigamma.hpp>

namespace egk::test {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Deterministic uniform draws so property tests are reproducible.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    template <class T, std::size_t N>
    T pick(const T (&values)[N]) {
        return values[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng_)];
    }

private:
    std::mt19937_64 rng_;
};

// Integral of f over (0, inf) for envelope-type integrands, done in u = ln r
// where the integrand is a smooth bump. The mapping scale follows the spread
// of ln R, which is where heavy power-law shoulders would otherwise sit.
inline double integrate_envelope(const std::function<double(double)>& f, const ChannelParams& p,
                                 double rel_tol = 1e-11) {
    double var = boost::math::trigamma(p.m) / (4 * p.xi * p.xi);
    if (p.shadowed()) var += boost::math::trigamma(p.m_s()) / (4 * p.xi_s() * p.xi_s());
    const double centre = 0.5 * std::log(p.omega);
    const double width = std::sqrt(var);
    specfun::QuadratureSpec q;
    q.rel_tol = rel_tol;
    q.abs_tol = 1e-300;
    const auto g = [&](double u) {
        const double r = std::exp(centre + u);
        return r == 0.0 || std::isinf(r) ? 0.0 : f(r) * r;
    };
    return specfun::integrate(g, -INFINITY, 0.0, q, width).value + specfun::integrate(g, 0.0, INFINITY, q, width).value;
}

}  // namespace egk::test
