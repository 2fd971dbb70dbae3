#include "support.hpp"

#include "egk/distribution.hpp"
#include "egk/errors.hpp"
#include "egk/metrics.hpp"
#include "egk/montecarlo.hpp"
#include "egk/presets.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace egk;
using namespace egk::mc;

namespace {

struct Welford {
    double n = 0, mean = 0, m2 = 0;
    void add(double x) {
        n += 1;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double var() const { return m2 / (n - 1); }
    double se() const { return std::sqrt(var() / n); }
};

bool within(const EstimateResult& e, double want, double k = 4.0) {
    return std::abs(e.value - want) <= k * e.std_error;
}

}  // namespace

TEST_CASE("gamma variates") {
    Rng rng = make_stream(1, 0);
    Welford one, two;
    for (int i = 0; i < 1'000'000; ++i) one.add(gamma_variate(1.0, rng));
    CHECK(std::abs(one.mean - 1.0) < 4 * one.se());
    // variance check uses the sampling error of the variance, sqrt((mu4 - s^4)/n)
    std::vector<double> xs(1'000'000);
    for (double& x : xs) {
        x = gamma_variate(2.5, rng);
        two.add(x);
    }
    double mu4 = 0.0;
    for (double x : xs) mu4 += std::pow(x - two.mean, 4);
    mu4 /= xs.size();
    const double var_se = std::sqrt((mu4 - two.var() * two.var()) / xs.size());
    CHECK(std::abs(two.var() - 2.5) < 4 * var_se);
    CHECK_THROWS_AS(gamma_variate(0.0, rng), DomainError);
}

TEST_CASE("gamma variates pass a KS test at shape 1/2") {
    Rng rng = make_stream(2, 0);
    std::vector<double> xs(100'000);
    for (double& x : xs) x = gamma_variate(0.5, rng);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = specfun::gamma_p(0.5, xs[i]);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("generalized Nakagami draws") {
    Rng rng = make_stream(3, 0);
    Welford p1, p3, r;
    for (int i = 0; i < 1'000'000; ++i) {
        const double a = sample_gnm(1.0, 1.0, 1.0, rng);
        p1.add(a * a);
        const double b = sample_gnm(2.0, 1.0, 3.0, rng);
        p3.add(b * b);
        r.add(sample_gnm(1.5, 0.7, 1.0, rng));
    }
    CHECK(std::abs(p1.mean - 1.0) < 4 * p1.se());
    CHECK(std::abs(p3.mean - 3.0) < 4 * p3.se());
    CHECK(std::abs(r.mean - moment(make_unshadowed(1.5, 0.7), 1.0)) < 4 * r.se());
}

TEST_CASE("unshadowed draws follow the same path as sample_gnm") {
    const ChannelParams p = make_unshadowed(1.5, 0.7, 2.0);
    Rng a = make_stream(9, 4);
    Rng b = make_stream(9, 4);
    SimConfig cfg;
    for (int i = 0; i < 100; ++i) {
        const double x = sample_egk(p, cfg, a);
        const double y = sample_gnm(1.5, 0.7, 2.0, b);
        CHECK(std::abs(x - y) <= 1e-14 * y);
    }
}

TEST_CASE("EGK moments match the closed form") {
    SimConfig cfg;
    const ChannelParams re = make_params(1, 1, 1, 1, 1.7);
    CHECK(within(estimate(Statistic::moment(2.0), re, cfg), 1.7));
    const ChannelParams p = make_params(2.5, 0.8, 1.7, 1.2);
    const auto est = estimate_all({Statistic::moment(1), Statistic::moment(2), Statistic::moment(4)}, p, cfg);
    CHECK(within(est[0], moment(p, 1)));
    CHECK(within(est[1], moment(p, 2)));
    CHECK(within(est[2], moment(p, 4)));
    for (const auto& e : est) {
        CHECK(e.n == cfg.n_samples);
        CHECK(e.std_error > 0.0);
    }
}

TEST_CASE("estimators for the Rayleigh metrics") {
    SimConfig cfg;
    const ChannelParams ray = preset("rayleigh", 1.0);
    CHECK(within(estimate(Statistic::outage(3.0, 3.0), ray, cfg), 1.0 - std::exp(-1.0)));
    CHECK(within(estimate(Statistic::abep(1, 1, 10.0), ray, cfg), 1.0 / 22.0));
    CHECK(within(estimate(Statistic::capacity(1.0), ray, cfg), 0.86034738227088595119019539289));
}

TEST_CASE("closed forms agree with sampling across a parameter sample") {
    SimConfig cfg;
    cfg.seed = 1234;
    const ChannelParams tuples[] = {make_params(2.5, 0.8, 1.7, 1.2), make_params(0.7, 1.9, 3.0, 0.6, 2.0),
                                    make_params(4.0, 0.5, 0.9, 2.2, 0.5), make_unshadowed(1.2, 1.4, 3.0),
                                    make_params(1, 1, 1, 1),           make_params(2.0, 1.0, 1.5, 1.0)};
    for (const ChannelParams& p : tuples) {
        CAPTURE(p.m);
        CAPTURE(p.xi);
        const double x = std::sqrt(p.omega);
        const auto est = estimate_all({Statistic::moment(1.0), Statistic::cdf_at(x), Statistic::abep(1, 0.5, 4.0),
                                       Statistic::outage(4.0, 0.4), Statistic::capacity(4.0)},
                                      p, cfg);
        CHECK(within(est[0], moment(p, 1.0)));
        CHECK(within(est[1], envelope_cdf(p, x).value));
        CHECK(within(est[2], abep(p, 4.0, ModulationSpec{1, 0.5}).value));
        CHECK(within(est[3], outage_probability(p, 4.0, 0.4).value));
        CHECK(within(est[4], avg_capacity(p, CapacitySpec{1.0, 4.0}).value));
        CHECK(within(estimate_aof(p, cfg), aof(p)));
    }
}

TEST_CASE("reproducible and thread-count independent") {
    const ChannelParams p = make_params(2.5, 0.8, 1.7, 1.2);
    SimConfig cfg;
    cfg.n_samples = 300'001;
    cfg.threads = 1;
    const EstimateResult a = estimate(Statistic::moment(1.5), p, cfg);
    const EstimateResult b = estimate(Statistic::moment(1.5), p, cfg);
    cfg.threads = 3;
    const EstimateResult c = estimate(Statistic::moment(1.5), p, cfg);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.value == c.value);
    CHECK(a.std_error == c.std_error);
    cfg.seed = 43;
    CHECK(estimate(Statistic::moment(1.5), p, cfg).value != a.value);
    const auto r1 = draw_envelopes(p, cfg);
    cfg.threads = 1;
    CHECK(r1 == draw_envelopes(p, cfg));
}

TEST_CASE("omega split invariance") {
    const ChannelParams p = make_params(2.5, 0.8, 1.7, 1.2, 3.0);
    SimConfig a;
    a.omega_split = OmegaSplit{3.0, 1.0};
    SimConfig b = a;
    b.omega_split = OmegaSplit{1.0, 3.0};
    b.seed = 99;
    for (const Statistic& s : {Statistic::moment(1.0), Statistic::cdf_at(1.5), Statistic::capacity(2.0)}) {
        const EstimateResult x = estimate(s, p, a);
        const EstimateResult y = estimate(s, p, b);
        CHECK(std::abs(x.value - y.value) < 4.0 * std::hypot(x.std_error, y.std_error));
    }
    SimConfig bad;
    bad.omega_split = OmegaSplit{2.0, 2.0};
    CHECK_THROWS_AS(estimate(Statistic::moment(1.0), p, bad), DomainError);
}

TEST_CASE("the beta hook biases the estimate") {
    const ChannelParams p = preset("rayleigh", 1.0);
    SimConfig cfg;
    cfg.beta_scale = 1.1;
    CHECK_FALSE(within(estimate(Statistic::moment(2.0), p, cfg), 1.0));
    cfg.beta_scale = 0.0;
    CHECK_THROWS_AS(estimate(Statistic::moment(2.0), p, cfg), DomainError);
}

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.n_samples = 0;
    CHECK_THROWS_AS(estimate(Statistic::moment(1.0), preset("rayleigh", 1.0), cfg), DomainError);
}
