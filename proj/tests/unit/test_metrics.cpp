#include "support.hpp"

#include "egk/errors.hpp"
#include "egk/metrics.hpp"
#include "egk/presets.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace egk;
using egk::test::rel_err;

namespace {

// E_1(x) by its convergent power series.
double expint_e1(double x) {
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        sum += term / k;
    }
    return -std::numbers::egamma - std::log(x) - sum;
}

TransformOptions foxh_path() {
    TransformOptions o;
    o.method = TransformMethod::foxh;
    return o;
}

std::vector<ChannelParams> tuples() {
    return {make_params(2.5, 0.8, 1.7, 1.2), make_params(1.0, 1.5, 3.0, 0.7, 2.0), make_params(4.0, 0.6, 0.8, 2.0),
            make_params(0.7, 2.2, 5.0, 1.0, 0.5), make_unshadowed(1.8, 0.9)};
}

template <class F>
void check_monotone(const std::vector<double>& grid, F&& f, bool increasing) {
    double prev = f(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        CAPTURE(grid[i]);
        if (increasing) CHECK(v > prev);
        else CHECK(v < prev);
        prev = v;
    }
}

}  // namespace

TEST_CASE("amount of fading") {
    CHECK(aof(preset("rayleigh", 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(aof(make_params(1, 1, 1, 1)) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(aof(make_params(2, 1, 2, 1)) == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(aof(make_unshadowed(200.0, 1.0)) == doctest::Approx(1.0 / 200).epsilon(1e-10));
}

TEST_CASE("ABEP closed values") {
    const ChannelParams ray = preset("rayleigh", 1.0);
    for (const TransformOptions& o : {TransformOptions{}, foxh_path()}) {
        CHECK(std::abs(abep(ray, 10.0, {1, 1}, o).value - 1.0 / 22.0) < 1e-10);
        CHECK(std::abs(abep(ray, 10.0, {1, 0.5}, o).value - 0.5 * (1.0 - std::sqrt(10.0 / 11.0))) < 1e-10);
        CHECK(std::abs(abep(preset("nakagami-m", 1.0, {.m = 2.0}), 5.0, {1, 1}, o).value - 0.0408163265306122) <
              1e-8);
    }
}

TEST_CASE("ABEP and capacity paths agree") {
    for (const ChannelParams& p : tuples()) {
        for (double gb : {0.5, 5.0, 50.0}) {
            CAPTURE(p.m);
            CAPTURE(gb);
            for (const ModulationSpec mod : {ModulationSpec{1, 1}, ModulationSpec{0.5, 0.5}}) {
                const MetricResult a = abep(p, gb, mod);
                const MetricResult b = abep(p, gb, mod, foxh_path());
                CHECK(b.method == Method::foxh);
                CHECK(rel_err(b.value, a.value) < 1e-6);
            }
            const CapacitySpec cap{2.0, gb};
            CHECK(rel_err(avg_capacity(p, cap, foxh_path()).value, avg_capacity(p, cap).value) < 1e-6);
        }
    }
}

TEST_CASE("ABEP properties") {
    const ChannelParams p = make_params(2.0, 1.0, 2.0, 1.0);
    check_monotone({0.1, 0.5, 1, 2, 5, 10, 30, 100}, [&](double g) { return abep(p, g, {1, 1}).value; }, false);
    CHECK(std::abs(abep(p, 1e-8, {1, 1}).value - 0.5) < 1e-4);
    for (const ChannelParams& q : {preset("rayleigh", 1.0), p})
        for (double g : {0.3, 1.0, 3.0, 10.0, 40.0})
            CHECK(abep(q, g, {1, 0.5}).value <= abep(q, g, {1, 1}).value);
    CHECK_THROWS_AS(abep(p, 1.0, {0.7, 1}), DomainError);
    CHECK_THROWS_AS(abep(p, 0.0, {1, 1}), DomainError);
}

TEST_CASE("outage") {
    const ChannelParams ray = preset("rayleigh", 1.0);
    CHECK(rel_err(outage_probability(ray, 3.0, 3.0).value, 1.0 - std::exp(-1.0)) < 1e-12);
    CHECK(outage_probability(ray, 3.0, 0.0).value == 0.0);
    CHECK(outage_probability(make_params(2, 1, 2, 1), 3.0, 1e-9).value < 1e-8);
    CHECK(rel_err(outage_probability(make_params(2, 1, 2, 1), 1.0, 0.1).value,
                  0.0706765220490749466326594639448) < 1e-9);
    CHECK_THROWS_AS(outage_probability(ray, 1.0, -1.0), DomainError);
}

TEST_CASE("outage capacity") {
    const ChannelParams p = make_params(2.5, 0.8, 1.7, 1.2);
    const CapacitySpec cap{2.0, 4.0};
    CHECK(rel_err(outage_capacity(p, cap, 2.0 * std::log2(5.0)).value, outage_probability(p, 4.0, 4.0).value) <
          1e-12);
    CHECK(outage_capacity(p, cap, 0.0).value == 0.0);
    CHECK(rel_err(outage_capacity(preset("rayleigh", 1.0), {1.0, 1.0}, 1.0).value, 1.0 - std::exp(-1.0)) < 1e-12);
}

TEST_CASE("average capacity") {
    const double oracle = std::numbers::log2e * std::exp(1.0) * expint_e1(1.0);
    CHECK(std::abs(oracle - 0.86034738227088595119019539289) < 1e-13);
    const ChannelParams ray = preset("rayleigh", 1.0);
    CHECK(std::abs(avg_capacity(ray, {1.0, 1.0}).value - oracle) < 1e-6);
    CHECK(std::abs(avg_capacity(ray, {1.0, 1.0}, foxh_path()).value - oracle) < 1e-6);
    CHECK(rel_err(avg_capacity(ray, {3.0, 1.0}).value, 3.0 * oracle) < 1e-9);
    const ChannelParams p = make_params(2.0, 1.0, 2.0, 1.0);
    CHECK(avg_capacity(p, {1.0, 1e-6}).value < 2e-6 * std::numbers::log2e);
    check_monotone({0.1, 0.3, 1, 2, 5, 10, 20, 40, 70, 100},
                   [&](double g) { return avg_capacity(p, {1.0, g}).value; }, true);
    CHECK_THROWS_AS(avg_capacity(p, {0.0, 1.0}), DomainError);
}

TEST_CASE("severity trends") {
    const std::vector<double> m_grid{0.5, 1.0, 2.0, 4.0};
    const std::vector<double> shape_grid{0.5, 1.0, 2.0, 3.0};
    check_monotone(m_grid, [](double m) { return abep(make_params(m, 1.0, 2.0, 1.0), 10.0, {1, 1}).value; }, false);
    check_monotone(m_grid, [](double m) { return outage_probability(make_params(m, 1.0, 2.0, 1.0), 1.0, 0.1).value; },
                   false);
    check_monotone(shape_grid,
                   [](double x) { return outage_probability(make_params(2.0, x, 2.0, 1.0), 1.0, 0.1).value; }, false);
    const CapacitySpec cap{1.0, 10.0};
    check_monotone(m_grid, [&](double v) { return avg_capacity(make_params(v, 1, 2, 1), cap).value; }, true);
    check_monotone(shape_grid, [&](double v) { return avg_capacity(make_params(2, v, 2, 1), cap).value; }, true);
    check_monotone(m_grid, [&](double v) { return avg_capacity(make_params(2, 1, v, 1), cap).value; }, true);
    check_monotone(shape_grid, [&](double v) { return avg_capacity(make_params(2, 1, 2, v), cap).value; }, true);
    check_monotone(m_grid, [](double v) { return aof(make_params(v, 1, 2, 1)); }, false);
    check_monotone(shape_grid, [](double v) { return aof(make_params(2, v, 2, 1)); }, false);
    check_monotone(m_grid, [](double v) { return aof(make_params(2, 1, v, 1)); }, false);
    check_monotone(shape_grid, [](double v) { return aof(make_params(2, 1, 2, v)); }, false);
}
