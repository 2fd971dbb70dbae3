#include "egk/errors.hpp"
#include "egk/presets.hpp"

#include <doctest.h>

#include <set>
#include <string>

using namespace egk;

TEST_CASE("catalog shape") {
    const auto& all = builtin_presets();
    CHECK(all.size() >= 15);
    std::set<std::string> names;
    for (const Preset& p : all) CHECK(names.insert(p.name).second);
    CHECK(names.count("generalized-k") == 1);
    CHECK(names.count("k-distribution") == 1);
}

TEST_CASE("shipped file matches the compiled-in catalog") {
    const auto from_file = load_presets(std::string(EGK_TEST_DATA_DIR) + "/presets.cfg");
    const auto& builtin = builtin_presets();
    REQUIRE(from_file.size() == builtin.size());
    for (std::size_t i = 0; i < builtin.size(); ++i) CHECK(from_file[i].name == builtin[i].name);
}

TEST_CASE("fixed rows") {
    const ChannelParams r = preset("rayleigh", 2.0);
    CHECK(r.m == 1.0);
    CHECK(r.xi == 1.0);
    CHECK_FALSE(r.shadowed());
    CHECK(r.omega == 2.0);
    const ChannelParams k = preset("k-distribution", 1.0, {.m = 2.5});
    CHECK(k.m == 2.5);
    CHECK(k.xi == 1.0);
    CHECK(k.m_s() == 1.0);
    CHECK(k.xi_s() == 1.0);
    CHECK(preset("exponential", 1.0).xi == 0.5);
    CHECK(preset("maxwell", 1.0).m == 1.5);
}

TEST_CASE("free symbols are required and substituted") {
    const ChannelParams gk = preset("generalized-k", 1.0, {.m = 2.0, .m_s = 1.5});
    CHECK(gk.m == 2.0);
    CHECK(gk.xi == 1.0);
    CHECK(gk.m_s() == 1.5);
    CHECK(gk.xi_s() == 1.0);
    const ChannelParams wg = preset("weibull-gamma", 1.0, {.xi = 1.7, .m_s = 3.0});
    CHECK(wg.m == 1.0);
    CHECK(wg.xi == 1.7);
    CHECK(wg.m_s() == 3.0);
    CHECK(wg.xi_s() == 1.0);
    CHECK(preset("generalized-gamma", 1.0, {.m = 2.0, .xi = 3.0}).xi == 1.5);
    CHECK_THROWS_AS(preset("generalized-k", 1.0, {.m = 2.0}), DomainError);
    CHECK(find_preset("gnm-weibull").free_symbols().size() == 3);
}

TEST_CASE("fixed slots reject overrides") {
    CHECK_THROWS_AS(preset("rayleigh", 1.0, {.m = 2.0}), DomainError);
}

TEST_CASE("unknown name lists the catalog") {
    try {
        preset("no-such-row", 1.0);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("rayleigh") != std::string::npos);
        CHECK(msg.find("generalized-k") != std::string::npos);
    }
}

TEST_CASE("parser errors carry line numbers") {
    CHECK(parse_presets("# comment\n\nfoo 1 1 none - src\n").size() == 1);
    try {
        parse_presets("foo 1 1 none - a\nbar 1 q none - b\n");
        FAIL("expected a parse error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_presets("foo 1 1 none - a\nfoo 2 1 none - b\n"), DomainError);
    CHECK_THROWS_AS(parse_presets("foo 1 1\n"), DomainError);
    CHECK_THROWS_AS(load_presets("/nonexistent/presets.cfg"), DomainError);
}
