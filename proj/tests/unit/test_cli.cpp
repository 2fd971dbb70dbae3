#include "egk/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "egk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = egk::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct Row {
    double variable;
    std::string value;
    std::string method;
};

std::vector<Row> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "variable,value,method,err_est");
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string var, value, method;
        std::getline(fields, var, ',');
        std::getline(fields, value, ',');
        std::getline(fields, method, ',');
        rows.push_back({std::stod(var), value, method});
    }
    return rows;
}

}  // namespace

TEST_CASE("eval prints one JSON object") {
    const Run r = run({"eval", "pdf", "--preset", "rayleigh", "--omega", "1", "--r", "1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["statistic"] == "pdf");
    CHECK(j["value"].get<double>() == doctest::Approx(0.7357589).epsilon(1e-7));
    CHECK(j.contains("err_est"));
    CHECK(j.contains("method"));
    CHECK(j["inputs"]["m"] == 1.0);
}

TEST_CASE("eval examples") {
    const Run a = run({"eval", "aof", "--m", "1", "--xi", "1", "--ms", "1", "--xis", "1"});
    REQUIRE(a.code == 0);
    CHECK(json::parse(a.out)["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-14));
    const Run b = run({"eval", "abep", "--preset", "rayleigh", "--gbar", "10", "--a", "1", "--b", "1"});
    REQUIRE(b.code == 0);
    CHECK(json::parse(b.out)["value"].get<double>() == doctest::Approx(1.0 / 22).epsilon(1e-10));
    const Run c = run({"eval", "cdf", "--m", "2.5", "--xi", "0.8", "--ms", "1.7", "--xis", "1.2", "--r", "1",
                       "--method", "foxh"});
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["method"] == "foxh");
    const Run d = run({"eval", "lcr", "--m", "2", "--xi", "1", "--ms", "2", "--xis", "1", "--fs", "10", "--fx", "10",
                       "--r", "0.5", "--method", "series", "--terms", "8"});
    REQUIRE(d.code == 0);
    CHECK(json::parse(d.out)["method"] == "series");
}

TEST_CASE("usage errors exit 2") {
    const Run unknown = run({"eval", "nonsense", "--m", "1", "--xi", "1"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("abep") != std::string::npos);
    CHECK(run({"eval", "pdf", "--m", "0.2", "--xi", "1"}).code == 2);
    CHECK(run({"eval", "pdf", "--m", "1"}).code == 2);
    CHECK(run({"eval", "pdf", "--m", "abc", "--xi", "1"}).code == 2);
    CHECK(run({"eval", "moment", "--m", "1", "--xi", "1", "--method", "gcq"}).code == 2);
    CHECK(run({"eval", "pdf", "--preset", "nope"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("help and version exit 0") {
    CHECK(run({"--help"}).code == 0);
    const Run v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find('.') != std::string::npos);
}

TEST_CASE("presets table") {
    const Run r = run({"presets"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    int rows = -1;  // header
    bool gk = false, kd = false;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream f(line);
        std::string name, m, xi, ms, xis;
        f >> name >> m >> xi >> ms >> xis;
        if (name == "generalized-k") gk = m == "m" && xi == "1" && ms == "ms" && xis == "1";
        if (name == "k-distribution") kd = m == "m" && xi == "1" && ms == "1" && xis == "1";
    }
    CHECK(rows >= 15);
    CHECK(gk);
    CHECK(kd);
}

TEST_CASE("sweeps are monotone where the statistic is") {
    const Run out = run({"sweep", "outage", "--var", "gamma_th", "--from", "0.01", "--to", "10", "--count", "25",
                         "--spacing", "log", "--m", "2", "--xi", "1", "--ms", "2", "--xis", "1"});
    REQUIRE(out.code == 0);
    const auto rows = parse_csv(out.out);
    REQUIRE(rows.size() == 25);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i].value) >= std::stod(rows[i - 1].value));

    const Run cap = run({"sweep", "capacity", "--var", "gamma_bar", "--from", "0.1", "--to", "100", "--count", "12",
                         "--spacing", "log", "--preset", "rayleigh"});
    REQUIRE(cap.code == 0);
    const auto crows = parse_csv(cap.out);
    for (std::size_t i = 1; i < crows.size(); ++i) CHECK(std::stod(crows[i].value) >= std::stod(crows[i - 1].value));
}

TEST_CASE("LCR sweep rises then falls") {
    for (const char* ms : {"0.5", "2"}) {
        const Run r = run({"sweep", "lcr", "--var", "r", "--from", "0.03", "--to", "3", "--count", "40", "--spacing",
                           "log", "--m", "1", "--xi", "1", "--ms", ms, "--xis", "1", "--fs", "1", "--fx", "1"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        std::size_t peak = 0;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (std::stod(rows[i].value) > std::stod(rows[peak].value)) peak = i;
        CHECK(peak > 0);
        CHECK(peak + 1 < rows.size());
        for (std::size_t i = 1; i <= peak; ++i) CHECK(std::stod(rows[i].value) > std::stod(rows[i - 1].value));
        for (std::size_t i = peak + 1; i < rows.size(); ++i)
            CHECK(std::stod(rows[i].value) < std::stod(rows[i - 1].value));
    }
}

TEST_CASE("sweep output is reproducible and ordered") {
    const std::vector<std::string> args{"sweep", "cdf", "--var", "r", "--grid", "0.2,0.5,0.9,1.4,2.0",
                                        "--m", "1.5", "--xi", "0.9", "--ms", "2.5", "--xis", "1.1", "--out",
                                        "egk_sweep_test.csv"};
    REQUIRE(run(args).code == 0);
    std::ifstream f1("egk_sweep_test.csv");
    const std::string first((std::istreambuf_iterator<char>(f1)), {});
    REQUIRE(run(args).code == 0);
    std::ifstream f2("egk_sweep_test.csv");
    const std::string second((std::istreambuf_iterator<char>(f2)), {});
    std::remove("egk_sweep_test.csv");
    CHECK(first == second);
    const auto rows = parse_csv(first);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].variable == 0.2);
    CHECK(rows[4].variable == 2.0);
}

TEST_CASE("failed rows are marked and exit 3") {
    const Run r = run({"sweep", "pdf", "--var", "r", "--grid", "0,0.5,1", "--m", "0.5", "--xi", "0.5"});
    CHECK(r.code == 3);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].method == "failed");
    CHECK(rows[0].value.empty());
    CHECK(rows[1].method != "failed");
}

TEST_CASE("sweep grid validation") {
    CHECK(run({"sweep", "pdf", "--var", "r", "--grid", "1,0.5", "--preset", "rayleigh"}).code == 2);
    CHECK(run({"sweep", "pdf", "--var", "omega", "--grid", "1", "--preset", "rayleigh"}).code == 2);
    CHECK(run({"sweep", "pdf", "--var", "m_s", "--grid", "1,2", "--preset", "rayleigh"}).code == 2);
    CHECK(run({"sweep", "pdf", "--var", "r", "--preset", "rayleigh"}).code == 2);
}

TEST_CASE("validate") {
    const Run ray = run({"validate", "--preset", "rayleigh", "--samples", "1000000", "--seed", "42"});
    CHECK(ray.code == 0);
    const json rep = json::parse(ray.out);
    CHECK(rep["seed"] == 42);
    CHECK(rep.contains("version"));
    CHECK(rep.contains("timestamp"));
    CHECK(rep["checks"].size() >= 15);
    for (const auto& c : rep["checks"]) CHECK(c["pass"].get<bool>());

    const Run gk = run({"validate", "--preset", "generalized-k", "--m", "2", "--ms", "1.5"});
    CHECK(gk.code == 0);

    const Run bad = run({"validate", "--preset", "rayleigh", "--corrupt-beta", "1.05"});
    CHECK(bad.code == 4);
}
