// SPDX-License-Identifier: Apache-2.0
#include "egk/presets.hpp"

#include "egk/errors.hpp"
#include "egk/preset_catalog_text.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace egk {
namespace {

bool is_symbol(const std::string& tok) {
    return tok == "m" || tok == "xi" || tok == "ms" || tok == "xis" || tok == "xi/2";
}

std::optional<double> parse_number(const std::string& tok) {
    const auto slash = tok.find('/');
    auto num = [](std::string_view s) -> std::optional<double> {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
        return v;
    };
    if (slash == std::string::npos) return num(tok);
    const auto a = num(std::string_view(tok).substr(0, slash));
    const auto b = num(std::string_view(tok).substr(slash + 1));
    if (!a || !b || *b == 0.0) return std::nullopt;
    return *a / *b;
}

double resolve(const std::string& tok, const Preset& p, const PresetArgs& args) {
    auto take = [&](const std::optional<double>& v, const char* flag) {
        if (!v) {
            std::ostringstream os;
            os << "preset '" << p.name << "' needs a value for " << flag;
            throw DomainError(os.str());
        }
        return *v;
    };
    if (tok == "m") return take(args.m, "m");
    if (tok == "xi") return take(args.xi, "xi");
    if (tok == "xi/2") return take(args.xi, "xi") / 2.0;
    if (tok == "ms") return take(args.m_s, "m_s");
    if (tok == "xis") return take(args.xi_s, "xi_s");
    return *parse_number(tok);
}

std::string list_names(const std::vector<Preset>& all) {
    std::string out;
    for (const Preset& p : all) {
        if (!out.empty()) out += ", ";
        out += p.name;
    }
    return out;
}

}  // namespace

std::vector<std::string> Preset::free_symbols() const {
    std::vector<std::string> out;
    for (const std::string* tok : {&m, &xi, &m_s, &xi_s}) {
        if (!is_symbol(*tok)) continue;
        const std::string sym = *tok == "xi/2" ? "xi" : *tok;
        bool seen = false;
        for (const auto& s : out) seen = seen || s == sym;
        if (!seen) out.push_back(sym);
    }
    return out;
}

ChannelParams Preset::instantiate(double omega, const PresetArgs& args) const {
    const auto free = free_symbols();
    auto is_free = [&](const char* sym) { return std::find(free.begin(), free.end(), sym) != free.end(); };
    const std::pair<const std::optional<double>*, const char*> given[] = {
        {&args.m, "m"}, {&args.xi, "xi"}, {&args.m_s, "ms"}, {&args.xi_s, "xis"}};
    for (const auto& [value, sym] : given) {
        if (value->has_value() && !is_free(sym))
            throw DomainError("preset '" + name + "' fixes " + sym + "; drop that flag or use explicit parameters");
    }
    ChannelParams out;
    out.m = resolve(m, *this, args);
    out.xi = resolve(xi, *this, args);
    out.omega = omega;
    if (shadowed()) out.shadowing = Shadowing{resolve(m_s, *this, args), resolve(xi_s, *this, args)};
    out.validate();
    return out;
}

std::vector<Preset> parse_presets(const std::string& text) {
    std::vector<Preset> out;
    std::set<std::string> names;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << "preset catalog line " << lineno << ": " << why;
        throw DomainError(os.str());
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        Preset p;
        if (!(fields >> p.name)) continue;
        if (!(fields >> p.m >> p.xi >> p.m_s >> p.xi_s)) fail("expected name, m, xi, m_s, xi_s");
        std::getline(fields >> std::ws, p.source);
        for (const std::string* tok : {&p.m, &p.xi}) {
            if (!is_symbol(*tok) && !parse_number(*tok)) fail("bad token '" + *tok + "'");
        }
        if (p.m_s == "none") {
            if (p.xi_s != "-" && p.xi_s != "none") fail("xi_s must be '-' when m_s is none");
        } else {
            for (const std::string* tok : {&p.m_s, &p.xi_s})
                if (!is_symbol(*tok) && !parse_number(*tok)) fail("bad token '" + *tok + "'");
        }
        if (!names.insert(p.name).second) fail("duplicate preset '" + p.name + "'");
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Preset> load_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open preset catalog " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_presets(buf.str());
}

const std::vector<Preset>& builtin_presets() {
    static const std::vector<Preset> catalog = parse_presets(detail::kBuiltinPresetCatalog);
    return catalog;
}

const Preset& find_preset(const std::string& name) {
    const auto& all = builtin_presets();
    for (const Preset& p : all)
        if (p.name == name) return p;
    throw DomainError("unknown preset '" + name + "'; available: " + list_names(all));
}

ChannelParams preset(const std::string& name, double omega, const PresetArgs& args) {
    return find_preset(name).instantiate(omega, args);
}

}  // namespace egk
