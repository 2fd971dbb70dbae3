// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "egk/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace egk {

/// Values for the free symbols of a preset template.
struct PresetArgs {
    std::optional<double> m;
    std::optional<double> xi;
    std::optional<double> m_s;
    std::optional<double> xi_s;
};

/// One catalog row; each slot holds its template token ("1", "3/2", "m",
/// "xi/2", "none", "-").
struct Preset {
    std::string name;
    std::string m;
    std::string xi;
    std::string m_s;
    std::string xi_s;
    std::string source;

    bool shadowed() const { return m_s != "none"; }
    /// Free symbols the template needs, in slot order.
    std::vector<std::string> free_symbols() const;
    ChannelParams instantiate(double omega, const PresetArgs& args = {}) const;
};

/// Parses catalog text. Throws DomainError with the line number on a
/// malformed record or a duplicate name.
std::vector<Preset> parse_presets(const std::string& text);

/// Reads and parses a catalog file.
std::vector<Preset> load_presets(const std::string& path);

/// The catalog compiled into the library.
const std::vector<Preset>& builtin_presets();

/// Looks up `name` in the built-in catalog. Unknown names raise
/// DomainError listing every available preset.
const Preset& find_preset(const std::string& name);

ChannelParams preset(const std::string& name, double omega, const PresetArgs& args = {});

}  // namespace egk
