// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "egk/distribution.hpp"
#include "egk/params.hpp"

namespace egk {

/// Binary modulation with conditional error Gamma(b, a g) / (2 Gamma(b)).
/// a and b are each 1 or 1/2.
struct ModulationSpec {
    double a = 1.0;
    double b = 1.0;

    void validate() const;
};

struct CapacitySpec {
    double bandwidth_w = 1.0;
    double gamma_bar = 1.0;

    void validate() const;
};

/// Var(G) / E[G]^2 in closed form.
double aof(const ChannelParams& p);

MetricResult abep(const ChannelParams& p, double gamma_bar, const ModulationSpec& mod,
                  const TransformOptions& opts = {});

/// P(G < gamma_th).
MetricResult outage_probability(const ChannelParams& p, double gamma_bar, double gamma_th,
                                const CdfOptions& opts = {});

/// P(W log2(1 + G) < c_th).
MetricResult outage_capacity(const ChannelParams& p, const CapacitySpec& cap, double c_th,
                             const CdfOptions& opts = {});

/// W E[log2(1 + G)] in bits/s.
MetricResult avg_capacity(const ChannelParams& p, const CapacitySpec& cap, const TransformOptions& opts = {});

}  // namespace egk
