// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "egk/params.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace egk::mc {

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream) via std::seed_seq.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

struct SimConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 42;
    /// Defaults to (omega, 1) when unset.
    std::optional<OmegaSplit> omega_split;
    /// Test hook: multiplies both beta and beta_s used by the sampler, which
    /// breaks E[R^2] = omega. Leave at 1 outside negative-control tests.
    double beta_scale = 1.0;
    /// Worker cap; 0 means worker_count().
    unsigned threads = 0;

    void validate(const ChannelParams& p) const;
    OmegaSplit split_for(const ChannelParams& p) const;
};

struct EstimateResult {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

/// Worker count from EGK_THREADS, else the hardware concurrency (>= 1).
unsigned worker_count();

double gamma_variate(double shape, Rng& rng);

/// R = sqrt(omega / beta) G^{1/(2 xi)}, G ~ Gamma(m, 1).
double sample_gnm(double m, double xi, double omega, Rng& rng);

/// Draws S X with S and X independent generalized Nakagami-m variates.
/// Precomputes the scale factors once.
class EgkSampler {
public:
    EgkSampler(const ChannelParams& p, const SimConfig& cfg);
    double operator()(Rng& rng) const;

private:
    double m_;
    double xi_;
    double scale_x_;
    bool shadowed_;
    double m_s_ = 0.0;
    double xi_s_ = 0.0;
    double scale_s_;
};

double sample_egk(const ChannelParams& p, const SimConfig& cfg, Rng& rng);

/// Per-sample statistic; SNR statistics use gamma = gamma_bar r^2 / omega.
struct Statistic {
    enum class Kind { moment, cdf_at, abep, capacity, outage };
    Kind kind = Kind::moment;
    double k = 1.0;
    double x = 1.0;
    double a = 1.0;
    double b = 1.0;
    double gamma_bar = 1.0;
    double gamma_th = 1.0;

    static Statistic moment(double k);
    static Statistic cdf_at(double x);
    static Statistic abep(double a, double b, double gamma_bar);
    static Statistic capacity(double gamma_bar);
    static Statistic outage(double gamma_bar, double gamma_th);

    double evaluate(double r, double omega) const;
};

EstimateResult estimate(const Statistic& s, const ChannelParams& p, const SimConfig& cfg);

/// All statistics from one shared sample stream.
std::vector<EstimateResult> estimate_all(const std::vector<Statistic>& stats, const ChannelParams& p,
                                         const SimConfig& cfg);

/// Var(G)/E[G]^2 with a delta-method standard error.
EstimateResult estimate_aof(const ChannelParams& p, const SimConfig& cfg);

/// Envelope draws in stream order (for inspection and tests).
std::vector<double> draw_envelopes(const ChannelParams& p, const SimConfig& cfg);

}  // namespace egk::mc
