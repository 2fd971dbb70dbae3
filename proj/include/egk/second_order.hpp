// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "egk/params.hpp"
#include "egk/specfun.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace egk {

/// Maximum Doppler shifts of the shadowing and multipath processes.
struct DopplerSpec {
    double f_s = 0.0;
    double f_x = 1.0;

    void validate() const;
    /// sqrt(2) pi f_s, the rms derivative of each shadowing Gaussian.
    double sigma_s() const;
    double sigma_x() const;
};

/// The two component summands of the conditional derivative variance for
/// the component processes, (A u^{2 - 2 xi_s}, B x^{2 - 2 xi}) with x = r/u.
struct ComponentVariances {
    double shadowing = 0.0;
    double multipath = 0.0;

    double sum() const { return shadowing + multipath; }
};

ComponentVariances component_variances(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop,
                                        double r, double u);

/// Var(dR/dt | R = r, S = u) = (r/u)^2 Var(dS/dt | u) + u^2 Var(dX/dt | r/u).
double cond_variance(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r, double u);

/// LCR from the single integral over the shadowing level, after u = sqrt(omega_s) tan(theta).
MetricResult lcr_integral(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r,
                          const specfun::QuadratureSpec& quad = {});

enum class SeriesForm {
    derived,  ///< prefactor and shifts re-derived from the integral
    alternate,  ///< competing prefactor and shifts; kept to show it misses the integral
};

struct SeriesResult {
    double value = 0.0;
    double last_term = 0.0;
    int terms = 0;
};

/// Auxiliary power Q_n(r) of the series.
double lcr_q(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r, double n);

/// Binomial series in extended incomplete gamma functions, truncated at N.
SeriesResult lcr_series(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r, int N,
                        SeriesForm form = SeriesForm::derived, const specfun::QuadratureSpec& quad = {});

/// Four-term approximation (the n = 0 and n = 1 terms of the series).
double lcr_approx(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r,
                  SeriesForm form = SeriesForm::derived, const specfun::QuadratureSpec& quad = {});

/// CDF(r) / LCR(r) using the integral LCR. Returns +inf with a note when the
/// LCR is below 1e-300.
MetricResult afd(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop, double r,
                 const specfun::QuadratureSpec& quad = {});

struct ProcessConfig {
    double duration = 2000.0;
    double dt = 0.002;
    int n_sinusoids = 32;
    std::uint64_t seed = 7;

    void validate(const DopplerSpec& dop) const;
};

struct ProcessTrace {
    double dt = 0.0;
    std::vector<double> envelope;
};

/// Sum-of-sinusoids envelope for integer m and m_s: each component is built
/// from 2m (or 2m_s) unit Gaussian processes with the isotropic Doppler
/// spectrum and combined as S X.
ProcessTrace simulate_process(const ChannelParams& p, const OmegaSplit& split, const DopplerSpec& dop,
                              const ProcessConfig& cfg);

struct EmpiricalSecondOrder {
    double lcr = 0.0;
    double afd = 0.0;
    double cdf = 0.0;
    std::uint64_t crossings = 0;
};

/// Downcrossing rate, mean fade duration and fraction of time below `level`.
EmpiricalSecondOrder empirical_second_order(const ProcessTrace& trace, double level);

/// Writes "time,envelope" rows.
void write_trace_csv(const ProcessTrace& trace, const std::string& path);

}  // namespace egk
