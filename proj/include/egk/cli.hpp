// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "egk/params.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace egk::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kValidation = 4 };

/// Everything a single statistic evaluation may need.
struct EvalInputs {
    ChannelParams params;
    double r = 1.0;
    double gamma = 1.0;
    double gamma_bar = 1.0;
    double k = 1.0;
    double s = 1.0;
    double a = 1.0;
    double b = 1.0;
    double gamma_th = 1.0;
    double c_th = 1.0;
    double bandwidth = 1.0;
    double f_s = 1.0;
    double f_x = 1.0;
    std::optional<double> omega_s;
    int series_terms = 8;
    std::string method = "quadrature";
    std::optional<double> tol;
};

/// Names accepted by `eval` and `sweep`.
const std::vector<std::string>& statistic_names();

/// Evaluates one statistic. Throws DomainError for unknown names or
/// methods that do not apply to the statistic.
MetricResult evaluate(const std::string& statistic, const EvalInputs& in);

/// Sets the sweep variable (r, gamma, gamma_bar, m, xi, m_s, xi_s, gamma_th)
/// on a copy of `in`.
EvalInputs with_variable(const EvalInputs& in, const std::string& variable, double value);

/// Grid helper: `count` points from start to stop, linear or logarithmic.
std::vector<double> make_grid(double start, double stop, int count, bool log_spacing);

/// Entry point of the `egk` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace egk::cli
