// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "egk/params.hpp"

#include <complex>
#include <vector>

namespace egk::foxh {

/// One gamma-kernel coefficient pair (a_i, A_i) or (b_j, B_j).
struct Pair {
    double value;
    double scale;
};

/// Orders and coefficient lists of H^{m,n}_{p,q}[z | (a_i, A_i); (b_j, B_j)].
///
/// The kernel is
///   Theta(s) = prod_{j<=m} Gamma(b_j + B_j s) prod_{i<=n} Gamma(1 - a_i - A_i s)
///            / (prod_{j>m} Gamma(1 - b_j - B_j s) prod_{i>n} Gamma(a_i + A_i s)).
/// Construction throws DomainError when no vertical line separates the
/// left poles from the right poles.
class FoxHSpec {
public:
    FoxHSpec(int m, int n, std::vector<Pair> a, std::vector<Pair> b);

    int m() const { return m_; }
    int n() const { return n_; }
    int p() const { return static_cast<int>(a_.size()); }
    int q() const { return static_cast<int>(b_.size()); }
    const std::vector<Pair>& a() const { return a_; }
    const std::vector<Pair>& b() const { return b_; }

    /// Open band (band_lo, band_hi) of admissible contour abscissae;
    /// either end may be infinite.
    double band_lo() const { return lo_; }
    double band_hi() const { return hi_; }

    /// Exponential decay rate coefficient of |Theta(c + it)| in |t|;
    /// the vertical contour converges only when this is positive.
    double decay() const;

    std::complex<double> log_kernel(std::complex<double> s) const;

private:
    int m_;
    int n_;
    std::vector<Pair> a_;
    std::vector<Pair> b_;
    double lo_;
    double hi_;
};

/// Explicit contour: abscissa c, truncation |t| <= half_height, and
/// 2 * step_count + 1 trapezoid nodes.
struct ContourSpec {
    double c = 0.0;
    double half_height = 40.0;
    int step_count = 800;
};

struct FoxHOptions {
    double rel_tol = 1e-10;
    double max_half_height = 5000.0;
    int max_refinements = 4;
};

struct FoxHResult {
    double value = 0.0;
    double err_est = 0.0;
    double c = 0.0;
    double half_height = 0.0;
    int nodes = 0;
};

/// ln Gamma(z) for complex z away from the poles (Lanczos, g = 7).
std::complex<double> log_gamma(std::complex<double> z);

/// Evaluates H at z > 0 on an automatically chosen contour. The abscissa
/// minimizes the L1 mass of the integrand over the band; the step is
/// refined and the truncation doubled until both settle within rel_tol.
/// Throws ConvergenceError when that does not happen.
FoxHResult foxh_eval(const FoxHSpec& spec, double z, const FoxHOptions& opts = {});

/// Evaluates H at z > 0 on the given contour with no adaptivity.
FoxHResult foxh_eval(const FoxHSpec& spec, double z, const ContourSpec& contour);

/// H^{2,0}_{0,2}[ . | -; (m_s, 1/xi_s), (m, 1/xi)] (H^{1,0}_{0,1} without shadowing).
FoxHSpec foxh_pdf_spec(const ChannelParams& p);

/// H^{2,1}_{1,3}[ . | (1,1); (m_s, 1/xi_s), (m, 1/xi), (0,1)] giving the CDF.
FoxHSpec foxh_cdf_spec(const ChannelParams& p);

/// H^{3,0}_{1,3} with the same lists, giving the CDF complement.
FoxHSpec foxh_cdf_complement_spec(const ChannelParams& p);

/// H^{2,1}_{1,2}[ . | (1,1); (m_s, 1/xi_s), (m, 1/xi)] giving the MGF.
FoxHSpec foxh_mgf_spec(const ChannelParams& p);

/// H^{2,2}_{2,3}[ . | (1-b,1), (1,1); (m_s, 1/xi_s), (m, 1/xi), (0,1)].
FoxHSpec foxh_abep_spec(const ChannelParams& p, double b);

/// H^{4,1}_{2,4}[ . | (0,1), (1,1); (m_s, 1/xi_s), (m, 1/xi), (0,1), (0,1)].
FoxHSpec foxh_capacity_spec(const ChannelParams& p);

}  // namespace egk::foxh
