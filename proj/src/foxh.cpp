// SPDX-License-Identifier: Apache-2.0
#include "egk/foxh.hpp"

#include "egk/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace egk::foxh {
namespace {

using cplx = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// ln sin(pi z), stable for large |Im z|.
cplx log_sin_pi(cplx z) {
    if (z.imag() == 0.0) return std::log(cplx(std::sin(kPi * z.real()), 0.0));
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    const cplx i(0.0, 1.0);
    return -i * kPi * z + std::log(cplx(0.0, 0.5)) + std::log(1.0 - std::exp(2.0 * i * kPi * z));
}

cplx log_gamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) x += kLanczos[k] / (z + static_cast<double>(k));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

std::string band_text(double lo, double hi) {
    std::ostringstream os;
    os << "(" << lo << ", " << hi << ")";
    return os.str();
}

// Integrand samples along one contour, stored as logs so that the common
// scale can be removed before exponentiation.
struct Trace {
    double c = 0.0;
    double h = 0.0;
    std::vector<cplx> up;    // t = +k h, k = 0..K
    std::vector<cplx> down;  // t = -k h, k = 0..K
};

cplx log_integrand(const FoxHSpec& spec, double lnz, double c, double t) {
    const cplx s(c, t);
    return spec.log_kernel(s) - s * lnz;
}

void extend(const FoxHSpec& spec, double lnz, Trace& tr, std::size_t count) {
    for (std::size_t k = tr.up.size(); k < count; ++k) {
        const double t = static_cast<double>(k) * tr.h;
        tr.up.push_back(log_integrand(spec, lnz, tr.c, t));
        tr.down.push_back(k == 0 ? tr.up[0] : log_integrand(spec, lnz, tr.c, -t));
    }
}

struct Sums {
    cplx full;        // all nodes up to K
    cplx coarse;      // every other node up to K
    cplx half_range;  // all nodes up to K/2
    double l1 = 0.0;
};

// Trapezoid sums over |t| <= K h scaled by exp(-shift).
Sums trapezoid(const Trace& tr, std::size_t K, double shift) {
    Sums s{};
    for (std::size_t k = 0; k <= K; ++k) {
        const double w = (k == 0 ? 1.0 : 2.0) * 0.5;  // each side shares t = 0
        const cplx a = std::exp(tr.up[k] - shift);
        const cplx b = std::exp(tr.down[k] - shift);
        const cplx pair = w * (a + b);
        s.full += pair;
        if (k % 2 == 0) s.coarse += pair;
        if (2 * k <= K) s.half_range += pair;
        s.l1 += w * (std::abs(a) + std::abs(b));
    }
    s.full *= tr.h;
    s.coarse *= 2.0 * tr.h;
    s.half_range *= tr.h;
    s.l1 *= tr.h;
    return s;
}

double max_real(const Trace& tr, std::size_t K) {
    double m = -kInf;
    for (std::size_t k = 0; k <= K; ++k) m = std::max({m, tr.up[k].real(), tr.down[k].real()});
    return m;
}

// log of the L1 mass of the integrand along Re s = c, with a coarse step.
double log_l1_mass(const FoxHSpec& spec, double lnz, double c, double h, double t_max) {
    const double base = log_integrand(spec, lnz, c, 0.0).real();
    double peak = base;
    double total = 0.5;
    int quiet = 0;
    for (int k = 1; static_cast<double>(k) * h <= t_max; ++k) {
        const double v = log_integrand(spec, lnz, c, k * h).real();
        peak = std::max(peak, v);
        total += std::exp(v - base);
        quiet = v < peak - 40.0 ? quiet + 1 : 0;
        if (quiet >= 8) break;
    }
    return base + std::log(2.0 * h * total);
}

FoxHResult finish(const Sums& s, double shift, const Trace& tr, std::size_t K, double err_rel) {
    const double scale = 1.0 / (2.0 * kPi);
    const double value = s.full.real() * scale;
    const double floor = 64.0 * kEps * s.l1 * scale;
    if (std::abs(s.full.imag()) * scale > 1e-9 * std::abs(value) + floor) {
        std::ostringstream os;
        os << "Fox H contour sum has an imaginary residue " << s.full.imag() * scale
           << " against a real part " << value;
        throw ConvergenceError(os.str());
    }
    if (shift > 700.0 && value != 0.0 && std::log(std::abs(value)) + shift > 709.0)
        throw NumericalError("Fox H value overflows double precision");
    FoxHResult r;
    const double f = std::exp(shift);
    r.value = value * f;
    r.err_est = (err_rel + floor) * f;
    r.c = tr.c;
    r.half_height = static_cast<double>(K) * tr.h;
    r.nodes = static_cast<int>(2 * K + 1);
    return r;
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError("log_gamma evaluated at a pole");
    if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
    return log_gamma_right(z);
}

FoxHSpec::FoxHSpec(int m, int n, std::vector<Pair> a, std::vector<Pair> b)
    : m_(m), n_(n), a_(std::move(a)), b_(std::move(b)), lo_(-kInf), hi_(kInf) {
    if (m < 0 || n < 0 || n > p() || m > q()) {
        std::ostringstream os;
        os << "Fox H orders (m=" << m << ", n=" << n << ", p=" << p() << ", q=" << q() << ") are inconsistent";
        throw DomainError(os.str());
    }
    for (const Pair& x : a_)
        if (!(x.scale > 0.0) || !std::isfinite(x.value)) throw DomainError("Fox H upper pairs need A_i > 0");
    for (const Pair& x : b_)
        if (!(x.scale > 0.0) || !std::isfinite(x.value)) throw DomainError("Fox H lower pairs need B_j > 0");
    for (int j = 0; j < m_; ++j) lo_ = std::max(lo_, -b_[j].value / b_[j].scale);
    for (int i = 0; i < n_; ++i) hi_ = std::min(hi_, (1.0 - a_[i].value) / a_[i].scale);
    if (!(lo_ < hi_)) {
        throw DomainError("Fox H spec has no contour separating its pole sequences; band " +
                          band_text(lo_, hi_) + " is empty");
    }
}

double FoxHSpec::decay() const {
    double d = 0.0;
    for (int i = 0; i < p(); ++i) d += (i < n_ ? 1.0 : -1.0) * a_[i].scale;
    for (int j = 0; j < q(); ++j) d += (j < m_ ? 1.0 : -1.0) * b_[j].scale;
    return d;
}

std::complex<double> FoxHSpec::log_kernel(std::complex<double> s) const {
    cplx v = 0.0;
    for (int j = 0; j < q(); ++j) {
        const cplx arg = b_[j].value + b_[j].scale * s;
        if (j < m_)
            v += log_gamma(arg);
        else
            v -= log_gamma(1.0 - arg);
    }
    for (int i = 0; i < p(); ++i) {
        const cplx arg = a_[i].value + a_[i].scale * s;
        if (i < n_)
            v += log_gamma(1.0 - arg);
        else
            v -= log_gamma(arg);
    }
    return v;
}

FoxHResult foxh_eval(const FoxHSpec& spec, double z, const ContourSpec& contour) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("Fox H argument must be positive and finite");
    if (!(contour.c > spec.band_lo() && contour.c < spec.band_hi()))
        throw DomainError("contour abscissa lies outside the band " + band_text(spec.band_lo(), spec.band_hi()));
    if (!(contour.half_height > 0.0) || contour.step_count < 1)
        throw DomainError("contour needs half_height > 0 and step_count >= 1");
    Trace tr;
    tr.c = contour.c;
    tr.h = contour.half_height / contour.step_count;
    const auto K = static_cast<std::size_t>(contour.step_count);
    extend(spec, std::log(z), tr, K + 1);
    const double shift = max_real(tr, K);
    const Sums s = trapezoid(tr, K, shift);
    const double err = std::abs(s.full.real() - s.half_range.real()) / (2.0 * kPi);
    return finish(s, shift, tr, K, err);
}

FoxHResult foxh_eval(const FoxHSpec& spec, double z, const FoxHOptions& opts) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("Fox H argument must be positive and finite");
    if (!(opts.rel_tol > 0.0)) throw DomainError("Fox H tolerance must be positive");
    if (!(spec.decay() > 0.0)) {
        std::ostringstream os;
        os << "Fox H kernel does not decay along vertical lines (rate " << spec.decay() << ")";
        throw ConvergenceError(os.str());
    }
    const double lnz = std::log(z);

    // Abscissa search over a window of the band.
    double L = spec.band_lo();
    double H = spec.band_hi();
    if (!std::isfinite(L) && !std::isfinite(H)) {
        L = -20.0;
        H = 20.0;
    } else if (!std::isfinite(L)) {
        L = H - 40.0;
    } else if (!std::isfinite(H)) {
        H = L + 40.0;
    }
    auto pole_gap = [&](double c) { return std::min(c - spec.band_lo(), spec.band_hi() - c); };
    auto coarse_mass = [&](double c) {
        const double h = std::min(0.25, pole_gap(c) / 4.0);
        return log_l1_mass(spec, lnz, c, h, opts.max_half_height);
    };
    constexpr int kCandidates = 16;
    const double spacing = (H - L) / kCandidates;
    double best_c = L + 0.5 * spacing;
    double best = kInf;
    for (int k = 0; k < kCandidates; ++k) {
        const double c = L + (k + 0.5) * spacing;
        const double v = coarse_mass(c);
        if (v < best) {
            best = v;
            best_c = c;
        }
    }
    const double centre = best_c;
    for (int k = -3; k <= 3; ++k) {
        if (k == 0) continue;
        const double c = centre + k * spacing / 4.0;
        // stay as far from the poles as the coarse candidates do
        if (!(pole_gap(c) >= 0.25 * spacing)) continue;
        const double v = coarse_mass(c);
        if (v < best) {
            best = v;
            best_c = c;
        }
    }

    Trace tr;
    tr.c = best_c;
    tr.h = std::min(0.05, pole_gap(best_c) / 6.0);
    double T = 40.0;
    for (int refine = 0;; ++refine) {
        bool settled = false;
        Sums s{};
        double shift = 0.0;
        std::size_t K = 0;
        while (true) {
            K = static_cast<std::size_t>(std::ceil(T / tr.h));
            if (K % 2) ++K;
            extend(spec, lnz, tr, K + 1);
            shift = max_real(tr, K);
            s = trapezoid(tr, K, shift);
            const double floor = 64.0 * kEps * s.l1;
            const double tail = std::abs(s.full.real() - s.half_range.real());
            if (tail <= opts.rel_tol * std::abs(s.full.real()) + floor) break;
            if (2.0 * T > opts.max_half_height) {
                std::ostringstream os;
                os << "Fox H contour tail did not decay by |t| = " << T << " (z = " << z << ")";
                throw ConvergenceError(os.str());
            }
            T *= 2.0;
        }
        const double floor = 64.0 * kEps * s.l1;
        const double step_err = std::abs(s.full.real() - s.coarse.real());
        if (step_err <= opts.rel_tol * std::abs(s.full.real()) + floor) settled = true;
        if (settled) {
            const double tail = std::abs(s.full.real() - s.half_range.real());
            return finish(s, shift, tr, K, (tail + step_err) / (2.0 * kPi));
        }
        if (refine >= opts.max_refinements) {
            std::ostringstream os;
            os << "Fox H trapezoid did not settle under step refinement (z = " << z << ", step " << tr.h << ")";
            throw ConvergenceError(os.str());
        }
        Trace finer;
        finer.c = tr.c;
        finer.h = tr.h / 2.0;
        tr = std::move(finer);
    }
}

namespace {

std::vector<Pair> lower_pairs(const ChannelParams& p) {
    p.validate();
    std::vector<Pair> b;
    if (p.shadowing) b.push_back({p.shadowing->m_s, 1.0 / p.shadowing->xi_s});
    b.push_back({p.m, 1.0 / p.xi});
    return b;
}

}  // namespace

FoxHSpec foxh_pdf_spec(const ChannelParams& p) {
    auto b = lower_pairs(p);
    const int m = static_cast<int>(b.size());
    return FoxHSpec(m, 0, {}, std::move(b));
}

FoxHSpec foxh_cdf_spec(const ChannelParams& p) {
    auto b = lower_pairs(p);
    const int m = static_cast<int>(b.size());
    b.push_back({0.0, 1.0});
    return FoxHSpec(m, 1, {{1.0, 1.0}}, std::move(b));
}

FoxHSpec foxh_cdf_complement_spec(const ChannelParams& p) {
    auto b = lower_pairs(p);
    b.push_back({0.0, 1.0});
    const int m = static_cast<int>(b.size());
    return FoxHSpec(m, 0, {{1.0, 1.0}}, std::move(b));
}

FoxHSpec foxh_mgf_spec(const ChannelParams& p) {
    auto b = lower_pairs(p);
    const int m = static_cast<int>(b.size());
    return FoxHSpec(m, 1, {{1.0, 1.0}}, std::move(b));
}

FoxHSpec foxh_abep_spec(const ChannelParams& p, double b_det) {
    if (!(b_det > 0.0)) throw DomainError("detection parameter b must be positive");
    auto b = lower_pairs(p);
    const int m = static_cast<int>(b.size());
    b.push_back({0.0, 1.0});
    return FoxHSpec(m, 2, {{1.0 - b_det, 1.0}, {1.0, 1.0}}, std::move(b));
}

FoxHSpec foxh_capacity_spec(const ChannelParams& p) {
    auto b = lower_pairs(p);
    b.push_back({0.0, 1.0});
    b.push_back({0.0, 1.0});
    const int m = static_cast<int>(b.size());
    return FoxHSpec(m, 1, {{0.0, 1.0}, {1.0, 1.0}}, std::move(b));
}

}  // namespace egk::foxh
