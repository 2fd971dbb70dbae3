// SPDX-License-Identifier: Apache-2.0
#include "egk/montecarlo.hpp"

#include "egk/errors.hpp"
#include "egk/specfun.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace egk::mc {
namespace {

constexpr std::uint64_t kChunk = 1u << 16;

// Welford accumulator with the pairwise merge of Chan et al.
struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        const double total = n + o.n;
        const double d = o.mean - mean;
        mean += d * o.n / total;
        m2 += o.m2 + d * d * n * o.n / total;
        n = total;
    }
    EstimateResult result() const {
        EstimateResult r;
        r.value = mean;
        r.n = static_cast<std::uint64_t>(n);
        r.std_error = n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
        return r;
    }
};

// Runs body(chunk_index, rng, count) over fixed chunks on a worker pool.
// Results land in per-chunk slots so merging order never depends on timing.
template <class Body>
void for_chunks(std::uint64_t n_samples, std::uint64_t seed, unsigned threads, Body&& body) {
    const std::uint64_t chunks = (n_samples + kChunk - 1) / kChunk;
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            Rng rng = make_stream(seed, c);
            const std::uint64_t count = std::min(kChunk, n_samples - c * kChunk);
            body(c, rng, count);
        }
    };
    const unsigned nt = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), chunks));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

std::uint64_t chunk_count(std::uint64_t n) { return (n + kChunk - 1) / kChunk; }

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x45474bu};
    return Rng(seq);
}

void SimConfig::validate(const ChannelParams& p) const {
    p.validate();
    if (n_samples < 1) throw DomainError("Monte Carlo needs at least one sample");
    if (!(beta_scale > 0.0) || !std::isfinite(beta_scale)) throw DomainError("beta_scale must be positive");
    check_split(split_for(p), p.omega);
}

OmegaSplit SimConfig::split_for(const ChannelParams& p) const {
    return omega_split ? *omega_split : OmegaSplit{p.omega, 1.0};
}

unsigned worker_count() {
    if (const char* env = std::getenv("EGK_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double gamma_variate(double shape, Rng& rng) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("gamma shape must be positive");
    std::gamma_distribution<double> g(shape, 1.0);
    return g(rng);
}

double sample_gnm(double m, double xi, double omega, Rng& rng) {
    const ChannelParams p = make_unshadowed(m, xi, omega);
    const double beta = derive_betas(p).beta;
    return std::sqrt(omega / beta) * std::pow(gamma_variate(m, rng), 1.0 / (2.0 * xi));
}

EgkSampler::EgkSampler(const ChannelParams& p, const SimConfig& cfg) {
    cfg.validate(p);
    const DerivedBetas d = derive_betas(p);
    const OmegaSplit split = cfg.split_for(p);
    m_ = p.m;
    xi_ = p.xi;
    shadowed_ = p.shadowed();
    scale_x_ = std::sqrt(split.omega_x / (d.beta * cfg.beta_scale));
    if (shadowed_) {
        m_s_ = p.m_s();
        xi_s_ = p.xi_s();
        scale_s_ = std::sqrt(split.omega_s / (d.beta_s * cfg.beta_scale));
    } else {
        scale_s_ = std::sqrt(split.omega_s);
    }
}

double EgkSampler::operator()(Rng& rng) const {
    std::gamma_distribution<double> gx(m_, 1.0);
    const double x = scale_x_ * std::pow(gx(rng), 1.0 / (2.0 * xi_));
    if (!shadowed_) return scale_s_ * x;
    std::gamma_distribution<double> gs(m_s_, 1.0);
    return scale_s_ * std::pow(gs(rng), 1.0 / (2.0 * xi_s_)) * x;
}

double sample_egk(const ChannelParams& p, const SimConfig& cfg, Rng& rng) {
    return EgkSampler(p, cfg)(rng);
}

Statistic Statistic::moment(double k) {
    Statistic s;
    s.kind = Kind::moment;
    s.k = k;
    return s;
}

Statistic Statistic::cdf_at(double x) {
    Statistic s;
    s.kind = Kind::cdf_at;
    s.x = x;
    return s;
}

Statistic Statistic::abep(double a, double b, double gamma_bar) {
    Statistic s;
    s.kind = Kind::abep;
    s.a = a;
    s.b = b;
    s.gamma_bar = gamma_bar;
    return s;
}

Statistic Statistic::capacity(double gamma_bar) {
    Statistic s;
    s.kind = Kind::capacity;
    s.gamma_bar = gamma_bar;
    return s;
}

Statistic Statistic::outage(double gamma_bar, double gamma_th) {
    Statistic s;
    s.kind = Kind::outage;
    s.gamma_bar = gamma_bar;
    s.gamma_th = gamma_th;
    return s;
}

double Statistic::evaluate(double r, double omega) const {
    const double g = gamma_bar * r * r / omega;
    switch (kind) {
        case Kind::moment: return std::pow(r, k);
        case Kind::cdf_at: return r <= x ? 1.0 : 0.0;
        case Kind::abep: return 0.5 * specfun::gamma_q(b, a * g);
        case Kind::capacity: return std::log2(1.0 + g);
        case Kind::outage: return g < gamma_th ? 1.0 : 0.0;
    }
    return 0.0;
}

std::vector<EstimateResult> estimate_all(const std::vector<Statistic>& stats, const ChannelParams& p,
                                         const SimConfig& cfg) {
    const EgkSampler draw(p, cfg);
    const std::size_t ns = stats.size();
    std::vector<std::vector<Moments>> slots(chunk_count(cfg.n_samples), std::vector<Moments>(ns));
    for_chunks(cfg.n_samples, cfg.seed, cfg.threads ? cfg.threads : worker_count(),
               [&](std::uint64_t c, Rng& rng, std::uint64_t count) {
                   auto& acc = slots[c];
                   for (std::uint64_t i = 0; i < count; ++i) {
                       const double r = draw(rng);
                       for (std::size_t j = 0; j < ns; ++j) acc[j].add(stats[j].evaluate(r, p.omega));
                   }
               });
    std::vector<Moments> total(ns);
    for (const auto& chunk : slots)
        for (std::size_t j = 0; j < ns; ++j) total[j].merge(chunk[j]);
    std::vector<EstimateResult> out;
    out.reserve(ns);
    for (const Moments& m : total) out.push_back(m.result());
    return out;
}

EstimateResult estimate(const Statistic& s, const ChannelParams& p, const SimConfig& cfg) {
    return estimate_all({s}, p, cfg).front();
}

EstimateResult estimate_aof(const ChannelParams& p, const SimConfig& cfg) {
    const EgkSampler draw(p, cfg);
    // Power sums of the normalized SNR y = r^2 / omega, k = 1..4.
    std::vector<std::array<long double, 4>> slots(chunk_count(cfg.n_samples));
    for_chunks(cfg.n_samples, cfg.seed, cfg.threads ? cfg.threads : worker_count(),
               [&](std::uint64_t c, Rng& rng, std::uint64_t count) {
                   std::array<long double, 4> s{};
                   for (std::uint64_t i = 0; i < count; ++i) {
                       const double r = draw(rng);
                       const long double y = static_cast<long double>(r) * r / p.omega;
                       long double v = y;
                       for (auto& acc : s) {
                           acc += v;
                           v *= y;
                       }
                   }
                   slots[c] = s;
               });
    std::array<long double, 4> sum{};
    for (const auto& s : slots)
        for (int k = 0; k < 4; ++k) sum[k] += s[k];
    const long double n = static_cast<long double>(cfg.n_samples);
    const long double e1 = sum[0] / n, e2 = sum[1] / n, e3 = sum[2] / n, e4 = sum[3] / n;
    const long double g1 = -2.0L * e2 / (e1 * e1 * e1);
    const long double g2 = 1.0L / (e1 * e1);
    const long double v11 = e2 - e1 * e1;
    const long double v22 = e4 - e2 * e2;
    const long double v12 = e3 - e1 * e2;
    const long double var = (g1 * g1 * v11 + 2.0L * g1 * g2 * v12 + g2 * g2 * v22) / n;
    EstimateResult r;
    r.value = static_cast<double>(e2 / (e1 * e1) - 1.0L);
    r.std_error = static_cast<double>(std::sqrt(std::max(var, 0.0L)));
    r.n = cfg.n_samples;
    return r;
}

std::vector<double> draw_envelopes(const ChannelParams& p, const SimConfig& cfg) {
    const EgkSampler draw(p, cfg);
    std::vector<double> out(cfg.n_samples);
    for_chunks(cfg.n_samples, cfg.seed, cfg.threads ? cfg.threads : worker_count(),
               [&](std::uint64_t c, Rng& rng, std::uint64_t count) {
                   for (std::uint64_t i = 0; i < count; ++i) out[c * kChunk + i] = draw(rng);
               });
    return out;
}

}  // namespace egk::mc
