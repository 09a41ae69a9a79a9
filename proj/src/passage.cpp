#include "intrinsic/passage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "intrinsic/errors.hpp"
#include "intrinsic/normal.hpp"
#include "intrinsic/paths.hpp"
#include "intrinsic/random.hpp"

namespace intrinsic {

namespace {

void require_gap(const LineBoundary& b) {
    if (b.x == b.y) throw DomainError("line boundary starts on the line (x == y)");
}

}  // namespace

double gamma0(double v, double t, double x) {
    if (!(t > 0)) throw DomainError("gamma0 needs t > 0");
    double d = v - x;
    return std::exp(-d * d / (2 * t)) / std::sqrt(2 * std::numbers::pi * t);
}

double gamma1(double u, const LineBoundary& b) {
    require_gap(b);
    if (u <= 0) return 0.0;
    double a = b.gap();
    double e = a + b.beta * u;
    return std::abs(a) / std::sqrt(2 * std::numbers::pi * u * u * u) * std::exp(-e * e / (2 * u));
}

double gamma2(double v, double t, const LineBoundary& b) {
    if (!(t > 0)) throw DomainError("gamma2 needs t > 0");
    double edge = b.y + b.beta * t;
    bool below = b.x < b.y;
    if (below ? v >= edge : v <= edge) return 0.0;
    double val = gamma0(v, t, b.x) - std::exp(-2 * b.beta * (b.y - b.x)) * gamma0(v, t, 2 * b.y - b.x);
    return std::max(val, 0.0);
}

double max_crossing_probability(double h, double nu, double tau) {
    if (h < 0) throw DomainError("max_crossing_probability needs h >= 0");
    if (h == 0) return 1.0;
    if (tau <= 0) return 0.0;
    double st = std::sqrt(tau);
    double first = norm_cdf((-h + nu * tau) / st);
    double z2 = (-h - nu * tau) / st;
    double p2 = norm_cdf(z2);
    double second = p2 > 0 ? std::exp(2 * nu * h + std::log(p2)) : 0.0;
    return std::min(1.0, first + second);
}

double hit_probability(const LineBoundary& b, double t) {
    require_gap(b);
    double a = b.gap();
    // Y = W - beta u - x has drift -beta and must reach a
    if (a > 0) return max_crossing_probability(a, -b.beta, t);
    return max_crossing_probability(-a, b.beta, t);
}

double survival_mass(double v, double t, const LineBoundary& b) {
    require_gap(b);
    if (!(t > 0)) throw DomainError("survival_mass needs t > 0");
    double st = std::sqrt(t);
    double edge = b.y + b.beta * t;
    double refl = std::exp(-2 * b.beta * (b.y - b.x));
    if (b.x < b.y) {
        v = std::min(v, edge);
        return std::max(0.0, norm_cdf((v - b.x) / st) - refl * norm_cdf((v - (2 * b.y - b.x)) / st));
    }
    v = std::max(v, edge);
    return std::max(0.0, norm_cdf((b.x - v) / st) - refl * norm_cdf(((2 * b.y - b.x) - v) / st));
}

std::complex<double> first_passage_transform(std::complex<double> s, const LineBoundary& b) {
    require_gap(b);
    double a = b.gap();
    return std::exp(-b.beta * a - std::abs(a) * std::sqrt(b.beta * b.beta + 2.0 * s));
}

double laplace_invert(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
                      const LaplaceOptions& opt) {
    if (!(t > 0)) throw DomainError("laplace_invert needs t > 0");
    const int total = opt.n + opt.m + 1;
    const double scale = std::exp(0.5 * opt.A) / t;
    // partial sums s_k of the alternating series
    std::vector<double> partial(total + 1);
    double sum = 0.5 * F({opt.A / (2 * t), 0.0}).real();
    partial[0] = sum;
    for (int k = 1; k <= total; ++k) {
        std::complex<double> s(opt.A / (2 * t), k * std::numbers::pi / t);
        double term = F(s).real();
        sum += (k % 2 == 0 ? term : -term);
        partial[k] = sum;
    }
    auto euler = [&](int n) {
        double acc = 0.0, binom = 1.0;
        for (int k = 0; k <= opt.m; ++k) {
            acc += binom * partial[n + k];
            binom = binom * (opt.m - k) / (k + 1);
        }
        return scale * acc / std::ldexp(1.0, opt.m);
    };
    double est = euler(opt.n);
    double check = euler(opt.n + 1);
    double residual = std::abs(est - check);
    if (!std::isfinite(est) || residual > opt.tolerance)
        throw AccuracyError("Laplace inversion: Euler summation did not converge", residual);
    return est;
}

PassageSample simulate_first_passage(const LineBoundary& b, double horizon, int n_paths, int n_steps,
                                     std::uint64_t seed) {
    require_gap(b);
    if (n_paths < 1 || n_steps < 1 || !(horizon > 0)) throw DomainError("simulate_first_passage: bad sizes");
    PassageSample out;
    out.n_paths = n_paths;
    const double dt = horizon / n_steps;
    const double sdt = std::sqrt(dt);
    const double orient = b.upward() ? 1.0 : -1.0;
    for (int i = 0; i < n_paths; ++i) {
        RandomStream rng(seed, static_cast<std::uint64_t>(i));
        // work in Y = W - beta t, where the boundary is the flat level y
        double yv = b.x;
        double d0 = orient * (b.y - yv);
        bool hit = false;
        for (int k = 0; k < n_steps; ++k) {
            yv += sdt * rng.normal() - b.beta * dt;
            double d1 = orient * (b.y - yv);
            double pc = bridge_cross_probability(d0, d1, dt);
            if (d1 <= 0 || (pc > 0 && rng.uniform() < pc)) {
                out.hit_times.push_back((k + 0.5) * dt);
                hit = true;
                break;
            }
            d0 = d1;
        }
        if (!hit) out.survivor_levels.push_back(yv + b.beta * horizon);
    }
    return out;
}

double ks_distance(std::vector<double> sample, int n_total, const std::function<double(double)>& cdf, double end) {
    std::sort(sample.begin(), sample.end());
    double n = n_total;
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(i / n - f));
    }
    d = std::max(d, std::abs(sample.size() / n - cdf(end)));
    return d;
}

double ks_critical_99(int n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace intrinsic
