#include "qid/model.hpp"

#include "qid/errors.hpp"

#include <cmath>
#include <cstdint>

namespace qid {

namespace {

constexpr int kMaxN = 4;

double factorial_sum(int n) {
    // (2n)! + (4n)! by exact integer accumulation; 16! = 2.09e13 < 2^53.
    std::uint64_t f2 = 1, f4 = 1;
    for (int k = 2; k <= 2 * n; ++k) f2 *= static_cast<std::uint64_t>(k);
    for (int k = 2; k <= 4 * n; ++k) f4 *= static_cast<std::uint64_t>(k);
    return static_cast<double>(f2 + f4);
}

} // namespace

double max_delta(int n) {
    if (n < 1 || n > kMaxN)
        throw UnsupportedN("max_delta: n must be in [1,4], got " + std::to_string(n));
    return 1.0 / (std::exp(1.0) + factorial_sum(n));
}

ModelParams ModelParams::create(int n, std::optional<double> delta) {
    if (n < 1 || n > kMaxN)
        throw UnsupportedN("ModelParams: n must be in [1,4], got " + std::to_string(n));
    const double fc = factorial_sum(n);
    const double d = delta.value_or(0.5 / (std::exp(1.0) + fc));
    if (!(d > 0.0))
        throw DomainError("ModelParams: delta must be positive");
    if (d * (std::exp(1.0) + fc) > 1.0)
        throw DomainError("ModelParams: delta violates delta*(e+(2n)!+(4n)!) <= 1");
    return ModelParams(n, d, fc);
}

EnvelopeConstants EnvelopeConstants::for_params(const ModelParams& p) {
    const double e = std::exp(1.0);
    EnvelopeConstants c;
    c.q_upper = (2.0 * e + 2.0) / e;
    c.h_upper = (e + p.factorial_constant()) / e;
    c.p1_envelope = (c.q_upper + p.delta() * c.h_upper) / (1.0 + p.delta());
    return c;
}

double triangle(double t) {
    const double a = std::fabs(t);
    return a <= 1.0 ? 1.0 - a : 0.0;
}

double lambda_cf(double t) { return triangle(t) * std::exp(-std::fabs(t)); }

PhaseDerivatives phase(const ModelParams& p, double t) {
    const double a = std::fabs(t);
    if (a <= 1.0) return {0.0, 0.0, 0.0};
    const double s = t > 0.0 ? 1.0 : -1.0;
    const double v = a - 1.0; // |t| - 1 > 0
    const int n = p.n();
    const double v2nm1 = std::pow(v, 2 * n - 1);
    const double v2n = v2nm1 * v;
    // (t - sgn t)^k = (s v)^k: odd k carries the sign of t.
    return {s * v2n * v / (2 * n + 1), v2n, s * 2 * n * v2nm1};
}

cplx chi(const ModelParams& p, double t) {
    const double phi = phase(p, t).phi;
    return std::exp(-std::fabs(t)) * cplx(std::cos(phi), std::sin(phi));
}

double ell(double x) {
    const double x2 = x * x;
    const double e = std::exp(1.0);
    return (e - 1.0) * (1.0 - x2) + (1.0 - std::cos(x)) * (1.0 - x2) + 2.0 * x * std::sin(x);
}

double q_density(double x) {
    const double one_px2 = 1.0 + x * x;
    const double e = std::exp(1.0);
    return (e - ell(x) / one_px2) / (e * M_PI * one_px2);
}

double p1_density(const ModelParams& p, double x, double h_value) {
    const double v = (q_density(x) + p.delta() * h_value) / (1.0 + p.delta());
    if (v < -1e-10)
        throw NegativeDensity("p1_density negative at x=" + std::to_string(x) +
                              " (value " + std::to_string(v) + ")");
    return v;
}

cplx f1_cf(const ModelParams& p, double t) {
    const double d = p.delta();
    const double damp = std::exp(-std::fabs(t));
    const double phi = phase(p, t).phi;
    const cplx osc(std::cos(phi), std::sin(phi));
    return (triangle(t) + d * osc) * damp / (1.0 + d);
}

cplx ln_f1_closed(const ModelParams& p, double t) {
    const double d = p.delta();
    const double re = std::log((triangle(t) + d) / (1.0 + d)) - std::fabs(t);
    return {re, phase(p, t).phi};
}

} // namespace qid
