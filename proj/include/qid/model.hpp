#pragma once

#include <complex>
#include <optional>

namespace qid {

using cplx = std::complex<double>;

/// Model knobs: phase degree n and mixing weight delta.
///
/// Admissibility requires delta * (e + (2n)! + (4n)!) <= 1, so the mixed
/// density q + delta*h stays non-negative. n is capped at 4 to keep (4n)!
/// exactly representable in double precision.
class ModelParams {
  public:
    /// Throws UnsupportedN / DomainError on an inadmissible pair.
    /// Without an explicit delta, uses max_delta(n)/2.
    static ModelParams create(int n, std::optional<double> delta = std::nullopt);

    int n() const { return n_; }
    double delta() const { return delta_; }

    /// (2n)! + (4n)!, exact integer accumulation converted to double.
    double factorial_constant() const { return fact_const_; }

  private:
    ModelParams(int n, double delta, double fc) : n_(n), delta_(delta), fact_const_(fc) {}
    int n_;
    double delta_;
    double fact_const_;
};

/// Largest admissible delta for a given n: 1 / (e + (2n)! + (4n)!).
double max_delta(int n);

/// Envelope coefficients used by bounds checking and the rejection sampler.
struct EnvelopeConstants {
    double q_upper;     // (2e+2)/e : q(x) <= q_upper / (pi (1+x^2))
    double h_upper;     // (e+(2n)!+(4n)!)/e : |h(x)| <= h_upper / (pi (1+x^2))
    double p1_envelope; // (q_upper + delta*h_upper)/(1+delta)

    static EnvelopeConstants for_params(const ModelParams& p);
};

/// Triangular characteristic function: 1-|t| on [-1,1], 0 outside.
double triangle(double t);

/// Product of the triangle with the Cauchy characteristic function:
/// triangle(t) * exp(-|t|).
double lambda_cf(double t);

struct PhaseDerivatives {
    double phi;
    double dphi;
    double d2phi;
};

/// Piecewise power phase and its first two derivatives.
/// phi(t) = (t - sgn t)^(2n+1) / (2n+1) for |t| > 1, zero inside [-1,1].
PhaseDerivatives phase(const ModelParams& p, double t);

/// chi(t) = exp(-|t| + i phi(t)).
cplx chi(const ModelParams& p, double t);

/// Trig-polynomial factor in the closed form of q:
/// ell(x) = (e-1)(1-x^2) + (1-cos x)(1-x^2) + 2 x sin x.
double ell(double x);

/// Density with characteristic function lambda_cf, in closed form:
/// q(x) = (e - ell(x)/(1+x^2)) / (e pi (1+x^2)).
double q_density(double x);

/// Mixed density p1 = (q + delta*h)/(1+delta). The caller supplies h(x)
/// (it requires quadrature); this stays a pure closed-form combination.
/// Throws NegativeDensity below -1e-10, which would contradict the
/// admissibility constraint and therefore flags a numerical bug upstream.
double p1_density(const ModelParams& p, double x, double h_value);

/// Characteristic function of p1 in closed form:
/// f1(t) = (triangle(t) + delta e^{i phi(t)}) e^{-|t|} / (1+delta).
cplx f1_cf(const ModelParams& p, double t);

/// Distinguished logarithm of f1 in closed form:
/// ln((triangle(t)+delta)/(1+delta)) - |t| + i phi(t).
cplx ln_f1_closed(const ModelParams& p, double t);

} // namespace qid
