#pragma once

#include "qid/certificate.hpp"
#include "qid/model.hpp"
#include "qid/quadrature.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qid {

class FilonTable;

/// Below this |x| the mixture weight g_m is evaluated from its cosine
/// integral; at or above it from the closed form, which divides by x^2.
inline constexpr double kGmFormSwitch = 0.5;

/// epsilon(x) = int_0^1 cos(tx) / (delta+1-t)^2 dt. Bounded by
/// 1/delta - 1/(1+delta); decays as |x| grows.
double epsilon_remainder(double delta, double x, const QuadratureConfig& cfg);

/// Closed form g_m(x) = (delta/(1+delta) - cos x + delta*epsilon(x)) /
/// (pi delta x^2); requires |x| >= kGmFormSwitch.
double gm_closed(double delta, double x, const QuadratureConfig& cfg);

/// Cauchy spectral density 1/(pi(1+u^2)).
double spectral_density_GC(double u);

/// Shared evaluation context for the delta-dependent spectral machinery:
/// one tabulated epsilon transform serves dense g_m / density sweeps.
class SpectralModel {
  public:
    SpectralModel(double delta, const QuadratureConfig& cfg);

    double delta() const { return delta_; }
    const QuadratureConfig& config() const { return cfg_; }

    double epsilon(double u) const;
    /// Large-u by-parts series for epsilon with the first omitted term as
    /// error bound; effective once delta*u is large. Used for far-tail
    /// sweeps where per-point accuracy may be traded for speed.
    double epsilon_series(double u, double* err_bound = nullptr) const;
    double gm(double u) const;
    /// pi u^2 g_m(u) + 1; the signed weight whose sign decides monotonicity.
    double signed_weight(double u) const;
    /// signed weight evaluated with the series epsilon (|u| large).
    double signed_weight_tail(double u, double* err_bound = nullptr) const;
    double density_Gm(double u) const;
    double density_G1a(double u) const;
    /// (g_plus, g_minus) = (max(0,s), -min(0,s)) of the signed weight.
    std::pair<double, double> hahn_jordan_split(double u) const;

  private:
    double delta_;
    QuadratureConfig cfg_;
    std::shared_ptr<FilonTable> eps_table_;
};

double spectral_density_Gm(const ModelParams& p, double u, const QuadratureConfig& cfg);
double spectral_density_G1a(const ModelParams& p, double u, const QuadratureConfig& cfg);
std::pair<double, double> hahn_jordan(const ModelParams& p, double u,
                                      const QuadratureConfig& cfg);

struct LkTailEval {
    double value = 0.0; // real: even densities cancel the odd kernel parts
    double bound = 0.0;
};

struct SpectralPair {
    double gamma = 0.0;
    std::function<double(double)> density;
    std::string description;
    /// Analytic tail of the reconstruction integrand beyond the window.
    std::function<LkTailEval(double t, double window)> tail;
};

SpectralPair make_cauchy_pair();
/// Spectral pair of G_{1,a} (scale 1) or of G = 2 G_{1,a} (scale 2).
SpectralPair make_g1a_pair(const SpectralModel& model, double scale = 1.0);

/// Windowed Levy-Khinchine-type reconstruction
/// exp{ it gamma + int (e^{itx}-1-it sin x) (1+x^2)/x^2 dG(x) }
/// with the density sampled once; repeated t evaluations are cheap.
class LkTransform {
  public:
    LkTransform(SpectralPair pair, double t_rate_max, double window,
                const QuadratureConfig& cfg);

    struct Result {
        cplx value;
        cplx exponent;
        double exponent_error;
    };
    Result eval(double t) const;
    double window() const { return window_; }

  private:
    SpectralPair pair_;
    double window_;
    QuadratureConfig cfg_;
    PanelGrid grid_;
    std::vector<double> density_vals_;
};

/// One-shot reconstruction at a single t (uses cfg.lk_window).
cplx lk_reconstruct(const SpectralPair& pair, double t, const QuadratureConfig& cfg);

struct SignInterval {
    double lo, hi;
    int sign; // -1, 0, +1 of the sampled density
};
struct NegativityWitness {
    double location; // refined most-negative sample in a negative interval
    double value;
};
struct ScanResult {
    std::vector<SignInterval> intervals;
    std::vector<NegativityWitness> witnesses;
};

/// Maximal sampled sign-constant intervals of a density plus refined
/// negativity witnesses (sign changes bisected to 1e-6).
ScanResult monotonicity_scan(const std::function<double(double)>& density, double a, double b,
                             double step);

Certificate theorem1_certificate(const ModelParams& p, const QuadratureConfig& cfg);
Certificate theorem2_certificate(const ModelParams& p, const QuadratureConfig& cfg);

/// Control run: negative part of the spectral density clamped to zero
/// before reconstruction. The representation check must fail.
Certificate theorem1_certificate_tampered(const ModelParams& p, const QuadratureConfig& cfg);

} // namespace qid
