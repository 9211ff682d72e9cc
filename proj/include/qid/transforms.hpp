#pragma once

#include "qid/model.hpp"
#include "qid/oscillatory_tail.hpp"
#include "qid/quadrature.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qid {

/// Numerical value of the by-parts constant
/// (1/2) int_{|t|>1} (|phi''| + phi'^2) e^{1-|t|} dt;
/// equals (2n)! + (4n)! analytically. Relative accuracy per cfg.rel_tol.
double evaluate_K(int n, const QuadratureConfig& cfg);

/// g_m(x) = (1/pi) int_0^1 cos(tx) ln(1 + (1-t)/delta) dt.
double evaluate_gm_integral(double delta, double x, const QuadratureConfig& cfg);

struct HDiagnostics {
    double im_residue = 0.0;
    double error_bound = 0.0;
};

/// h(x) = (1/2pi) int e^{-itx} chi(t) dt, real-valued by oddness of the
/// phase. Dispatches on |x|:
///   |x| <= 2          direct adaptive quadrature of the definition;
///   moderate |x|      tabulated oscillatory (Filon) transform of chi,
///                     truncated with a certified by-parts tail bound;
///   large |x| (n=1)   asymptotic form 1/(pi(1+x^2)) + boundary terms,
///                     remainder bounded by a precomputed derivative norm.
/// Throws RealityViolation if the imaginary residue exceeds 10*abs_tol,
/// UnsupportedN for n >= 3 (phase too oscillatory for double precision at
/// the required tolerances).
double evaluate_h(const ModelParams& p, double x, const QuadratureConfig& cfg,
                  HDiagnostics* diag = nullptr);

/// (1/2pi) int e^{-itx} cf(t) dt for |cf(t)| <= e^{-|t|}-enveloped cf.
cplx fourier_inverse_cf(const std::function<cplx(double)>& cf, double x,
                        const QuadratureConfig& cfg,
                        const std::function<double(double)>& rate_hint = {});

/// Asymptotic tail description of a density, used to certify truncation of
/// forward transforms at scale far below what an absolute envelope bound
/// would require.
struct DensityTailModel {
    std::vector<TailTerm> terms;
    std::function<double(double)> remainder_bound; // |neglected transform| as fn of X
};

struct ForwardResult {
    cplx value;
    double error_estimate;
};

struct DensitySpec {
    std::function<double(double)> eval;
    double envelope_c = 1.0; // density(x) <= envelope_c / (pi (1+x^2))
    std::optional<DensityTailModel> tail;
    /// Optional factory for a specialized windowed transform of this
    /// density over [-X, X]. Used when pointwise evaluation is expensive
    /// but the window integral has structure (the p1 spec exchanges
    /// integration order for its h component).
    std::function<std::function<ForwardResult(double)>(double X, double t_rate_max,
                                                       const QuadratureConfig&)>
        window_factory;
};

/// Windowed forward transform int e^{itx} density(x) dx with the density
/// sampled once on a fixed panel grid, so repeated t evaluations are cheap.
/// The window [-X, X] is combined with the density's analytic tail model.
class ForwardTransform {
  public:
    ForwardTransform(DensitySpec spec, double t_rate_max, double window,
                     const QuadratureConfig& cfg);

    ForwardResult eval(double t) const;
    double window() const { return window_; }
    std::size_t node_count() const { return grid_ ? grid_->node_count() : 0; }

  private:
    DensitySpec spec_;
    double window_;
    QuadratureConfig cfg_;
    std::optional<PanelGrid> grid_;
    std::vector<double> density_vals_;
    std::function<ForwardResult(double)> window_eval_;
};

/// One-shot forward transform; picks the window from the tail model (or the
/// envelope when no model is present, with the correspondingly weaker error
/// estimate).
ForwardResult fourier_forward_density(const DensitySpec& density, double t,
                                      const QuadratureConfig& cfg);

DensitySpec make_q_density_spec();

/// p1 spec; evaluation routes through evaluate_h. Tail model available for
/// n = 1 (criterion-scale transforms); other n throw UnsupportedN.
DensitySpec make_p1_density_spec(const ModelParams& p, const QuadratureConfig& cfg);

} // namespace qid
