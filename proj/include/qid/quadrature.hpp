#pragma once

#include "qid/model.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace qid {

struct QuadratureConfig {
    double abs_tol = 1e-8;
    double rel_tol = 1e-10;
    int max_subdivisions = 200000;
    /// Bound accepted for a neglected damped tail; kept at abs_tol/10.
    double truncation_tail_mass = 1e-9;
    /// Window half-width for spectral reconstructions (analytic tails
    /// carry the rest).
    double lk_window = 800.0;
    /// Numeric extension for the unsigned split tail; beyond it only the
    /// envelope bound is reported.
    double lk_tau_window = 50000.0;

    static QuadratureConfig with_tol(double abs_tol) {
        QuadratureConfig c;
        c.abs_tol = abs_tol;
        c.truncation_tail_mass = abs_tol / 10.0;
        return c;
    }
};

struct IntegralResult {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    int subdivisions_used = 0;
    double truncation_point = 0.0;

    double real() const { return value.real(); }
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of a complex-valued f over
/// [a,b]. Panels are bisected while the embedded-pair error exceeds the
/// width-proportional share of the tolerance; processing order is
/// deterministic (left first).
///
/// rate_hint, when given, bounds the local phase rate of f; the initial
/// panelization keeps panel width <= pi / rate_hint(t) so oscillations are
/// resolved before error estimation starts. forced_breaks pins known kinks
/// onto panel boundaries, where the embedded error estimate would otherwise
/// be unreliable.
IntegralResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                                  const QuadratureConfig& cfg,
                                  const std::function<double(double)>& rate_hint = {},
                                  const std::vector<double>& forced_breaks = {});

/// Fixed panelization of [a,b] whose K15 nodes can be reused across many
/// integrands sharing the same oscillation budget. Weights of the embedded
/// G7 rule are kept so callers can form an error estimate per evaluation.
class PanelGrid {
  public:
    /// Builds panels left to right with width <= pi / rate_hint(t),
    /// additionally capped by max_width.
    PanelGrid(double a, double b, const std::function<double(double)>& rate_hint,
              double max_width = 0.5);

    /// Symmetric grid on [-half_range, half_range]: the positive side is
    /// built and mirrored, so nodes pair exactly and Hermitian integrands
    /// cancel their odd parts to rounding error.
    static PanelGrid symmetric(double half_range, const std::function<double(double)>& rate_hint,
                               double max_width = 0.5);

    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t panel_count() const { return half_widths_.size(); }

    /// Kronrod-weighted sum of the sampled values plus the |K15-G7|
    /// error accumulated per panel.
    struct Sum {
        cplx value;
        double error_estimate;
    };
    Sum accumulate(const std::vector<cplx>& values) const;

  private:
    PanelGrid() = default;
    std::vector<double> nodes_;       // panel-major, 15 per panel
    std::vector<double> half_widths_; // one per panel
};

} // namespace qid
