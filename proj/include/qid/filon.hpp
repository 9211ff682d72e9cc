#pragma once

#include "qid/model.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace qid {

/// Tabulated Filon-type evaluator for F(x) = int_a^b e^{-i x t} f(t) dt.
///
/// f is sampled once per panel at Gauss-Legendre nodes and projected onto
/// Legendre polynomials; the oscillatory moments int P_k(tau) e^{-i theta tau}
/// d tau = 2 (-i)^k j_k(theta) are exact for every x, so one table serves
/// arbitrarily many frequencies. Accuracy is set by the panel widths: the
/// variation of f per panel must stay within what degree-`degree`
/// interpolation resolves.
class FilonTable {
  public:
    FilonTable(const std::function<cplx(double)>& f, const std::vector<double>& breakpoints,
               int degree = 12);

    /// Transform over the full tabulated range.
    cplx eval(double x) const { return eval_prefix(x, panel_ends_.size()); }

    /// Transform over the first `panel_count` panels only.
    cplx eval_prefix(double x, std::size_t panel_count) const;

    /// Number of leading panels covering [a, t_limit].
    std::size_t panels_until(double t_limit) const;

    std::size_t panel_count() const { return panel_ends_.size(); }
    double range_end() const { return panel_ends_.empty() ? 0.0 : panel_ends_.back(); }

  private:
    int degree_;
    std::vector<double> centers_;
    std::vector<double> half_widths_;
    std::vector<double> panel_ends_;
    std::vector<cplx> coeffs_; // (degree_+1) per panel, panel-major
};

/// Gauss-Legendre nodes/weights on [-1,1], computed once per order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    static const GaussLegendre& of_order(int npts);
};

} // namespace qid
