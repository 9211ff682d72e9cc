#include "qid/filon.hpp"

#include "qid/errors.hpp"

#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace qid {

namespace {

double legendre_poly(int k, double x) {
    if (k == 0) return 1.0;
    double pm1 = 1.0, p = x;
    for (int j = 1; j < k; ++j) {
        const double pn = ((2 * j + 1) * x * p - j * pm1) / (j + 1);
        pm1 = p;
        p = pn;
    }
    return p;
}

GaussLegendre compute_gl(int npts) {
    GaussLegendre gl;
    gl.nodes.resize(npts);
    gl.weights.resize(npts);
    for (int i = 0; i < npts; ++i) {
        // Chebyshev-based initial guess, Newton refinement on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double pm1 = 1.0, p = x;
            for (int j = 1; j < npts; ++j) {
                const double pn = ((2 * j + 1) * x * p - j * pm1) / (j + 1);
                pm1 = p;
                p = pn;
            }
            const double dp = npts * (x * p - pm1) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double pm1 = 1.0, p = x;
        for (int j = 1; j < npts; ++j) {
            const double pn = ((2 * j + 1) * x * p - j * pm1) / (j + 1);
            pm1 = p;
            p = pn;
        }
        const double dp = npts * (x * p - pm1) / (x * x - 1.0);
        gl.nodes[npts - 1 - i] = x;
        gl.weights[npts - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

} // namespace

const GaussLegendre& GaussLegendre::of_order(int npts) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(npts);
    if (it == cache.end()) it = cache.emplace(npts, compute_gl(npts)).first;
    return it->second;
}

FilonTable::FilonTable(const std::function<cplx(double)>& f,
                       const std::vector<double>& breakpoints, int degree)
    : degree_(degree) {
    if (breakpoints.size() < 2) throw DomainError("FilonTable: need at least one panel");
    const int npts = degree + 1;
    const auto& gl = GaussLegendre::of_order(npts);

    // Projection matrix: c_k = (2k+1)/2 * sum_q w_q P_k(tau_q) f(tau_q).
    std::vector<double> proj(static_cast<std::size_t>(npts) * npts);
    for (int k = 0; k < npts; ++k)
        for (int q = 0; q < npts; ++q)
            proj[k * npts + q] = 0.5 * (2 * k + 1) * gl.weights[q] * legendre_poly(k, gl.nodes[q]);

    const std::size_t n_panels = breakpoints.size() - 1;
    centers_.reserve(n_panels);
    half_widths_.reserve(n_panels);
    panel_ends_.reserve(n_panels);
    coeffs_.resize(n_panels * npts);

    std::vector<cplx> fv(npts);
    for (std::size_t p = 0; p < n_panels; ++p) {
        const double c = 0.5 * (breakpoints[p] + breakpoints[p + 1]);
        const double hw = 0.5 * (breakpoints[p + 1] - breakpoints[p]);
        centers_.push_back(c);
        half_widths_.push_back(hw);
        panel_ends_.push_back(breakpoints[p + 1]);
        for (int q = 0; q < npts; ++q) fv[q] = f(c + hw * gl.nodes[q]);
        for (int k = 0; k < npts; ++k) {
            cplx acc{0.0, 0.0};
            for (int q = 0; q < npts; ++q) acc += proj[k * npts + q] * fv[q];
            coeffs_[p * npts + k] = acc;
        }
    }
}

std::size_t FilonTable::panels_until(double t_limit) const {
    const auto it = std::lower_bound(panel_ends_.begin(), panel_ends_.end(), t_limit);
    return static_cast<std::size_t>(it - panel_ends_.begin()) + (it != panel_ends_.end() ? 1 : 0);
}

cplx FilonTable::eval_prefix(double x, std::size_t panel_count) const {
    const int npts = degree_ + 1;
    const std::size_t np = std::min(panel_count, panel_ends_.size());
    std::vector<double> jl(static_cast<std::size_t>(npts));
    cplx total{0.0, 0.0};
    for (std::size_t p = 0; p < np; ++p) {
        const double hw = half_widths_[p];
        const double theta = x * hw;
        const double at = std::fabs(theta);
        gsl_sf_bessel_jl_array(degree_, at, jl.data());
        // moments mu_k(theta) = 2 (-i)^k j_k(theta), with j_k(-t)=(-1)^k j_k(t)
        // -> for theta<0 the factor becomes 2 (+i)^k j_k(|theta|).
        const cplx step = theta >= 0.0 ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
        cplx factor{2.0, 0.0};
        cplx acc{0.0, 0.0};
        const cplx* ck = &coeffs_[p * npts];
        for (int k = 0; k < npts; ++k) {
            acc += ck[k] * factor * jl[k];
            factor *= step;
        }
        const double ph = -x * centers_[p];
        total += hw * cplx(std::cos(ph), std::sin(ph)) * acc;
    }
    return total;
}

} // namespace qid
