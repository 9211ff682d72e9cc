#include "qid/quadrature.hpp"

#include "qid/errors.hpp"

#include <algorithm>
#include <queue>
#include <cmath>

namespace qid {

namespace {

// G7,K15 nodes and weights on [-1,1] (QUADPACK dqk15 constants). Nodes at
// even indices belong to the Kronrod extension only; odd indices carry the
// embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEval {
    cplx k15;
    double err;
    double resabs; // Kronrod-weighted sum of |f|, for roundoff detection
};

PanelEval eval_panel(const std::function<cplx(double)>& f, double center, double hw) {
    cplx fc = f(center);
    cplx resk = kWgk[7] * fc;
    cplx resg = kWg[3] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = hw * kXgk[j];
        const cplx fl = f(center - dx), fr = f(center + dx);
        const cplx fsum = fl + fr;
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(fl) + std::abs(fr));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    resk *= hw;
    resg *= hw;
    resabs *= hw;
    return {resk, std::abs(resk - resg), resabs};
}

std::vector<double> build_breaks(double a, double b, const std::function<double(double)>& rate,
                                 double max_width, const std::vector<double>& forced = {}) {
    std::vector<double> stops;
    for (double s : forced)
        if (s > a && s < b) stops.push_back(s);
    std::sort(stops.begin(), stops.end());
    stops.push_back(b);

    std::vector<double> breaks{a};
    double t = a;
    for (double stop : stops) {
        while (t < stop) {
            double w = max_width;
            if (rate) {
                const double r = std::max({1e-12, rate(t), rate(std::min(stop, t + w))});
                w = std::min(w, M_PI / r);
            }
            t = std::min(stop, t + std::max(w, 1e-12));
            breaks.push_back(t);
        }
    }
    return breaks;
}

} // namespace

IntegralResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                                  const QuadratureConfig& cfg,
                                  const std::function<double(double)>& rate_hint,
                                  const std::vector<double>& forced_breaks) {
    if (!(a < b)) throw DomainError("integrate_adaptive: requires a < b");

    struct Panel {
        double err;
        double lo, hi;
        cplx value;
        int depth;
        bool operator<(const Panel& o) const {
            if (err != o.err) return err < o.err;
            return lo < o.lo; // deterministic tie-break
        }
    };

    // global strategy: refine the worst panel until the total estimate is
    // below tolerance; panels at roundoff, maximum depth, or minimal width
    // are frozen with their error kept in the sum
    const auto breaks = build_breaks(a, b, rate_hint, 0.5, forced_breaks);
    std::priority_queue<Panel> active;
    cplx total{0.0, 0.0};
    double active_err = 0.0, frozen_err = 0.0;
    int used = 0;
    constexpr int kMaxDepth = 60;

    auto push_panel = [&](double lo, double hi, int depth) {
        if (++used > cfg.max_subdivisions)
            throw ToleranceNotReached("integrate_adaptive: subdivision budget exhausted");
        const double hw = 0.5 * (hi - lo);
        const auto ev = eval_panel(f, 0.5 * (lo + hi), hw);
        total += ev.k15;
        const bool frozen = ev.err <= 1e-15 * ev.resabs || depth >= kMaxDepth ||
                            2.0 * hw < 1e-14 * std::max(1.0, std::fabs(lo));
        if (frozen) {
            frozen_err += ev.err;
        } else {
            active_err += ev.err;
            active.push({ev.err, lo, hi, ev.k15, depth});
        }
    };

    for (std::size_t i = 1; i < breaks.size(); ++i) push_panel(breaks[i - 1], breaks[i], 0);

    while (active_err + frozen_err > cfg.abs_tol && !active.empty()) {
        if (frozen_err > cfg.abs_tol)
            throw ToleranceNotReached(
                "integrate_adaptive: roundoff floor above the requested tolerance");
        const Panel worst = active.top();
        active.pop();
        active_err -= worst.err;
        total -= worst.value;
        const double mid = 0.5 * (worst.lo + worst.hi);
        push_panel(worst.lo, mid, worst.depth + 1);
        push_panel(mid, worst.hi, worst.depth + 1);
    }

    const double err_total = active_err + frozen_err;
    if (err_total > cfg.abs_tol && active.empty())
        throw ToleranceNotReached("integrate_adaptive: estimate stuck above tolerance");
    return {total, err_total, used, b};
}

PanelGrid::PanelGrid(double a, double b, const std::function<double(double)>& rate_hint,
                     double max_width) {
    const auto breaks = build_breaks(a, b, rate_hint, max_width);
    const std::size_t n_panels = breaks.size() - 1;
    half_widths_.reserve(n_panels);
    nodes_.reserve(15 * n_panels);
    for (std::size_t i = 0; i < n_panels; ++i) {
        const double c = 0.5 * (breaks[i] + breaks[i + 1]);
        const double hw = 0.5 * (breaks[i + 1] - breaks[i]);
        half_widths_.push_back(hw);
        for (int j = 0; j < 7; ++j) nodes_.push_back(c - hw * kXgk[j]);
        nodes_.push_back(c);
        for (int j = 7; j-- > 0;) nodes_.push_back(c + hw * kXgk[j]);
    }
}

PanelGrid PanelGrid::symmetric(double half_range, const std::function<double(double)>& rate_hint,
                               double max_width) {
    PanelGrid g(0.0, half_range, rate_hint, max_width);
    PanelGrid out;
    const std::size_t np = g.panel_count();
    out.half_widths_.reserve(2 * np);
    out.nodes_.reserve(30 * np);
    // mirrored side first (descending panels reversed into ascending order)
    for (std::size_t p = np; p-- > 0;) {
        out.half_widths_.push_back(g.half_widths_[p]);
        for (std::size_t j = 15; j-- > 0;) out.nodes_.push_back(-g.nodes_[15 * p + j]);
    }
    for (std::size_t p = 0; p < np; ++p) {
        out.half_widths_.push_back(g.half_widths_[p]);
        for (std::size_t j = 0; j < 15; ++j) out.nodes_.push_back(g.nodes_[15 * p + j]);
    }
    return out;
}

PanelGrid::Sum PanelGrid::accumulate(const std::vector<cplx>& values) const {
    cplx total{0.0, 0.0};
    double err = 0.0;
    for (std::size_t p = 0; p < half_widths_.size(); ++p) {
        const cplx* v = &values[15 * p];
        cplx resk = kWgk[7] * v[7];
        cplx resg = kWg[3] * v[7];
        for (int j = 0; j < 7; ++j) {
            const cplx fsum = v[j] + v[14 - j];
            resk += kWgk[j] * fsum;
            if (j % 2 == 1) resg += kWg[j / 2] * fsum;
        }
        total += half_widths_[p] * resk;
        err += half_widths_[p] * std::abs(resk - resg);
    }
    return {total, err};
}

} // namespace qid
