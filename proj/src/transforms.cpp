#include "qid/transforms.hpp"

#include "qid/errors.hpp"
#include "qid/filon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

namespace qid {

namespace {

// ---------------------------------------------------------------------------
// truncation rule for e^{-|t|}-damped integrands with polynomial factors
// ---------------------------------------------------------------------------

double damped_truncation_point(int n, double tail_mass) {
    double T = 10.0;
    while ((1.0 + std::pow(T - 1.0, 4 * n)) * std::exp(1.0 - T) > tail_mass && T < 400.0)
        T += 0.5;
    return T;
}

// ---------------------------------------------------------------------------
// derivative chain of Psi = (i phi'' - phi'^2) e^{i phi} as polynomials in
// v = t - 1 (t > 1): Psi^(m) = B_m(v) e^{i phi}, B_{m+1} = B_m' + i phi' B_m
// ---------------------------------------------------------------------------

struct CPoly {
    std::vector<cplx> c; // c[k] is the coefficient of v^k

    CPoly deriv() const {
        if (c.size() <= 1) return {{}};
        CPoly d;
        d.c.resize(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = double(k) * c[k];
        return d;
    }
    CPoly mul(const CPoly& o) const {
        CPoly r;
        if (c.empty() || o.c.empty()) return r;
        r.c.assign(c.size() + o.c.size() - 1, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        return r;
    }
    CPoly add(const CPoly& o) const {
        CPoly r;
        r.c.assign(std::max(c.size(), o.c.size()), cplx(0.0, 0.0));
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
        return r;
    }
    cplx at(double v) const {
        cplx acc{0.0, 0.0};
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * v + c[k];
        return acc;
    }
    cplx at_zero() const { return c.empty() ? cplx(0.0, 0.0) : c[0]; }
    int degree() const { return c.empty() ? 0 : int(c.size()) - 1; }
};

struct HAsymptotics {
    // I+ = sum_j boundary[j] e^{-z}/z^{j} + z^{-m} int_1^inf e^{-zt} Psi^(m) dt
    std::vector<std::pair<int, cplx>> boundary; // (j, Psi^{(j-1)}(1+))
    int m = 0;
    double d_norm = 0.0; // int_1^inf e^{-t} |Psi^(m)| dt
    double x_switch = std::numeric_limits<double>::infinity();
};

HAsymptotics compute_h_asymptotics(int n, int m_levels) {
    // B_0 = A = 2n i v^{2n-1} - v^{4n};  i phi' = i v^{2n}
    CPoly A;
    A.c.assign(4 * n + 1, cplx(0.0, 0.0));
    A.c[2 * n - 1] = cplx(0.0, 2.0 * n);
    A.c[4 * n] = cplx(-1.0, 0.0);
    CPoly iphi1;
    iphi1.c.assign(2 * n + 1, cplx(0.0, 0.0));
    iphi1.c[2 * n] = cplx(0.0, 1.0);

    HAsymptotics out;
    out.m = m_levels;
    CPoly B = A;
    for (int j = 1; j <= m_levels; ++j) {
        const cplx b0 = B.at_zero(); // Psi^{(j-1)}(1+)
        if (std::abs(b0) > 0.0) out.boundary.emplace_back(j, b0);
        B = B.deriv().add(iphi1.mul(B));
    }

    // d_norm with ~1e-3 relative accuracy is enough for an error constant.
    const double T = damped_truncation_point(n, 1e-12) + double(B.degree());
    auto f = [&](double t) { return cplx(std::exp(-t) * std::abs(B.at(t - 1.0)), 0.0); };
    QuadratureConfig c;
    c.abs_tol = 1.0;
    double est = integrate_adaptive(f, 1.0, T, c).real();
    c.abs_tol = std::max(1e-8, 1e-4 * est);
    out.d_norm = integrate_adaptive(f, 1.0, T, c).real();

    // switch point where the remainder bound d_norm/(pi (1+x^2) |z|^m)
    // drops below 1e-10
    out.x_switch = std::pow(out.d_norm / (M_PI * 1e-10), 1.0 / (m_levels + 2));
    return out;
}

const HAsymptotics& h_asymptotics(int n) {
    static std::mutex mu;
    static std::map<int, HAsymptotics> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_h_asymptotics(n, n == 1 ? 5 : 1)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// tabulated oscillatory transforms of chi (one table per half-line)
// ---------------------------------------------------------------------------

struct ChiTables {
    double t0 = 0.0;
    std::unique_ptr<FilonTable> pos; // int_0^{t0} e^{-ixt} chi(t) dt
    std::unique_ptr<FilonTable> neg; // int_0^{t0} e^{-ixs} conj(chi(-s)) ds
};

std::vector<double> chi_breakpoints(const ModelParams& p, double t0) {
    // phase budget 2 rad per panel keeps degree-12 Legendre interpolation
    // of e^{i phi} near 1e-10 relative
    std::vector<double> b{0.0};
    double t = 0.0;
    while (t < t0) {
        double w = std::min(0.5, 2.0 / (phase(p, t).dphi + 1.0));
        if (t < 1.0 && t + w > 1.0) w = 1.0 - t; // keep the kink on a boundary
        t = std::min(t0, t + w);
        b.push_back(t);
    }
    return b;
}

const ChiTables& chi_tables(const ModelParams& p, double t0_needed) {
    static std::mutex mu;
    static std::map<int, ChiTables> cache;
    std::lock_guard<std::mutex> lock(mu);
    ChiTables& tab = cache[p.n()];
    if (tab.t0 < t0_needed) {
        const double t0 = std::ceil(t0_needed * 1.25 * 2.0) / 2.0;
        const auto breaks = chi_breakpoints(p, t0);
        tab.pos = std::make_unique<FilonTable>([&p](double t) { return chi(p, t); }, breaks);
        tab.neg = std::make_unique<FilonTable>(
            [&p](double s) { return std::conj(chi(p, -s)); }, breaks);
        tab.t0 = t0;
    }
    return tab;
}

// smallest t0 whose certified truncation bound (on h itself) drops below
// tau. Two bounds combine: the plain amplitude bound e^{-t0} and, once the
// stationary point is passed (phi' >= 2|x|+2), the integration-by-parts
// bound 3 e^{-t0}/(phi'(t0)-|x|).
double h_tail_cutoff(const ModelParams& p, double ax, double tau, double* bound_out) {
    double t0 = 4.0;
    double bound;
    for (;;) {
        const double dphi = phase(p, t0).dphi;
        bound = std::exp(-t0);
        if (dphi >= 2.0 * ax + 2.0) bound = std::min(bound, 3.0 * std::exp(-t0) / (dphi - ax));
        bound /= M_PI; // both half-lines, each scaled by 1/(2 pi)
        if (bound <= tau || t0 > 60.0) break;
        t0 += 0.25;
    }
    if (bound_out) *bound_out = bound;
    return t0;
}

double table_cap(int n) { return n == 1 ? 26.0 : 13.5; }

} // namespace

// ---------------------------------------------------------------------------

double evaluate_K(int n, const QuadratureConfig& cfg) {
    const auto p = ModelParams::create(n); // validates 1 <= n <= 4
    const double T = damped_truncation_point(n, cfg.truncation_tail_mass);
    auto f = [&p](double t) {
        const auto ph = phase(p, t);
        return cplx((std::fabs(ph.d2phi) + ph.dphi * ph.dphi) * std::exp(1.0 - std::fabs(t)), 0.0);
    };
    QuadratureConfig c = cfg;
    c.abs_tol = 1.0;
    const double est = integrate_adaptive(f, 1.0, T, c).real();
    c.abs_tol = std::max(cfg.abs_tol, 0.25 * cfg.rel_tol * est);
    const double pos = integrate_adaptive(f, 1.0, T, c).real();
    const double neg = integrate_adaptive(f, -T, -1.0, c).real();
    return 0.5 * (pos + neg);
}

double evaluate_gm_integral(double delta, double x, const QuadratureConfig& cfg) {
    if (!(delta > 0.0)) throw DomainError("evaluate_gm_integral: delta must be positive");
    auto f = [delta, x](double t) {
        return cplx(std::cos(t * x) * std::log1p((1.0 - t) / delta), 0.0);
    };
    auto rate = [x](double) { return std::fabs(x) + 1.0; };
    QuadratureConfig c = cfg;
    c.abs_tol = 0.5 * cfg.abs_tol;
    // geometric boundary layer toward t=1, where the integrand steepens on
    // the delta scale; the endpoint panel is never a leaf of the initial mesh
    std::vector<double> forced;
    for (double d = 0.5; d > 0.5 * delta; d *= 0.5) forced.push_back(1.0 - d);
    return integrate_adaptive(f, 0.0, 1.0, c, rate, forced).real() / M_PI;
}

double evaluate_h(const ModelParams& p, double x, const QuadratureConfig& cfg,
                  HDiagnostics* diag) {
    if (p.n() > 2)
        throw UnsupportedN("evaluate_h: quadrature paths support n <= 2 "
                           "(higher n needs phase resolution beyond double precision)");
    const double ax = std::fabs(x);
    const double tau = cfg.truncation_tail_mass;

    if (ax <= 2.0) {
        // direct form on [-T, T]
        const double T = damped_truncation_point(p.n(), tau);
        const double amp_cut = std::log(1.0 / tau) + 5.0;
        auto f = [&p, x](double t) {
            const cplx v = chi(p, t);
            const double ph = -t * x;
            return v * cplx(std::cos(ph), std::sin(ph));
        };
        auto rate = [&p, ax, amp_cut](double t) {
            if (std::fabs(t) > amp_cut) return 1.0;
            return std::min(phase(p, t).dphi + ax + 1.0, 200.0);
        };
        const auto r = integrate_adaptive(f, -T, T, cfg, rate, {-1.0, 0.0, 1.0});
        const double im = std::fabs(r.value.imag()) / (2.0 * M_PI);
        if (im > 10.0 * cfg.abs_tol)
            throw RealityViolation("evaluate_h: imaginary residue " + std::to_string(im));
        if (diag) {
            diag->im_residue = im;
            diag->error_bound = (r.error_estimate + 2.0 * std::exp(-T)) / (2.0 * M_PI);
        }
        return r.value.real() / (2.0 * M_PI);
    }

    const auto& asym = h_asymptotics(p.n());
    const cplx z(1.0, x);
    if (ax > asym.x_switch) {
        // asymptotic branch: Cauchy principal part plus boundary terms
        double val = 1.0 / (M_PI * (1.0 + x * x));
        const cplx emz = std::exp(-z);
        for (const auto& [j, b] : asym.boundary)
            val += (b * emz / std::pow(z, j + 2)).real() / M_PI;
        const double bound = asym.d_norm / (M_PI * (1.0 + x * x) * std::pow(std::abs(z), asym.m));
        if (diag) {
            diag->im_residue = 0.0;
            diag->error_bound = bound;
        }
        return val;
    }

    double tail_bound = 0.0;
    const double t0 = h_tail_cutoff(p, ax, tau, &tail_bound);
    if (t0 > table_cap(p.n()))
        throw ToleranceNotReached("evaluate_h: |x| out of tabulated range for n=" +
                                  std::to_string(p.n()));
    const auto& tab = chi_tables(p, t0);
    const std::size_t np = tab.pos->panels_until(t0);
    const cplx dpos = tab.pos->eval_prefix(x, np);
    const cplx dneg = std::conj(tab.neg->eval_prefix(x, np));
    const cplx total = (dpos + dneg) / (2.0 * M_PI);
    const double im = std::fabs(total.imag());
    if (im > 10.0 * cfg.abs_tol)
        throw RealityViolation("evaluate_h: imaginary residue " + std::to_string(im));
    if (diag) {
        diag->im_residue = im;
        diag->error_bound = tail_bound + 1e-11;
    }
    return total.real();
}

cplx fourier_inverse_cf(const std::function<cplx(double)>& cf, double x,
                        const QuadratureConfig& cfg,
                        const std::function<double(double)>& rate_hint) {
    const double T = std::log(2.0 / cfg.truncation_tail_mass) + 1.0;
    auto f = [&cf, x](double t) {
        const double ph = -t * x;
        return cf(t) * cplx(std::cos(ph), std::sin(ph));
    };
    auto rate = [&rate_hint, x](double t) {
        return std::fabs(x) + 1.0 + (rate_hint ? rate_hint(t) : 0.0);
    };
    // the model's characteristic functions kink at 0 and +-1; pinning those
    // onto panel boundaries keeps the embedded error estimate honest
    const auto r = integrate_adaptive(f, -T, T, cfg, rate, {-1.0, 0.0, 1.0});
    return r.value / (2.0 * M_PI);
}

// ---------------------------------------------------------------------------
// forward transforms
// ---------------------------------------------------------------------------

ForwardTransform::ForwardTransform(DensitySpec spec, double t_rate_max, double window,
                                   const QuadratureConfig& cfg)
    : spec_(std::move(spec)), window_(window), cfg_(cfg) {
    if (spec_.window_factory) {
        window_eval_ = spec_.window_factory(window, t_rate_max, cfg);
        return;
    }
    grid_.emplace(-window, window, [t_rate_max](double) { return t_rate_max + 2.0; });
    density_vals_.reserve(grid_->node_count());
    for (const double xi : grid_->nodes()) density_vals_.push_back(spec_.eval(xi));
}

ForwardResult ForwardTransform::eval(double t) const {
    cplx value;
    double err;
    if (window_eval_) {
        const auto w = window_eval_(t);
        value = w.value;
        err = w.error_estimate;
    } else {
        const auto& xs = grid_->nodes();
        std::vector<cplx> vals(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double ph = t * xs[i];
            vals[i] = density_vals_[i] * cplx(std::cos(ph), std::sin(ph));
        }
        const auto sum = grid_->accumulate(vals);
        value = sum.value;
        err = sum.error_estimate;
    }
    if (spec_.tail) {
        value += forward_transform_tail(spec_.tail->terms, t, window_);
        err += spec_.tail->remainder_bound(window_);
    } else {
        err += 2.0 * spec_.envelope_c / (M_PI * window_);
    }
    return {value, err};
}

ForwardResult fourier_forward_density(const DensitySpec& density, double t,
                                      const QuadratureConfig& cfg) {
    double X = 100.0;
    if (density.tail) {
        while (density.tail->remainder_bound(X) > cfg.truncation_tail_mass && X < 6400.0)
            X *= 2.0;
    } else {
        X = std::min(2.0 * density.envelope_c / (M_PI * cfg.truncation_tail_mass), 2.0e4);
    }
    ForwardTransform ft(density, std::fabs(t), X, cfg);
    return ft.eval(t);
}

// ---------------------------------------------------------------------------
// density specs with asymptotic tails
// ---------------------------------------------------------------------------

namespace {

// 1/(pi(1+x^2)) = (1/pi)(x^-2 - x^-4 + x^-6) + O(x^-8)
void push_cauchy_terms(std::vector<TailTerm>& v, double c) {
    v.push_back({c / M_PI, TrigKind::one, 2, Parity::even});
    v.push_back({-c / M_PI, TrigKind::one, 4, Parity::even});
    v.push_back({c / M_PI, TrigKind::one, 6, Parity::even});
}

// -ell(x)/(e pi (1+x^2)^2) expanded with ell = (e - cos x)(1-x^2) + 2x sin x
void push_ell_terms(std::vector<TailTerm>& v, double c) {
    const double s = c / (std::exp(1.0) * M_PI);
    v.push_back({s * std::exp(1.0), TrigKind::one, 2, Parity::even});
    v.push_back({-3.0 * s * std::exp(1.0), TrigKind::one, 4, Parity::even});
    v.push_back({5.0 * s * std::exp(1.0), TrigKind::one, 6, Parity::even});
    v.push_back({-s, TrigKind::cosine, 2, Parity::even});
    v.push_back({3.0 * s, TrigKind::cosine, 4, Parity::even});
    v.push_back({-5.0 * s, TrigKind::cosine, 6, Parity::even});
    v.push_back({-2.0 * s, TrigKind::sine, 3, Parity::even});
    v.push_back({4.0 * s, TrigKind::sine, 5, Parity::even});
}

double series_remainder_bound(double c, double X) {
    // next omitted orders of the two expansions above, with margin 2
    const double e = std::exp(1.0);
    const double r8 = (1.1 / M_PI + 7.5 * (e + 1.0) / (e * M_PI)) * std::fabs(c);
    const double r7 = (6.5 / (e * M_PI)) * std::fabs(c);
    return 2.0 * (2.0 * r8 / (7.0 * std::pow(X, 7)) + 2.0 * r7 / (6.0 * std::pow(X, 6)));
}

} // namespace

DensitySpec make_q_density_spec() {
    DensitySpec spec;
    spec.eval = [](double x) { return q_density(x); };
    spec.envelope_c = (2.0 * std::exp(1.0) + 2.0) / std::exp(1.0);
    DensityTailModel tail;
    push_cauchy_terms(tail.terms, 1.0);
    push_ell_terms(tail.terms, 1.0);
    tail.remainder_bound = [](double X) { return series_remainder_bound(1.0, X); };
    spec.tail = std::move(tail);
    return spec;
}

DensitySpec make_p1_density_spec(const ModelParams& p, const QuadratureConfig& cfg) {
    if (p.n() != 1)
        throw UnsupportedN("make_p1_density_spec: transform tail model derived for n=1");
    DensitySpec spec;
    const ModelParams params = p;
    QuadratureConfig hcfg = cfg;
    spec.eval = [params, hcfg](double x) {
        return p1_density(params, x, evaluate_h(params, x, hcfg));
    };
    spec.envelope_c = EnvelopeConstants::for_params(p).p1_envelope;

    const double d = p.delta();
    const double wq = 1.0 / (1.0 + d); // weight of the ell part
    const double wh = d / (1.0 + d);   // weight of the h remainder part
    DensityTailModel tail;
    push_cauchy_terms(tail.terms, 1.0); // q and delta*h Cauchy parts combine to 1
    push_ell_terms(tail.terms, wq);
    // leading by-parts boundary term of h - Cauchy:
    // (1/pi) Re{ 2i e^{-(1+ix)} / (1+ix)^4 } ~ (e^-1/pi)(2 sin x/x^4 - 8 cos x/x^5)
    const double he = wh * std::exp(-1.0) / M_PI;
    tail.terms.push_back({2.0 * he, TrigKind::sine, 4, Parity::odd});
    tail.terms.push_back({-8.0 * he, TrigKind::cosine, 5, Parity::odd});

    // Windowed transform: the q part is sampled pointwise (closed form),
    // while int_{-X}^{X} e^{itx} h(x) dx exchanges integration order:
    //   (1/pi) int chi(s) sin((t-s)X)/(t-s) ds,
    // one short damped integral per t instead of thousands of h values.
    spec.window_factory = [params, wh](double X, double t_rate_max,
                                       const QuadratureConfig& cfg2) {
        auto grid = std::make_shared<PanelGrid>(
            -X, X, [t_rate_max](double) { return t_rate_max + 2.0; }, 1.2);
        auto qvals = std::make_shared<std::vector<double>>();
        qvals->reserve(grid->node_count());
        const double dd = params.delta();
        for (const double xi : grid->nodes()) qvals->push_back(q_density(xi) / (1.0 + dd));

        const double S = std::log(2.0 / cfg2.truncation_tail_mass) + 1.0;
        return [params, wh, X, grid, qvals, cfg2, S](double t) -> ForwardResult {
            const auto& xs = grid->nodes();
            std::vector<cplx> vals(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double ph = t * xs[i];
                vals[i] = (*qvals)[i] * cplx(std::cos(ph), std::sin(ph));
            }
            const auto qsum = grid->accumulate(vals);

            auto dirichlet = [&params, t, X](double s) {
                const double y = t - s;
                const double k =
                    std::fabs(y * X) > 1e-4 ? std::sin(y * X) / y : X * (1.0 - y * y * X * X / 6.0);
                return chi(params, s) * k;
            };
            auto rate = [&params, t, X](double s) {
                return X + std::fabs(t) + phase(params, s).dphi + 1.0;
            };
            const auto hwin = integrate_adaptive(dirichlet, -S, S, cfg2, rate);
            const cplx value = qsum.value + wh * hwin.value / M_PI;
            const double err = qsum.error_estimate +
                               wh * (hwin.error_estimate + std::exp(-S) / 5.0) / M_PI;
            return {value, err};
        };
    };

    const auto& asym = h_asymptotics(1);
    const double d_norm = asym.d_norm;
    tail.remainder_bound = [wq, wh, d_norm](double X) {
        const double series = series_remainder_bound(wq, X);
        // remainder of the h expansion past the explicit j=2 term:
        // |rem| <= d_norm/(pi x^7) plus the skipped j=5 boundary term and the
        // x^-6 order of the j=2 expansion
        const double hrem = wh * (d_norm / (3.0 * M_PI * std::pow(X, 6)) +
                                  40.0 * std::exp(-1.0) / (3.0 * M_PI * std::pow(X, 6)) +
                                  2.0 * 20.0 * std::exp(-1.0) / (M_PI * 5.0 * std::pow(X, 5)));
        return series + hrem;
    };
    spec.tail = std::move(tail);
    return spec;
}

} // namespace qid
