#include "qid/distinguished_log.hpp"

#include "qid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qid {

void FunctionGrid::validate(bool expect_cf) const {
    if (ts.size() != values.size() || ts.size() < 2)
        throw DomainError("FunctionGrid: inconsistent or trivial grid");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1])) throw DomainError("FunctionGrid: ts must strictly increase");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == cplx(0.0, 0.0))
            throw ZeroCrossing("FunctionGrid: zero value at t=" + std::to_string(ts[i]));
    const std::size_t i0 = index_of_zero();
    if (std::fabs(ts[i0]) > 1e-12) throw DomainError("FunctionGrid: grid must contain t=0");
    if (expect_cf && std::abs(values[i0] - cplx(1.0, 0.0)) > 1e-8)
        throw DomainError("FunctionGrid: value at 0 must be 1 for a characteristic function");
}

std::size_t FunctionGrid::index_of_zero() const {
    const auto it = std::min_element(ts.begin(), ts.end(),
                                     [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    return static_cast<std::size_t>(it - ts.begin());
}

LogCfGrid unwrap_phase(const FunctionGrid& grid) {
    grid.validate(false);
    const std::size_t n = grid.ts.size();
    const std::size_t i0 = grid.index_of_zero();

    LogCfGrid out;
    out.ts = grid.ts;
    out.ln_abs.resize(n);
    out.arg.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.ln_abs[i] = std::log(std::abs(grid.values[i]));

    auto step = [&grid](std::size_t from, std::size_t to) {
        const cplx ratio = grid.values[to] / grid.values[from];
        const double jump = std::arg(ratio);
        if (std::fabs(jump) >= M_PI * (1.0 - 1e-12))
            throw UnresolvablePhaseJump("unwrap_phase: adjacent phase jump ~pi near t=" +
                                        std::to_string(grid.ts[to]));
        return jump;
    };

    // anchor at t=0: arg = principal argument there (0 for cf grids)
    out.arg[i0] = std::arg(grid.values[i0]);
    for (std::size_t i = i0; i + 1 < n; ++i) out.arg[i + 1] = out.arg[i] + step(i, i + 1);
    for (std::size_t i = i0; i-- > 0;) out.arg[i] = out.arg[i + 1] - step(i, i + 1);
    return out;
}

FunctionGrid refine_grid(const std::function<cplx(double)>& cf, double t_max,
                         const std::function<double(double)>& phase_rate_bound,
                         const std::vector<double>& extra_nodes) {
    if (!(t_max > 0.0)) throw DomainError("refine_grid: t_max must be positive");
    std::set<double> forced{0.0};
    if (t_max >= 1.0) forced.insert(1.0);
    for (double e : extra_nodes)
        if (e > 0.0 && e <= t_max) forced.insert(e);
    forced.insert(t_max);

    // positive half, then mirror
    std::vector<double> pos{0.0};
    double t = 0.0;
    auto next_forced = [&forced](double v) { return *forced.upper_bound(v); };
    while (t < t_max) {
        const double rate = std::max({1e-9, phase_rate_bound(t),
                                      phase_rate_bound(std::min(t_max, t + 0.5))});
        double step = std::min(0.5, M_PI / (2.0 * rate));
        double tn = t + step;
        const double nf = next_forced(t);
        if (tn > nf) tn = nf;
        pos.push_back(std::min(tn, t_max));
        t = pos.back();
    }

    FunctionGrid grid;
    grid.ts.reserve(2 * pos.size() - 1);
    for (std::size_t i = pos.size(); i-- > 1;) grid.ts.push_back(-pos[i]);
    for (double v : pos) grid.ts.push_back(v);
    grid.values.reserve(grid.ts.size());
    for (double ti : grid.ts) grid.values.push_back(cf(ti));
    return grid;
}

double growth_ratio(const ModelParams& p, double t) {
    if (!(t > 1.0)) throw DomainError("growth_ratio: requires t > 1");
    const double denom = std::pow(t - 1.0, 2 * p.n() + 1);
    return std::abs(ln_f1_closed(p, t)) * (2 * p.n() + 1) / denom;
}

GrowthVerdict qid_growth_test(const LogCfGrid& log_grid, const std::vector<double>& probes) {
    if (probes.size() < 10)
        throw DomainError("qid_growth_test: need at least 10 probes");
    for (std::size_t i = 1; i < probes.size(); ++i)
        if (!(probes[i] > probes[i - 1]))
            throw DomainError("qid_growth_test: probes must be increasing");
    if (probes.front() < log_grid.ts.front() || probes.back() > log_grid.ts.back())
        throw DomainError("qid_growth_test: probes outside grid range");

    std::vector<double> ratios;
    ratios.reserve(probes.size());
    for (double tp : probes) {
        const auto it = std::min_element(log_grid.ts.begin(), log_grid.ts.end(),
                                         [tp](double a, double b) {
                                             return std::fabs(a - tp) < std::fabs(b - tp);
                                         });
        const std::size_t i = static_cast<std::size_t>(it - log_grid.ts.begin());
        const double mag = std::hypot(log_grid.ln_abs[i], log_grid.arg[i]);
        ratios.push_back(mag / (tp * tp));
    }

    const std::size_t half = probes.size() / 2;
    const double low = *std::max_element(ratios.begin(), ratios.begin() + half);
    const double high = *std::max_element(ratios.begin() + half, ratios.end());

    GrowthVerdict v;
    const auto imax = std::max_element(ratios.begin(), ratios.end());
    v.max_ratio = *imax;
    v.witness_t = probes[static_cast<std::size_t>(imax - ratios.begin())];
    v.is_candidate_qid = !(high >= 2.0 * low);
    return v;
}

} // namespace qid
