#pragma once

#include "qid/model.hpp"

#include <functional>
#include <vector>

namespace qid {

/// Sampled complex-valued function on a strictly increasing grid.
struct FunctionGrid {
    std::vector<double> ts;
    std::vector<cplx> values;

    /// Checks strict monotonicity, presence of 0, and nonvanishing values;
    /// when expect_cf is set also |value(0) - 1| <= 1e-8.
    void validate(bool expect_cf = true) const;

    std::size_t index_of_zero() const;
};

/// Distinguished-logarithm samples: ln|f| and the continuously unwrapped
/// argument with Arg(0) = 0.
struct LogCfGrid {
    std::vector<double> ts;
    std::vector<double> ln_abs;
    std::vector<double> arg;
};

/// Continuous phase unwrap along the grid:
/// arg(t_{k+1}) = arg(t_k) + principal_angle(v_{k+1}/v_k), anchored at the
/// node t = 0. Throws ZeroCrossing on a vanishing node and
/// UnresolvablePhaseJump when an adjacent principal angle reaches pi.
LogCfGrid unwrap_phase(const FunctionGrid& grid);

/// Symmetric grid construction for a characteristic function handle.
/// Steps obey step <= pi / (2 * phase_rate_bound); the grid contains 0 and
/// +-1 plus any requested extra nodes.
FunctionGrid refine_grid(const std::function<cplx(double)>& cf, double t_max,
                         const std::function<double(double)>& phase_rate_bound,
                         const std::vector<double>& extra_nodes = {});

/// (2n+1) |Ln f1(t)| / (t-1)^{2n+1}; tends to 1 as t grows. t > 1 required.
double growth_ratio(const ModelParams& p, double t);

struct GrowthVerdict {
    bool is_candidate_qid;
    double max_ratio;
    double witness_t;
};

/// One-sided growth obstruction test on |Ln f(t)|/t^2 at the probe points:
/// reports non-membership evidence when the top-half probes exceed the
/// bottom-half probes by a factor >= 2. Never certifies membership.
GrowthVerdict qid_growth_test(const LogCfGrid& log_grid, const std::vector<double>& probes);

} // namespace qid
