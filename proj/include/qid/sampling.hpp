#pragma once

#include "qid/model.hpp"
#include "qid/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qid {

struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t proposals_used = 0;
    double acceptance_rate = 0.0;
};

/// Rejection sampler for p1 with the proven Cauchy-type envelope
/// c/(pi(1+x^2)), c = (q_upper + delta*h_upper)/(1+delta). Proposals come
/// from the standard Cauchy law via the inverse CDF applied to a fixed
/// 64-bit Mersenne Twister stream (top 53 bits), so batches are
/// reproducible bit for bit across platforms.
SampleBatch sample_p1(const ModelParams& p, std::size_t count, std::uint64_t seed,
                      const QuadratureConfig& cfg);

/// Expected acceptance rate 1/c of the sampler derived from the envelope
/// mass.
double expected_acceptance_rate(const ModelParams& p);

/// Sample mean of e^{itx}; exactly 1 at t = 0.
cplx empirical_cf(const SampleBatch& batch, double t);

struct CfProbeResult {
    double t;
    double abs_diff;
};

struct CfDistanceReport {
    std::vector<CfProbeResult> probes;
    double max_diff = 0.0;
    double radius = 0.0; // 4/sqrt(N)
    bool pass = false;
};

CfDistanceReport cf_distance_report(const SampleBatch& batch,
                                    const std::function<cplx(double)>& cf,
                                    const std::vector<double>& probes);

/// CSV export: one value per line, header row carrying params and seed.
std::string batch_to_csv(const SampleBatch& batch, const ModelParams& p);

} // namespace qid
