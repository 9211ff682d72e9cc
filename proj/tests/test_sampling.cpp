#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qid/errors.hpp"
#include "qid/sampling.hpp"

#include <cmath>

using namespace qid;

TEST_CASE("determinism and batch invariants") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1);
    const auto a = sample_p1(p, 2000, 7, cfg);
    const auto b = sample_p1(p, 2000, 7, cfg);
    CHECK(a.values == b.values);
    CHECK(a.proposals_used == b.proposals_used);
    CHECK(a.acceptance_rate ==
          double(a.values.size()) / double(a.proposals_used));
    CHECK(a.acceptance_rate > 0.0);
    CHECK(a.acceptance_rate <= 1.0);

    const auto c = sample_p1(p, 2000, 8, cfg);
    CHECK(a.values != c.values);

    const auto one = sample_p1(p, 1, 42, cfg);
    CHECK(one.values.size() == 1);
    CHECK(one.proposals_used >= 1);

    CHECK_THROWS_AS(sample_p1(p, 0, 42, cfg), DomainError);
}

TEST_CASE("acceptance rate matches the envelope-mass oracle") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1);
    const auto batch = sample_p1(p, 100000, 42, cfg);
    CHECK(std::fabs(batch.acceptance_rate - expected_acceptance_rate(p)) < 0.02);

    const auto p03 = ModelParams::create(1, 0.03);
    CHECK(expected_acceptance_rate(p03) == doctest::Approx(0.3374).epsilon(2e-4));
}

TEST_CASE("empirical cf basics") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1);
    const auto batch = sample_p1(p, 5000, 11, cfg);
    CHECK(empirical_cf(batch, 0.0) == cplx(1.0, 0.0));
    for (double t : {0.4, 1.3}) {
        CHECK(std::abs(empirical_cf(batch, t)) <= 1.0 + 1e-12);
        CHECK(std::abs(empirical_cf(batch, -t) - std::conj(empirical_cf(batch, t))) < 1e-15);
    }
    SampleBatch empty;
    CHECK_THROWS_AS(empirical_cf(empty, 1.0), DomainError);
}

TEST_CASE("cf distance report accepts the true model and rejects a wrong one") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1, 0.03);
    const auto batch = sample_p1(p, 100000, 42, cfg);

    auto good = [&p](double t) { return f1_cf(p, t); };
    const auto rep = cf_distance_report(batch, good, {0.5, 1.0, 2.0});
    CHECK(rep.pass);
    CHECK(rep.radius == doctest::Approx(4.0 / std::sqrt(100000.0)));

    // Cauchy cf differs from f1 at t=0.5 by ~0.29; far outside the radius
    auto wrong = [](double t) { return cplx(std::exp(-std::fabs(t)), 0.0); };
    const auto bad = cf_distance_report(batch, wrong, {0.5});
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_diff > 0.2);

    CHECK_THROWS_AS(cf_distance_report(batch, good, {}), DomainError);

    // the worked example: delta = 0.03, seed 42 gives acceptance near 0.337
    CHECK(std::fabs(batch.acceptance_rate - 0.3374) < 0.02);
}

TEST_CASE("sampler runs for n=2") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(2);
    const auto batch = sample_p1(p, 2000, 5, cfg);
    CHECK(batch.values.size() == 2000);
    CHECK(std::fabs(batch.acceptance_rate - expected_acceptance_rate(p)) < 0.05);
}

TEST_CASE("csv export is deterministic and carries the header") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1);
    const auto batch = sample_p1(p, 50, 42, cfg);
    const std::string csv = batch_to_csv(batch, p);
    CHECK(csv.find("# n=1") == 0);
    CHECK(csv.find("seed=42") != std::string::npos);
    CHECK(csv == batch_to_csv(batch, p));
    // one line per value plus two header lines
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 52);
}

TEST_CASE("envelope is never violated across a long run") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1, max_delta(1)); // extreme admissible delta
    CHECK_NOTHROW(sample_p1(p, 20000, 123, cfg));
}
