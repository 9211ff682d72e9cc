#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qid/distinguished_log.hpp"
#include "qid/errors.hpp"

#include <cmath>

using namespace qid;

namespace {

FunctionGrid grid_from(const std::function<cplx(double)>& f, double t_max, double step) {
    FunctionGrid g;
    for (double t = -t_max; t <= t_max + 0.25 * step; t += step) {
        const double tc = std::min(t, t_max);
        g.ts.push_back(tc);
        g.values.push_back(f(tc));
    }
    return g;
}

} // namespace

TEST_CASE("unwrap of a positive real function is identically zero") {
    auto f = [](double t) { return cplx(std::exp(-std::fabs(t)), 0.0); };
    const auto lg = unwrap_phase(grid_from(f, 5.0, 0.1));
    for (double a : lg.arg) CHECK(a == 0.0);
}

TEST_CASE("unwrap follows a pure shift across the principal branch") {
    auto f = [](double t) { return cplx(std::cos(3.0 * t), std::sin(3.0 * t)); };
    const auto lg = unwrap_phase(grid_from(f, 5.0, 0.05));
    for (std::size_t i = 0; i < lg.ts.size(); ++i)
        CHECK(lg.arg[i] == doctest::Approx(3.0 * lg.ts[i]).epsilon(1e-12));
}

TEST_CASE("unwrap of f1 recovers the phase and log-modulus closed forms") {
    for (int n : {1, 2}) {
        const auto p = ModelParams::create(n);
        auto cf = [&p](double t) { return f1_cf(p, t); };
        auto rate = [&p](double t) { return phase(p, t).dphi + 1.0; };
        const auto grid = refine_grid(cf, 5.0, rate);
        const auto lg = unwrap_phase(grid);
        for (std::size_t i = 0; i < lg.ts.size(); ++i) {
            const double t = lg.ts[i];
            CHECK(std::fabs(lg.arg[i] - phase(p, t).phi) < 1e-6);
            const double ln_expect =
                std::log((triangle(t) + p.delta()) / (1.0 + p.delta())) - std::fabs(t);
            CHECK(std::fabs(lg.ln_abs[i] - ln_expect) < 1e-6);
        }
        // Hermitian input: odd argument, even log-modulus on the symmetric grid
        const std::size_t m = lg.ts.size();
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(lg.arg[i] == doctest::Approx(-lg.arg[m - 1 - i]).epsilon(1e-12));
            CHECK(lg.ln_abs[i] == doctest::Approx(lg.ln_abs[m - 1 - i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("round trip reproduces grid values") {
    const auto p = ModelParams::create(1);
    auto cf = [&p](double t) { return f1_cf(p, t); };
    auto rate = [&p](double t) { return phase(p, t).dphi + 1.0; };
    const auto grid = refine_grid(cf, 5.0, rate);
    const auto lg = unwrap_phase(grid);
    for (std::size_t i = 0; i < grid.ts.size(); ++i) {
        const cplx rebuilt = std::exp(cplx(lg.ln_abs[i], 0) ) *
                             cplx(std::cos(lg.arg[i]), std::sin(lg.arg[i]));
        CHECK(std::abs(rebuilt - grid.values[i]) < 1e-12);
    }
}

TEST_CASE("refinement stability: halving steps keeps branches") {
    const auto p = ModelParams::create(1);
    auto cf = [&p](double t) { return f1_cf(p, t); };
    auto rate1 = [&p](double t) { return phase(p, t).dphi + 1.0; };
    auto rate2 = [&p](double t) { return 2.0 * (phase(p, t).dphi + 1.0); };
    const auto lg1 = unwrap_phase(refine_grid(cf, 5.0, rate1));
    const auto lg2 = unwrap_phase(refine_grid(cf, 5.0, rate2));
    // compare at the shared forced nodes 0, +-1, +-5
    for (double t : {-5.0, -1.0, 0.0, 1.0, 5.0}) {
        auto at = [t](const LogCfGrid& lg) {
            for (std::size_t i = 0; i < lg.ts.size(); ++i)
                if (std::fabs(lg.ts[i] - t) < 1e-12) return lg.arg[i];
            FAIL("node not found");
            return 0.0;
        };
        CHECK(std::fabs(at(lg1) - at(lg2)) < 1e-9);
    }
}

TEST_CASE("grid construction rules") {
    auto cf = [](double t) { return cplx(std::exp(-std::fabs(t)), 0.0); };
    auto flat = [](double) { return 1.0; };
    const auto g = refine_grid(cf, 10.0, flat);
    bool has0 = false, has1 = false, hasm1 = false;
    for (std::size_t i = 1; i < g.ts.size(); ++i) {
        CHECK(g.ts[i] - g.ts[i - 1] <= M_PI / 2.0 + 1e-12);
        if (g.ts[i] == 0.0) has0 = true;
        if (g.ts[i] == 1.0) has1 = true;
        if (g.ts[i] == -1.0) hasm1 = true;
    }
    CHECK(has0);
    CHECK(has1);
    CHECK(hasm1);

    // the f1 rate rule near t_max = 5 for n=1: step <= pi/34
    const auto p = ModelParams::create(1);
    auto rate = [&p](double t) { return phase(p, t).dphi + 1.0; };
    const auto gf = refine_grid([&p](double t) { return f1_cf(p, t); }, 5.0, rate);
    double last_step = gf.ts.back() - gf.ts[gf.ts.size() - 2];
    CHECK(last_step <= M_PI / (2.0 * ((5.0 - 1.0) * (5.0 - 1.0) + 1.0)) + 1e-12);
}

TEST_CASE("unwrap error conditions") {
    FunctionGrid gz;
    gz.ts = {-1.0, 0.0, 1.0};
    gz.values = {cplx(1, 0), cplx(1, 0), cplx(0, 0)};
    CHECK_THROWS_AS(unwrap_phase(gz), ZeroCrossing);

    FunctionGrid gj;
    gj.ts = {-1.0, 0.0, 1.0};
    gj.values = {cplx(1, 0), cplx(1, 0), cplx(-1, 0)}; // jump of exactly pi
    CHECK_THROWS_AS(unwrap_phase(gj), UnresolvablePhaseJump);
}

TEST_CASE("growth ratio") {
    const auto p = ModelParams::create(1);
    CHECK(growth_ratio(p, 200.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(growth_ratio(p, 1.0), DomainError);

    const auto p03 = ModelParams::create(1, 0.03);
    const double expect =
        3.0 * std::abs(cplx(std::log(0.03 / 1.03) - 2.0, 1.0 / 3.0));
    CHECK(growth_ratio(p03, 2.0) == doctest::Approx(expect).epsilon(1e-14));

    // trend toward 1 from above/below is monotone far out
    CHECK(std::fabs(growth_ratio(p, 400.0) - 1.0) < std::fabs(growth_ratio(p, 100.0) - 1.0));
}

TEST_CASE("qid growth test verdicts") {
    const auto p = ModelParams::create(1);
    std::vector<double> probes;
    for (int k = 1; k <= 10; ++k) probes.push_back(10.0 * k);

    auto rate = [&p](double t) { return phase(p, t).dphi + 1.0; };
    const auto f1grid = refine_grid([&p](double t) { return f1_cf(p, t); }, 102.0, rate, probes);
    const auto v1 = qid_growth_test(unwrap_phase(f1grid), probes);
    CHECK_FALSE(v1.is_candidate_qid);
    CHECK(v1.witness_t == 100.0);

    auto flat = [](double) { return 1.0; };
    const auto cauchy =
        refine_grid([](double t) { return cplx(std::exp(-std::fabs(t)), 0.0); }, 102.0, flat,
                    probes);
    CHECK(qid_growth_test(unwrap_phase(cauchy), probes).is_candidate_qid);

    // |f1|^2 has a real distinguished logarithm of linear growth
    const auto sq = refine_grid(
        [&p](double t) {
            const double m = std::abs(f1_cf(p, t));
            return cplx(m * m, 0.0);
        },
        102.0, flat, probes);
    CHECK(qid_growth_test(unwrap_phase(sq), probes).is_candidate_qid);

    std::vector<double> few{10.0, 20.0, 30.0};
    CHECK_THROWS_AS(qid_growth_test(unwrap_phase(cauchy), few), DomainError);
}
