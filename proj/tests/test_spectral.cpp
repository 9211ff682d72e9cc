#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qid/errors.hpp"
#include "qid/spectral.hpp"
#include "qid/transforms.hpp"

#include <cmath>

using namespace qid;

TEST_CASE("epsilon remainder") {
    QuadratureConfig cfg;
    // exact antiderivative at x = 0
    for (double d : {0.03, 0.1}) {
        const double expect = 1.0 / d - 1.0 / (1.0 + d);
        CHECK(epsilon_remainder(d, 0.0, cfg) == doctest::Approx(expect).epsilon(1e-12));
    }
    // Riemann-Lebesgue decay at x = 1e3
    CHECK(std::fabs(epsilon_remainder(0.03, 1000.0, cfg)) < 0.1 / 0.03);
    // uniform bound
    for (double x = 0.0; x <= 2000.0; x += 97.3)
        CHECK(std::fabs(epsilon_remainder(0.03, x, cfg)) <= 1.0 / 0.03 - 1.0 / 1.03 + 1e-9);
}

TEST_CASE("spectral model epsilon paths agree") {
    QuadratureConfig cfg;
    SpectralModel m(0.03, cfg);
    for (double u : {0.0, 1.0, 17.0, 300.0, 1000.0, 20000.0})
        CHECK(m.epsilon(u) == doctest::Approx(epsilon_remainder(0.03, u, cfg)).epsilon(1e-9));
    // series path carries an honest bound (the table itself is good to
    // roughly 1e-12 absolute)
    for (double u : {800.0, 5000.0, 40000.0}) {
        double eb = 0.0;
        const double es = m.epsilon_series(u, &eb);
        CHECK(std::fabs(es - m.epsilon(u)) <= eb + 1e-11);
    }
}

TEST_CASE("gm closed form vs integral form") {
    QuadratureConfig cfg;
    CHECK_THROWS_AS(gm_closed(0.03, 0.1, cfg), DomainError);
    for (double x : {0.5, 1.0, 5.0, 20.0, 100.0}) {
        const double a = gm_closed(0.03, x, cfg);
        const double b = evaluate_gm_integral(0.03, x, cfg);
        CHECK(std::fabs(a - b) < 1e-8);
        CHECK(gm_closed(0.03, -x, cfg) == doctest::Approx(a).epsilon(1e-13));
    }
    // the cosine-driven negativity at large even multiples of pi
    const double u = 2.0 * M_PI * 10.0;
    CHECK(M_PI * u * u * gm_closed(0.03, u, cfg) + 1.0 < 0.0);
}

TEST_CASE("spectral densities") {
    QuadratureConfig cfg;
    CHECK(spectral_density_GC(0.0) == doctest::Approx(1.0 / M_PI));
    CHECK(spectral_density_GC(1.0) == doctest::Approx(1.0 / (2.0 * M_PI)));
    CHECK(spectral_density_GC(-1.0) == doctest::Approx(1.0 / (2.0 * M_PI)));
    // total Cauchy spectral mass is 1
    auto f = [](double u) { return cplx(spectral_density_GC(u), 0.0); };
    QuadratureConfig wide;
    const double mass = integrate_adaptive(f, -10000.0, 10000.0, wide).real();
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));

    const auto p = ModelParams::create(1, 0.03);
    CHECK(spectral_density_Gm(p, 0.0, cfg) == 0.0);
    CHECK(spectral_density_Gm(p, 1.0, cfg) ==
          doctest::Approx(evaluate_gm_integral(0.03, 1.0, cfg) / 2.0).epsilon(1e-9));

    SpectralModel m(0.03, cfg);
    CHECK(m.density_G1a(0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    for (double u = 0.0; u <= 80.0; u += 0.7)
        CHECK(m.density_G1a(u) ==
              doctest::Approx(m.density_Gm(u) + spectral_density_GC(u)).epsilon(1e-12));
    CHECK(m.density_G1a(2.0 * M_PI * 10.0) < 0.0);
}

TEST_CASE("lk reconstruction: degenerate, Cauchy, and the mixture identity") {
    QuadratureConfig cfg;

    SpectralPair empty;
    empty.density = [](double) { return 0.0; };
    CHECK(std::abs(lk_reconstruct(empty, 2.0, cfg) - cplx(1.0, 0.0)) < 1e-12);

    const auto cauchy = make_cauchy_pair();
    for (double t : {0.5, 1.0, 3.0})
        CHECK(std::abs(lk_reconstruct(cauchy, t, cfg) - cplx(std::exp(-t), 0.0)) < 1e-8);

    const auto p = ModelParams::create(1);
    SpectralModel m(p.delta(), cfg);
    LkTransform lk(make_g1a_pair(m), 5.0, cfg.lk_window, cfg);
    for (double t = -5.0; t <= 5.0; t += 0.25) {
        const auto r = lk.eval(t);
        CHECK(std::fabs(std::abs(r.value) - std::abs(f1_cf(p, t))) < 1e-6);
        CHECK(std::fabs(std::arg(r.value)) < 1e-8);
    }
}

TEST_CASE("monotonicity scan") {
    QuadratureConfig cfg;
    const auto scan_gc = monotonicity_scan([](double u) { return spectral_density_GC(u); },
                                           -10.0, 10.0, 0.1);
    CHECK(scan_gc.intervals.size() == 1);
    CHECK(scan_gc.intervals.front().sign == 1);
    CHECK(scan_gc.witnesses.empty());

    SpectralModel m(0.03, cfg);
    const auto scan = monotonicity_scan([&m](double u) { return m.density_G1a(u); }, 55.0,
                                        70.0, 0.05);
    REQUIRE(!scan.witnesses.empty());
    bool near = false;
    for (const auto& w : scan.witnesses) {
        CHECK(w.value < 0.0);
        // some negative interval must cover a point near 2 pi * 10
        for (const auto& iv : scan.intervals)
            if (iv.sign < 0 && iv.lo <= 2.0 * M_PI * 10.0 + 0.5 && iv.hi >= 2.0 * M_PI * 10.0 - 0.5)
                near = true;
    }
    CHECK(near);

    const auto none = monotonicity_scan([](double) { return 0.0; }, 0.0, 1.0, 0.1);
    CHECK(none.witnesses.empty());
}

TEST_CASE("hahn jordan split") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1, 0.03);
    const auto at0 = hahn_jordan(p, 0.0, cfg);
    CHECK(at0.first == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at0.second == 0.0);

    const auto neg = hahn_jordan(p, 2.0 * M_PI * 10.0, cfg);
    CHECK(neg.first == 0.0);
    CHECK(neg.second > 0.0);

    SpectralModel m(0.03, cfg);
    for (double u = 0.0; u <= 90.0; u += 0.31) {
        const auto [gp, gm_] = m.hahn_jordan_split(u);
        CHECK(gp >= 0.0);
        CHECK(gm_ >= 0.0);
        CHECK(gp * gm_ == 0.0);
        CHECK(gp - gm_ == doctest::Approx(m.signed_weight(u)).epsilon(1e-15));
    }
}

TEST_CASE("theorem 1 certificate passes for n=1 and n=2") {
    QuadratureConfig cfg;
    for (int n : {1, 2}) {
        const auto p = ModelParams::create(n);
        const auto cert = theorem1_certificate(p, cfg);
        REQUIRE(cert.checks.size() == 4);
        for (const auto& c : cert.checks) {
            INFO(c.name, " violation=", c.max_violation);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("tampered spectral density fails the representation check") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1);
    const auto cert = theorem1_certificate_tampered(p, cfg);
    CHECK_FALSE(cert.all_pass());
    bool repr_failed = false;
    for (const auto& c : cert.checks)
        if (c.name == "t1_representation" && !c.pass) repr_failed = true;
    CHECK(repr_failed);
}

TEST_CASE("theorem 2 certificate passes for n=1") {
    QuadratureConfig cfg;
    const auto p = ModelParams::create(1);
    const auto cert = theorem2_certificate(p, cfg);
    REQUIRE(cert.checks.size() == 3);
    for (const auto& c : cert.checks) {
        INFO(c.name, " violation=", c.max_violation);
        CHECK(c.pass);
    }
}

TEST_CASE("certificate JSON round trip") {
    Certificate cert;
    cert.n = 1;
    cert.delta = 0.25;
    cert.abs_tol = 1e-8;
    cert.seed = 42;
    cert.checks.push_back(make_check("alpha", 1e-6, 3.25e-9, 0.5));
    cert.checks.push_back(make_check("beta", 0.0, 1.0, std::array<double, 2>{2.0, -0.25}));
    const std::string s = cert.to_json();
    CHECK(s.find("\"alpha\"") != std::string::npos);
    CHECK(s.find("\"all_pass\": false") != std::string::npos);
    CHECK(s.find("\"delta\": 0.25") != std::string::npos);
    CHECK(s.find("\"witness\": [2, -0.25]") != std::string::npos);
    // stable under re-emission
    CHECK(cert.to_json() == s);
}
