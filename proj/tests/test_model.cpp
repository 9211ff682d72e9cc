#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qid/errors.hpp"
#include "qid/model.hpp"

#include <cmath>
#include <complex>

using namespace qid;

namespace {
const double kE = std::exp(1.0);

// independent oracle: Simpson quadrature of (1/pi) int_0^1 (1-t) e^{-t} cos(tx) dt
double q_oracle(double x) {
    const int n = 20000;
    const double h = 1.0 / n;
    double acc = 0.0;
    auto f = [x](double t) { return (1.0 - t) * std::exp(-t) * std::cos(t * x); };
    for (int i = 0; i < n; i += 2) acc += f(i * h) + 4.0 * f((i + 1) * h) + f((i + 2) * h);
    return acc * h / 3.0 / M_PI;
}
} // namespace

TEST_CASE("triangle") {
    CHECK(triangle(0.0) == 1.0);
    CHECK(triangle(0.5) == 0.5);
    CHECK(triangle(2.0) == 0.0);
    CHECK(triangle(-1.0) == 0.0);
    for (double t = -3.0; t <= 3.0; t += 0.1) {
        CHECK(triangle(t) == triangle(-t));
        CHECK(triangle(t) >= 0.0);
        CHECK(triangle(t) <= 1.0);
    }
}

TEST_CASE("lambda_cf") {
    CHECK(lambda_cf(0.0) == 1.0);
    CHECK(lambda_cf(1.0) == 0.0);
    CHECK(lambda_cf(0.5) == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-15));
    for (double t = 0.0; t <= 2.0; t += 0.05) CHECK(lambda_cf(t) == lambda_cf(-t));
}

TEST_CASE("phase values and symmetry") {
    const auto p1 = ModelParams::create(1);
    const auto p2 = ModelParams::create(2);

    auto ph = phase(p1, 0.7);
    CHECK(ph.phi == 0.0);
    CHECK(ph.dphi == 0.0);
    CHECK(ph.d2phi == 0.0);

    ph = phase(p1, 2.0);
    CHECK(ph.phi == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(ph.dphi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ph.d2phi == doctest::Approx(2.0).epsilon(1e-15));

    ph = phase(p2, -2.0);
    CHECK(ph.phi == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(ph.dphi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ph.d2phi == doctest::Approx(-4.0).epsilon(1e-15));

    // continuity at the kink and odd/even/odd symmetry
    for (const auto& p : {p1, p2}) {
        const auto lo = phase(p, 1.0 - 1e-9), hi = phase(p, 1.0 + 1e-9);
        CHECK(std::fabs(lo.phi - hi.phi) < 1e-12);
        CHECK(std::fabs(lo.dphi - hi.dphi) < 1e-12);
        CHECK(std::fabs(lo.d2phi - hi.d2phi) < 1e-8);
        for (double t = 0.1; t < 4.0; t += 0.3) {
            const auto a = phase(p, t), b = phase(p, -t);
            CHECK(a.phi == -b.phi);
            CHECK(a.dphi == b.dphi);
            CHECK(a.d2phi == -b.d2phi);
        }
    }
}

TEST_CASE("chi") {
    const auto p = ModelParams::create(1);
    CHECK(chi(p, 0.0) == cplx(1.0, 0.0));
    CHECK(chi(p, 1.0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(chi(p, 1.0).imag() == 0.0);
    const cplx c2 = chi(p, 2.0);
    CHECK(c2.real() == doctest::Approx(std::exp(-2.0) * std::cos(1.0 / 3.0)).epsilon(1e-14));
    CHECK(c2.imag() == doctest::Approx(std::exp(-2.0) * std::sin(1.0 / 3.0)).epsilon(1e-14));
    for (double t = -5.0; t <= 5.0; t += 0.25) {
        CHECK(std::abs(chi(p, t)) == doctest::Approx(std::exp(-std::fabs(t))).epsilon(1e-14));
        CHECK(std::abs(chi(p, -t) - std::conj(chi(p, t))) == 0.0);
    }
}

TEST_CASE("ell") {
    CHECK(ell(0.0) == doctest::Approx(kE - 1.0).epsilon(1e-15));
    CHECK(ell(M_PI) == doctest::Approx((kE + 1.0) * (1.0 - M_PI * M_PI)).epsilon(1e-14));
    CHECK(ell(M_PI) == ell(-M_PI));
    for (double x = -30.0; x <= 30.0; x += 0.37)
        CHECK(std::fabs(ell(x)) <= (kE + 2.0) * (1.0 + x * x) * (1.0 + 1e-15));
}

TEST_CASE("q_density against the quadrature oracle and bounds") {
    CHECK(q_density(0.0) == doctest::Approx(1.0 / (kE * M_PI)).epsilon(1e-14));
    CHECK(q_density(0.0) * kE * M_PI == doctest::Approx(1.0).epsilon(1e-13));
    for (double x : {0.0, 0.5, 3.0, 10.0, 25.0})
        CHECK(q_density(x) == doctest::Approx(q_oracle(x)).epsilon(1e-11));

    // eq (5) scaled form stays in [1, 2e+2] on a dense grid
    for (double x = -100.0; x <= 100.0; x += 0.05) {
        const double scaled = q_density(x) * kE * M_PI * (1.0 + x * x);
        CHECK(scaled >= 1.0 - 1e-12);
        CHECK(scaled <= 2.0 * kE + 2.0);
    }
}

TEST_CASE("p1_density") {
    const auto p = ModelParams::create(1, 0.03);
    CHECK(p1_density(p, 1.3, 0.0) == doctest::Approx(q_density(1.3) / 1.03).epsilon(1e-15));
    // proven lower bound keeps it positive for any admissible delta
    for (double x = -20.0; x <= 20.0; x += 0.5) {
        const double hb = (kE + 26.0) / (kE * M_PI * (1.0 + x * x));
        CHECK(p1_density(p, x, -hb) >= 0.0);
    }
    CHECK_THROWS_AS(p1_density(p, 0.0, -1e6), NegativeDensity);
}

TEST_CASE("f1_cf") {
    const auto p = ModelParams::create(1, 0.03);
    CHECK(f1_cf(p, 0.0) == cplx(1.0, 0.0));
    const cplx v1 = f1_cf(p, 1.0);
    CHECK(v1.real() == doctest::Approx(0.03 / 1.03 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(v1.imag() == 0.0);
    const cplx v2 = f1_cf(p, 2.0);
    CHECK(v2.real() ==
          doctest::Approx(0.03 / 1.03 * std::exp(-2.0) * std::cos(1.0 / 3.0)).epsilon(1e-14));
    CHECK(v2.imag() ==
          doctest::Approx(0.03 / 1.03 * std::exp(-2.0) * std::sin(1.0 / 3.0)).epsilon(1e-14));

    for (double t = -6.0; t <= 6.0; t += 0.05) {
        const cplx v = f1_cf(p, t);
        CHECK(std::abs(v) > 0.0);
        CHECK(std::abs(v) <= 1.0);
        // eq (10) modulus
        const double expect = (triangle(t) + 0.03) / 1.03 * std::exp(-std::fabs(t));
        CHECK(std::abs(v) == doctest::Approx(expect).epsilon(1e-14));
        // Hermitian symmetry, exact on the sampled grid
        CHECK(std::abs(f1_cf(p, -t) - std::conj(v)) == 0.0);
    }
}

TEST_CASE("ln_f1_closed") {
    const auto p = ModelParams::create(1, 0.03);
    CHECK(ln_f1_closed(p, 0.0) == cplx(0.0, 0.0));
    const cplx l2 = ln_f1_closed(p, 2.0);
    CHECK(l2.real() == doctest::Approx(std::log(0.03 / 1.03) - 2.0).epsilon(1e-14));
    CHECK(l2.imag() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    for (double t : {-3.0, -1.0, 0.5, 1.0, 3.0})
        CHECK(std::abs(std::exp(ln_f1_closed(p, t)) - f1_cf(p, t)) < 1e-14);
    for (double t = -50.0; t <= 50.0; t += 0.5) {
        CHECK(ln_f1_closed(p, t).real() <= 0.0);
        CHECK(std::abs(std::exp(ln_f1_closed(p, t)) - f1_cf(p, t)) < 1e-13);
    }
}

TEST_CASE("max_delta and params validation") {
    CHECK(max_delta(1) == doctest::Approx(1.0 / (kE + 26.0)).epsilon(1e-16));
    CHECK(max_delta(2) == doctest::Approx(1.0 / (kE + 24.0 + 40320.0)).epsilon(1e-16));
    CHECK_THROWS_AS(max_delta(5), UnsupportedN);
    CHECK_THROWS_AS(max_delta(0), UnsupportedN);

    CHECK_THROWS_AS(ModelParams::create(0), UnsupportedN);
    CHECK_THROWS_AS(ModelParams::create(5), UnsupportedN);
    CHECK_THROWS_AS(ModelParams::create(1, 0.9), DomainError);
    CHECK_THROWS_AS(ModelParams::create(1, -0.01), DomainError);
    CHECK(ModelParams::create(1).delta() == doctest::Approx(max_delta(1) / 2.0));
    CHECK(ModelParams::create(3).factorial_constant() == 720.0 + 479001600.0);
}

TEST_CASE("envelope constants") {
    const auto p = ModelParams::create(1, 0.03);
    const auto env = EnvelopeConstants::for_params(p);
    CHECK(env.q_upper == (2.0 * kE + 2.0) / kE);
    CHECK(env.h_upper == doctest::Approx((kE + 26.0) / kE).epsilon(1e-16));
    CHECK(env.p1_envelope ==
          doctest::Approx((env.q_upper + 0.03 * env.h_upper) / 1.03).epsilon(1e-16));
}
