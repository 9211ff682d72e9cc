#include "qid/oscillatory_tail.hpp"

#include "qid/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_expint.h>

#include <cmath>

namespace qid {

namespace {

const int kGslQuiet = [] {
    gsl_set_error_handler_off();
    return 0;
}();

} // namespace

cplx osc_power_tail(double a, int p, double X) {
    (void)kGslQuiet;
    if (!(X > 0.0)) throw DomainError("osc_power_tail: X must be positive");
    if (p < 1 || (p == 1 && a == 0.0))
        throw DomainError("osc_power_tail: divergent combination (p,a)");
    if (a < 0.0) return std::conj(osc_power_tail(-a, p, X));
    if (a == 0.0) return {std::pow(X, 1 - p) / (p - 1), 0.0};

    // E_1 = -Ci(aX) + i (pi/2 - Si(aX)); then
    // E_p = e^{iaX} X^{1-p}/(p-1) + (ia/(p-1)) E_{p-1}.
    const double y = a * X;
    cplx e = {-gsl_sf_Ci(y), M_PI_2 - gsl_sf_Si(y)};
    for (int k = 2; k <= p; ++k) {
        const double xp = std::pow(X, 1 - k);
        const cplx boundary = cplx(std::cos(y), std::sin(y)) * (xp / (k - 1));
        e = boundary + cplx(0.0, a / (k - 1)) * e;
    }
    return e;
}

double cos_power_tail(double a, int p, double X) {
    return osc_power_tail(std::fabs(a), p, X).real();
}

double sin_power_tail(double a, int p, double X) {
    if (a == 0.0) return 0.0;
    const double s = a > 0.0 ? 1.0 : -1.0;
    return s * osc_power_tail(std::fabs(a), p, X).imag();
}

cplx forward_transform_tail(const std::vector<TailTerm>& terms, double t, double X) {
    cplx total{0.0, 0.0};
    for (const auto& tm : terms) {
        double val = 0.0; // one-sided integral against cos(tx) or sin(tx)
        if (tm.parity == Parity::even) {
            // 2 int_X cos(tx) * trig(x) / x^p
            switch (tm.trig) {
                case TrigKind::one:
                    val = cos_power_tail(t, tm.power, X);
                    break;
                case TrigKind::cosine:
                    val = 0.5 * (cos_power_tail(t + 1.0, tm.power, X) +
                                 cos_power_tail(t - 1.0, tm.power, X));
                    break;
                case TrigKind::sine:
                    val = 0.5 * (sin_power_tail(1.0 + t, tm.power, X) +
                                 sin_power_tail(1.0 - t, tm.power, X));
                    break;
            }
            total += cplx(2.0 * tm.coef * val, 0.0);
        } else {
            // 2i int_X sin(tx) * trig(x) / x^p
            switch (tm.trig) {
                case TrigKind::one:
                    val = sin_power_tail(t, tm.power, X);
                    break;
                case TrigKind::cosine:
                    val = 0.5 * (sin_power_tail(t + 1.0, tm.power, X) +
                                 sin_power_tail(t - 1.0, tm.power, X));
                    break;
                case TrigKind::sine:
                    val = 0.5 * (cos_power_tail(t - 1.0, tm.power, X) -
                                 cos_power_tail(t + 1.0, tm.power, X));
                    break;
            }
            total += cplx(0.0, 2.0 * tm.coef * val);
        }
    }
    return total;
}

double lk_transform_tail(const std::vector<TailTerm>& terms, double t, double X) {
    double total = 0.0;
    for (const auto& tm : terms) {
        if (tm.parity != Parity::even)
            throw DomainError("lk_transform_tail: spectral tail terms must be even");
        double val = 0.0; // int_X (cos(tu)-1) * trig(u) / u^p
        switch (tm.trig) {
            case TrigKind::one:
                val = cos_power_tail(t, tm.power, X) - cos_power_tail(0.0, tm.power, X);
                break;
            case TrigKind::cosine:
                val = 0.5 * (cos_power_tail(t + 1.0, tm.power, X) +
                             cos_power_tail(t - 1.0, tm.power, X)) -
                      cos_power_tail(1.0, tm.power, X);
                break;
            case TrigKind::sine:
                val = 0.5 * (sin_power_tail(1.0 + t, tm.power, X) +
                             sin_power_tail(1.0 - t, tm.power, X)) -
                      sin_power_tail(1.0, tm.power, X);
                break;
        }
        total += 2.0 * tm.coef * val;
    }
    return total;
}

} // namespace qid
