#pragma once

#include "qid/model.hpp"

#include <vector>

namespace qid {

/// E_p(a, X) = int_X^inf e^{i a u} u^{-p} du, exact via Si/Ci and the
/// downward by-parts recursion. Requires p >= 2 when a == 0.
cplx osc_power_tail(double a, int p, double X);

/// Re / Im conveniences: C_p = int_X^inf cos(au) u^{-p} du (even in a),
/// S_p = int_X^inf sin(au) u^{-p} du (odd in a).
double cos_power_tail(double a, int p, double X);
double sin_power_tail(double a, int p, double X);

enum class TrigKind { one, cosine, sine };
enum class Parity { even, odd };

/// One asymptotic tail term of a real function g on |x| > X:
/// g(x) = coef * trig(x) / x^power for x > X, extended by the stated parity.
struct TailTerm {
    double coef;
    TrigKind trig;
    int power;
    Parity parity;
};

/// int_{|x|>X} e^{itx} g(x) dx for g given by tail terms. Even terms
/// contribute 2 int_X cos(tx) g, odd terms 2i int_X sin(tx) g.
cplx forward_transform_tail(const std::vector<TailTerm>& terms, double t, double X);

/// int_{|u|>X} (e^{itu} - 1 - it sin u) g(u) du for an EVEN g given by tail
/// terms; the odd kernel parts cancel, so the result is real:
/// 2 int_X^inf (cos(tu) - 1) g(u) du.
double lk_transform_tail(const std::vector<TailTerm>& terms, double t, double X);

} // namespace qid
