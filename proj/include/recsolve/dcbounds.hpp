#pragma once

// Divide-and-conquer recurrences x_n = alpha x_{n/beta} + g(n): the exact
// level-sum closed form along the well-defined chain n = n0 * beta^k, and the
// bound pair built from it. Per-degree geometric level sums close in terms of
// n^(log alpha / log beta); the resonant degree (alpha = beta^d) contributes
// the n^d log n / log beta term.

#include "recsolve/error.hpp"
#include "recsolve/eval.hpp"
#include "recsolve/normalize.hpp"
#include "recsolve/recurrence.hpp"
#include "recsolve/summation.hpp"

#include <string>

namespace recsolve {

struct DCSpec {
    Rat alpha;      // > 0
    Rat beta;       // > 1
    Poly g;         // polynomial forcing, non-decreasing and >= 0 from n = 1
    Expr base_value;  // x at n0 (may be symbolic)
    long n0 = 1;    // positive integer < beta
    std::string var;
    std::string unknown;
};

inline DCSpec make_dcspec(const RecurrenceSpec& spec, const InitialConditions& ics) {
    if (!spec.divisor) throw Error(Err::IllFormed, "not a divide-and-conquer recurrence");
    DCSpec d;
    d.var = spec.var();
    d.unknown = spec.unknown;
    d.beta = spec.divisor->beta;
    try {
        d.alpha = eval_exact(spec.divisor->coeff);
    } catch (const Error&) {
        throw Error(Err::IllFormed, "divide-and-conquer coefficient must be a rational constant");
    }
    if (d.alpha.sign() <= 0) throw Error(Err::IllFormed, "alpha must be positive");
    if (!(d.beta > Rat(1))) throw Error(Err::IllFormed, "beta must exceed 1");
    auto gp = expr_to_poly(spec.forcing, d.var);
    if (!gp) throw Error(Err::IllFormed, "forcing must be a polynomial in " + d.var);
    d.g = *gp;
    for (auto& [deg, c] : d.g.coeffs()) {
        if (deg >= 1 && c.sign() < 0)
            throw Error(Err::IllFormed, "forcing must be non-decreasing (negative coefficient)");
    }
    if (d.g.eval(Rat(1)).sign() < 0)
        throw Error(Err::IllFormed, "forcing must be non-negative from n = 1");

    d.n0 = 1;
    bool have_ic = false;
    for (const auto& p : ics.points) {
        if (p.unknown != spec.unknown || p.idx.size() != 1) continue;
        if (have_ic) throw Error(Err::IllFormed, "one base value expected");
        d.n0 = p.idx[0];
        d.base_value = p.value;
        have_ic = true;
    }
    if (!have_ic) d.base_value = make_symbol(spec.unknown + "1");
    if (d.n0 < 1 || !(Rat(d.n0) < d.beta))
        throw Error(Err::IllFormed, "base index must satisfy 1 <= n0 < beta");
    return d;
}

// Exact closed form along n = n0 * beta^k:
//   x_n = A(n) x_{n0} + sum_d c_d * T_d(n),   A(n) = (n/n0)^(log alpha/log beta)
//   T_d = (A(n) n0^d - n^d) / (alpha/beta^d - 1)      when alpha != beta^d
//   T_d = n^d (log(n/n0)) / log(beta)                 when alpha == beta^d
inline Expr dc_exact_on_powers(const DCSpec& d) {
    Expr n = make_symbol(d.var);
    Expr n_over_n0 = d.n0 == 1 ? n : normalize(make_mul({make_const(Rat(1, d.n0)), n}));
    Expr ratio = normalize(make_mul({make_func("log", {make_const(d.alpha)}),
                                     make_pow(make_func("log", {make_const(d.beta)}),
                                              make_const(-1))}));
    Expr A = normalize(make_pow(n_over_n0, ratio));

    std::vector<Expr> terms{normalize(make_mul({A, d.base_value}))};
    for (auto& [deg, c] : d.g.coeffs()) {
        Rat q = d.alpha / d.beta.pow_int(deg);
        Expr nd = deg == 0 ? make_const(1) : make_pow(n, make_const(deg));
        if (q == Rat(1)) {
            Expr lg = normalize(make_mul({make_func("log", {n_over_n0}),
                                          make_pow(make_func("log", {make_const(d.beta)}),
                                                   make_const(-1))}));
            terms.push_back(make_mul({make_const(c), nd, lg}));
        } else {
            Expr level = make_add({make_mul({make_const(Rat(d.n0).pow_int(deg)), A}),
                                   make_mul({make_const(-1), nd})});
            terms.push_back(make_mul({make_const(c / (q - Rat(1))), level}));
        }
    }
    return normalize(make_add(std::move(terms)));
}

// Bound pair for every well-defined n. The well-defined domain is exactly the
// chain n0 * beta^k, where the level sum is exact, so the pair needs no
// slack; callers may still verify foreign bound pairs via check_bounds_numeric.
inline Solution dc_bounds(const DCSpec& d) {
    Expr exact = dc_exact_on_powers(d);
    std::string dom = d.var + " = " + std::to_string(d.n0) + "*" + d.beta.to_string() + "^k, k >= 0" +
                      " (each n for which the recurrence is well-defined)";
    Solution s = Solution::bounds(exact, exact, dom);
    s.assumptions.push_back("forcing non-negative and non-decreasing on n >= 1");
    return s;
}

}  // namespace recsolve
