#pragma once

// First-order linear recurrences with variable coefficients,
// x_n = a(n) x_{n-1} + b(n): closed form through the product of the
// coefficients, with the correction sum closed by exponential-polynomial
// summation or Gosper's algorithm where possible, and kept as an explicit
// (still exactly evaluable) sum otherwise.

#include "recsolve/error.hpp"
#include "recsolve/recurrence.hpp"
#include "recsolve/summation.hpp"

#include <optional>
#include <string>

namespace recsolve {

namespace varsolve_detail {

// zeros of the coefficient on integers > k0 make the sequence decouple
inline void check_no_zeros(const Expr& a, const std::string& var, long k0) {
    auto rp = expr_to_ratpoly(a, var);
    if (!rp) return;  // non-rational coefficient: zero check happens at eval time
    auto scan = [&](const Poly& p, bool denominator) {
        if (p.degree() <= 0) return;
        for (const Rat& r : rational_roots(p)) {
            if (!r.is_integer() || !r.fits_long()) continue;
            long ri = r.to_long();
            if (ri > k0)
                throw Error(Err::CoefficientVanishes,
                            std::string(denominator ? "coefficient undefined" : "coefficient zero") +
                                " at index " + std::to_string(ri));
        }
    };
    scan(rp->num, false);
    scan(rp->den, true);
}

}  // namespace varsolve_detail

// Closed form for x_n = a(n) x_{n-1} + b(n) with the initial value at index
// k0: x_n = P(n) * [ x_{k0} + sum_{j=k0+1}^{n} b(j)/P(j) ], P(n) the product
// of a over (k0, n]. Returns the expression and the validity start index.
inline std::pair<Expr, long> solve_first_order_var(const RecurrenceSpec& spec, const Expr& x0,
                                                   long k0) {
    if (spec.order() != 1 || spec.shift_terms.size() != 1 || spec.divisor ||
        spec.prefix_sum_coeff || !spec.linear_ok)
        throw Error(Err::NotFirstOrder, "expected a first-order recurrence in one shift");
    const std::string& var = spec.var();
    Expr a = spec.shift_terms.at(1);
    Expr b = spec.forcing;
    varsolve_detail::check_no_zeros(a, var, k0);

    // P(n) = prod_{k=k0+1}^{n} a(k)
    std::string kvar = var == "k" ? "k_" : "k";
    Expr a_k = substitute(a, var, make_symbol(kvar));
    Expr P;
    bool closed_product = true;
    try {
        P = product_closed(a_k, kvar, k0 + 1, var);
    } catch (const Error& e) {
        if (e.kind() != Err::NotFactorable) throw;
        closed_product = false;
        P = make_func("prod", {a_k, make_symbol(kvar),
                               make_const(k0 + 1), make_symbol(var)});
    }

    std::vector<Expr> parts{normalize(make_mul({P, x0}))};
    if (!b.is_zero()) {
        std::string jvar = var == "j" ? "j_" : "j";
        Expr closed_sum;
        bool have_closed = false;
        // correction term t(j) = b(j) / P(j)
        Expr Pj = substitute(P, var, make_symbol(jvar));
        Expr t = normalize(make_mul({substitute(b, var, make_symbol(jvar)),
                                     make_pow(Pj, make_const(-1))}));
        // exp-poly route (covers constant coefficients) then Gosper
        try {
            ExpPoly tx = to_expoly(t, jvar, /*allow_signed=*/true);
            ExpPoly closed = sum_expoly(tx, k0 + 1, var);
            closed_sum = expoly_to_expr(closed);
            have_closed = true;
        } catch (const Error&) {
        }
        if (!have_closed && closed_product) {
            try {
                GosperResult gr = gosper(t, jvar);
                if (gr.summable) {
                    Expr Sn = substitute(gr.antidifference, jvar, make_symbol(var));
                    Expr Sk0 = substitute(gr.antidifference, jvar, make_const(k0));
                    closed_sum = normalize(make_add({Sn, make_mul({make_const(-1), Sk0})}));
                    have_closed = true;
                }
            } catch (const Error&) {
            }
        }
        if (have_closed) {
            parts.push_back(normalize(make_mul({P, closed_sum})));
        } else {
            // explicit correction sum; still exactly evaluable
            Expr body = normalize(make_mul({substitute(b, var, make_symbol(jvar)),
                                            P, make_pow(Pj, make_const(-1))}));
            parts.push_back(make_func("sum", {body, make_symbol(jvar),
                                              make_const(k0 + 1), make_symbol(var)}));
        }
    }
    return {normalize(make_add(std::move(parts))), k0};
}

}  // namespace recsolve
