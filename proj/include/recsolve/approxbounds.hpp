#pragma once

// Leading-term detection and c * n^d * alpha^n sandwich bounds for linear
// constant-coefficient recurrences with non-negative coefficients. The
// remainder against the exact particular solution satisfies the homogeneous
// recurrence, and any rational lambda with charpoly(lambda) >= 0 dominates
// it: |r_n| <= H lambda^n with H = max |r_j| / lambda^j over the first
// `order` indices. That induction is the proof; the oracle only spot-checks.

#include "recsolve/error.hpp"
#include "recsolve/eval.hpp"
#include "recsolve/expoly.hpp"
#include "recsolve/linsolve.hpp"
#include "recsolve/recurrence.hpp"
#include "recsolve/roots.hpp"

#include <string>
#include <vector>

namespace recsolve {

struct BoundTerm {
    RatInterval c;  // coefficient (exact when lo == hi)
    Rat d;          // polynomial degree, >= 0
    Rat alpha;      // base, > 0

    Expr to_expr(const std::string& var, bool upper_end) const {
        std::vector<Expr> fs{make_const(upper_end ? c.hi : c.lo)};
        if (!d.is_zero()) fs.push_back(make_pow(make_symbol(var), make_const(d)));
        if (!alpha.is_one()) fs.push_back(make_pow(make_const(alpha), make_symbol(var)));
        return normalize(make_mul(std::move(fs)));
    }
};

struct SandwichBounds {
    ExpPoly f;          // exact particular solution of the full forcing
    BoundTerm g_minus;  // f - g_minus <= x
    BoundTerm g_plus;   // x <= f + g_plus
    Rat X;              // max of the initial conditions
    Rat lambda;         // the dominating rational base
    Expr lower, upper;  // rendered bound pair
};

namespace approx_detail {

struct Prepared {
    std::map<long, Rat> coeffs;
    Poly charpoly;
    ExpPoly forcing;
    ExpPoly particular;
};

inline Prepared prepare(const RecurrenceSpec& spec) {
    if (spec.multivariate() || spec.divisor || spec.prefix_sum_coeff || !spec.linear_ok)
        throw Error(Err::Unsupported, "expected a linear constant-coefficient recurrence");
    Prepared p;
    p.coeffs = rational_coeffs(spec);
    for (auto& [s, a] : p.coeffs) {
        if (a.sign() < 0)
            throw Error(Err::Unsupported, "negative coefficient on shift " + std::to_string(s));
    }
    p.charpoly = characteristic_poly(p.coeffs, spec.order());
    try {
        p.forcing = to_expoly(spec.forcing, spec.var());
    } catch (const Error&) {
        throw Error(Err::Unsupported, "forcing is outside the exponential-polynomial family");
    }
    for (long n = 1; n <= 50; ++n) {
        if (p.forcing.eval_at(n).sign() < 0)
            throw Error(Err::Unsupported, "forcing takes a negative value at n = " + std::to_string(n));
    }
    p.particular = particular_solution(p.coeffs, p.charpoly, p.forcing);
    return p;
}

// rational lambda with charpoly(lambda) >= 0 and lambda >= the positive
// dominant root; exact roots are used when available
inline Rat dominating_lambda(const Poly& charpoly, const Rat& width) {
    Rat best(0);
    bool exact = false;
    for (const Rat& r : rational_roots(charpoly)) {
        if (r.sign() > 0 && r > best) {
            best = r;
            exact = true;
        }
    }
    // strip rational roots; any remaining factor may hide a larger positive root
    Poly rest = charpoly;
    for (const Rat& r : rational_roots(charpoly)) {
        Poly lin;
        lin.set(1, Rat(1));
        lin.set(0, -r);
        rest = rest.divexact(lin);
    }
    if (rest.degree() >= 1) {
        try {
            RootInterval iv = isolate_positive_root(rest, width);
            if (iv.hi > best) {
                best = iv.hi;
                exact = iv.is_point();
            }
        } catch (const Error& e) {
            if (e.kind() != Err::NoSignChange) throw;
            // no positive root in the remaining factor
        }
    }
    if (best.sign() <= 0) throw Error(Err::NoPositiveRoot, "no positive characteristic root");
    // ensure sum a_i lambda^{-i} <= 1, i.e. charpoly(lambda) >= 0
    Rat lam = best;
    while (charpoly.eval(lam).sign() < 0) lam = lam * (Rat(1) + width);
    (void)exact;
    return lam;
}

}  // namespace approx_detail

// The asymptotically dominant c n^d alpha^n term of the solution: the larger
// of the particular solution's top term and the homogeneous growth rate.
inline BoundTerm leading_term(const RecurrenceSpec& spec, const Rat& root_width = Rat(1, 1000)) {
    approx_detail::Prepared p = approx_detail::prepare(spec);
    Rat lam = approx_detail::dominating_lambda(p.charpoly, root_width);

    // top term of the particular solution (largest base, then degree)
    const ExpTerm* top = nullptr;
    for (const auto& t : p.particular.terms) {
        if (!top || t.base > top->base) top = &t;
    }
    if (top) {
        Rat fb = top->base.as_rat();  // rational forcing implies rational bases
        bool forcing_dominates = fb >= lam || p.charpoly.eval(fb).is_zero();
        if (forcing_dominates) {
            Quad lead = top->poly.lc();
            Rat c = lead.is_rational() ? lead.as_rat() : Rat(0);
            return BoundTerm{{c, c}, Rat(top->poly.degree()), fb};
        }
    }
    // homogeneous rate dominates; the coefficient depends on the initial
    // conditions, so only the rate is pinned
    int mult = root_multiplicity(p.charpoly, Quad(lam));
    long d = mult > 0 ? mult - 1 : 0;
    return BoundTerm{{Rat(1), Rat(1)}, Rat(d), lam};
}

// f(n) - H lambda^n <= x_n <= f(n) + H lambda^n for all n, by induction on
// the homogeneous remainder.
inline SandwichBounds expoly_sandwich(const RecurrenceSpec& spec, const InitialConditions& ics,
                                      const Rat& root_width = Rat(1, 1000)) {
    approx_detail::Prepared p = approx_detail::prepare(spec);
    long order = spec.order();

    std::vector<std::pair<long, Rat>> icv;
    long base = 0;
    bool any = false;
    for (const auto& pt : ics.points) {
        if (pt.unknown != spec.unknown || pt.idx.size() != 1) continue;
        if (!any || pt.idx[0] < base) base = pt.idx[0];
        any = true;
    }
    for (long j = base; j < base + order; ++j) {
        const Expr* v = ics.find(spec.unknown, {j});
        if (!v) throw Error(Err::MissingInitialCondition, "need x(" + std::to_string(j) + ")");
        Rat rv;
        try {
            rv = eval_exact(*v);
        } catch (const Error&) {
            throw Error(Err::SymbolicBlocked, "initial conditions must be rational");
        }
        if (rv.sign() < 0)
            throw Error(Err::Unsupported, "initial conditions must be non-negative");
        icv.push_back({j, rv});
    }

    SandwichBounds sw;
    sw.f = p.particular;
    sw.lambda = approx_detail::dominating_lambda(p.charpoly, root_width);
    sw.X = Rat(0);
    std::vector<Rat> rems;
    for (auto& [j, xj] : icv) {
        if (xj > sw.X) sw.X = xj;
        Quad fj = p.particular.eval_at(j);
        if (!fj.is_rational()) throw Error(Err::Internal, "irrational particular value");
        rems.push_back(xj - fj.as_rat());
    }
    // remainder exactly c*lambda^n (lambda a true root, matching start values):
    // fold it into f and report zero slack
    if (p.charpoly.eval(sw.lambda).is_zero()) {
        Rat c = rems.front() / sw.lambda.pow_int(icv.front().first);
        bool exact_rem = true;
        for (std::size_t i = 0; i < icv.size(); ++i)
            exact_rem = exact_rem && rems[i] == c * sw.lambda.pow_int(icv[i].first);
        if (exact_rem) {
            sw.f.add_term(Quad(sw.lambda), PolyQ(Quad(c)));
            sw.f.canonicalize();
            rems.assign(rems.size(), Rat(0));
        }
    }
    Rat H(0);
    for (std::size_t i = 0; i < icv.size(); ++i) {
        Rat rj = rems[i].abs() / sw.lambda.pow_int(icv[i].first);
        if (rj > H) H = rj;
    }
    sw.g_minus = BoundTerm{{H, H}, Rat(0), sw.lambda};
    sw.g_plus = sw.g_minus;
    Expr fx = expoly_to_expr(sw.f);
    Expr slack = sw.g_plus.to_expr(spec.var(), true);
    sw.lower = normalize(make_add({fx, make_mul({make_const(-1), slack})}));
    sw.upper = normalize(make_add({fx, slack}));
    return sw;
}

// exact rational test of sum a_i lambda^{-i} <= 1
inline bool lambda_sound(const RecurrenceSpec& spec, const Rat& lambda) {
    Rat s(0);
    for (auto& [i, a] : rational_coeffs(spec)) s += a / lambda.pow_int(i);
    return s <= Rat(1);
}

}  // namespace recsolve
