#pragma once

// Rewriting passes that map hard classes onto solvable ones: logarithmic
// range transformation of power-product recurrences, reduction of prefix-sum
// (infinite order) recurrences to first order, and conversion of multivariate
// recurrences with an invariant index combination to univariate form. Each
// carries the data needed to express the transformed solution in the original
// terms.

#include "recsolve/error.hpp"
#include "recsolve/eval.hpp"
#include "recsolve/normalize.hpp"
#include "recsolve/recurrence.hpp"
#include "recsolve/summation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace recsolve {

struct TransformResult {
    enum class Kind { LogRange, PrefixSum, Multivariate } kind;
    RecurrenceSpec transformed;
    std::string inverse_desc;
    std::vector<std::string> assumptions;

    // PrefixSum: seed values for the reduced first-order recurrence
    std::vector<std::pair<long, Expr>> seeds;
    long valid_from = 0;

    // Multivariate: chain data for the inverse substitution
    std::string t_var;
    std::size_t chain_pos = 0;       // index position that counts down
    long chain_step = 1;             // its decrease per application
    long boundary = 0;               // pattern boundary value
    std::vector<std::string> start_symbols;  // fresh symbol per drifting index ("" for chain pos)
    std::vector<long> drift;         // per-index shift of the single occurrence
};

// ---- non-linear: power products --------------------------------------------

// x_n = c * prod_i x_{n-i}^{p_i}  -->  y_n = sum_i p_i y_{n-i} + log c
inline TransformResult linearize_nonlinear(const RecurrenceSpec& spec) {
    if (spec.multivariate() || spec.divisor || spec.prefix_sum_coeff)
        throw Error(Err::NotPowerProduct, "not a univariate shift recurrence");
    Expr rhs = spec.raw_rhs;
    if (rhs.kind() == Kind::Add)
        throw Error(Err::NotPowerProduct, "additive terms block the range transform");
    detail::TermParts tp = detail::split_term(rhs);
    if (tp.coeff.sign() <= 0)
        throw Error(Err::NonPositiveConstant, "constant factor must be positive");
    const std::string& var = spec.var();
    std::map<long, long> powers;
    for (const auto& f : tp.factors) {
        Expr base = f;
        long p = 1;
        if (f.kind() == Kind::Pow) {
            if (!f.kids()[1].is_integer_const() || !f.kids()[1].value().fits_long())
                throw Error(Err::NotPowerProduct, "non-integer exponent on the unknown");
            base = f.kids()[0];
            p = f.kids()[1].value().to_long();
        }
        if (base.kind() != Kind::Unknown || base.name() != spec.unknown || base.kids().size() != 1)
            throw Error(Err::NotPowerProduct, "factor is not a power of the unknown");
        Expr delta = normalize(make_add(
            {make_symbol(var), make_mul({make_const(-1), base.kids()[0]})}));
        if (!delta.is_integer_const() || delta.value().sign() <= 0 || !delta.value().fits_long())
            throw Error(Err::NotPowerProduct, "bad shift in power product");
        powers[delta.value().to_long()] += p;
    }
    if (powers.empty()) throw Error(Err::NotPowerProduct, "unknown does not occur");

    TransformResult tr;
    tr.kind = TransformResult::Kind::LogRange;
    RecurrenceSpec y;
    y.unknown = "y";
    y.index_vars = {var};
    for (const auto& [s, p] : powers) {
        if (p != 0) y.shift_terms[s] = make_const(p);
    }
    y.forcing = normalize(make_func("log", {make_const(tp.coeff)}));
    y.linear_ok = true;
    y.raw_rhs = spec_rhs(y);
    tr.transformed = std::move(y);
    tr.inverse_desc = spec.unknown + "(" + var + ") = exp(y(" + var + "))";
    long order = tr.transformed.order();
    for (long i = 0; i < order; ++i)
        tr.assumptions.push_back(spec.unknown + "(" + std::to_string(i) + ") > 0");
    return tr;
}

// Rewrites a solved y-expression (every term carrying exactly one log factor)
// back through exp: sum_j X_j log(s_j) --> prod_j s_j^(X_j).
inline Expr apply_log_inverse(const Expr& y_solution) {
    Expr y = normalize(y_solution);
    if (y.is_zero()) return make_const(1);
    std::vector<Expr> factors;
    for (const auto& term : detail::add_terms(y)) {
        detail::TermParts tp = detail::split_term(term);
        Expr logf;
        int nlogs = 0;
        std::vector<Expr> rest{make_const(tp.coeff)};
        for (const auto& f : tp.factors) {
            if (f.kind() == Kind::Func && f.name() == "log" && f.kids().size() == 1) {
                ++nlogs;
                logf = f;
            } else {
                if (detail::contains_log(f))
                    throw Error(Err::NotPowerProduct, "log-in-log solution cannot be exponentiated");
                rest.push_back(f);
            }
        }
        if (nlogs != 1)
            throw Error(Err::NotPowerProduct, "solution term is not log-linear");
        factors.push_back(make_pow(logf.kids()[0], normalize(make_mul(std::move(rest)))));
    }
    return normalize(make_mul(std::move(factors)));
}

// ---- infinite order: prefix sums --------------------------------------------

// x_n = f(n) + g(n) sum_{k<n} x_k  -->  x_n = A(n) x_{n-1} + B(n) for n >= 2,
// A(n) = g(n)/g(n-1) + g(n), B(n) = f(n) - f(n-1) g(n)/g(n-1),
// seeded by x_0 = f(0) (the empty-sum instance; a supplied initial condition
// overrides it, restricting the equation to n >= 1) and x_1 = f(1) + g(1) x_0.
inline TransformResult reduce_infinite_order(const RecurrenceSpec& spec,
                                             const InitialConditions& ics = {}) {
    if (!spec.prefix_sum_coeff)
        throw Error(Err::NotSupportedShape, "no prefix-sum term");
    if (!spec.shift_terms.empty() || spec.divisor || !spec.linear_ok)
        throw Error(Err::NotSupportedShape,
                    "supported shape is x(n) = f(n) + g(n)*sum(x, k, 0, n-1)");
    const std::string& var = spec.var();
    Expr g = *spec.prefix_sum_coeff;
    Expr f = spec.forcing;

    // g must not vanish at any integer n >= 1
    if (auto gp = expr_to_poly(g, var)) {
        if (gp->is_zero()) throw Error(Err::CoefficientVanishes, "g is identically zero");
        for (const Rat& r : rational_roots(*gp)) {
            if (r.is_integer() && r.sign() > 0)
                throw Error(Err::CoefficientVanishes, "g vanishes at " + var + "=" + r.to_string());
        }
    } else {
        for (long n = 1; n <= 64; ++n) {
            try {
                if (eval_exact(g, {{var, Rat(n)}}).is_zero())
                    throw Error(Err::CoefficientVanishes, "g vanishes at " + var + "=" + std::to_string(n));
            } catch (const Error& e) {
                if (e.kind() == Err::CoefficientVanishes) throw;
                break;  // symbolic g: checked at evaluation time
            }
        }
    }

    Expr g_m1 = substitute(g, var, normalize(make_add({make_symbol(var), make_const(-1)})));
    Expr f_m1 = substitute(f, var, normalize(make_add({make_symbol(var), make_const(-1)})));
    Expr ratio = make_mul({g, make_pow(g_m1, make_const(-1))});
    Expr A = normalize(make_add({ratio, g}));
    Expr B = normalize(make_add({f, make_mul({make_const(-1), f_m1, ratio})}));
    // rational-function normalization exposes cancellations the term-level
    // rewriting cannot see (common denominators)
    auto simplify_rat = [&](const Expr& e) {
        if (auto rp = expr_to_ratpoly(e, var)) {
            Expr num = poly_to_expr(rp->num, var);
            if (rp->den.degree() == 0 && rp->den.coeff(0).is_one()) return num;
            return normalize(make_mul({num, make_pow(poly_to_expr(rp->den, var), make_const(-1))}));
        }
        return e;
    };
    A = simplify_rat(A);
    B = simplify_rat(B);

    TransformResult tr;
    tr.kind = TransformResult::Kind::PrefixSum;
    RecurrenceSpec r;
    r.unknown = spec.unknown;
    r.index_vars = {var};
    r.shift_terms[1] = A;
    r.forcing = B;
    r.linear_ok = true;
    r.raw_rhs = spec_rhs(r);
    tr.transformed = std::move(r);
    Expr x0 = normalize(substitute(f, var, make_const(0)));
    if (const Expr* given = ics.find(spec.unknown, {0})) x0 = normalize(*given);
    Expr x1 = normalize(make_add({substitute(f, var, make_const(1)),
                                  make_mul({substitute(g, var, make_const(1)), x0})}));
    tr.seeds = {{0, x0}, {1, x1}};
    tr.valid_from = 1;
    tr.inverse_desc = "identity (same sequence, first-order form valid for " + var + " >= 1)";
    return tr;
}

// ---- multivariate -------------------------------------------------------------

// Single-occurrence multivariate recurrences whose index shifts admit an
// invariant +-1 combination become univariate chains along the index that
// decreases toward its boundary pattern.
inline TransformResult rewrite_multivariate(const RecurrenceSpec& spec,
                                            const InitialConditions& ics) {
    if (!spec.multivariate())
        throw Error(Err::NoInvariantCombination, "not multivariate");
    if (!spec.linear_ok || spec.mshift_terms.empty())
        throw Error(Err::NoInvariantCombination, "unknown occurs nonlinearly");
    const std::size_t k = spec.index_vars.size();

    // invariant +-1 combination must kill every occurrence's shift vector
    bool found = false;
    for (unsigned mask = 0; mask < (1u << k) && !found; ++mask) {
        bool ok = true;
        for (const auto& [vec, c] : spec.mshift_terms) {
            long dot = 0;
            for (std::size_t i = 0; i < k; ++i) dot += (mask & (1u << i)) ? -vec[i] : vec[i];
            if (dot != 0) {
                ok = false;
                break;
            }
        }
        found = ok;
    }
    if (!found)
        throw Error(Err::NoInvariantCombination,
                    "index shifts admit no invariant +-1 combination");
    if (spec.mshift_terms.size() != 1)
        throw Error(Err::NoInvariantCombination,
                    "only single-occurrence multivariate recurrences are rewritten");

    const auto& [delta, coeff] = *spec.mshift_terms.begin();

    // boundary pattern fixes which index counts down
    const ICPattern* pat = nullptr;
    std::size_t pos = 0;
    for (const auto& p : ics.patterns) {
        if (p.unknown != spec.unknown || p.args.size() != k) continue;
        std::size_t literals = 0, lit_pos = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (std::holds_alternative<long>(p.args[i])) {
                ++literals;
                lit_pos = i;
            }
        }
        if (literals == 1 && delta[lit_pos] > 0) {
            pat = &p;
            pos = lit_pos;
            break;
        }
    }
    if (!pat)
        throw Error(Err::MissingInitialCondition,
                    "need a boundary pattern on an index that decreases");

    long d = delta[pos];
    long b = std::get<long>(pat->args[pos]);

    TransformResult tr;
    tr.kind = TransformResult::Kind::Multivariate;
    tr.t_var = "t";
    tr.chain_pos = pos;
    tr.chain_step = d;
    tr.boundary = b;
    tr.drift = delta;

    // along the chain: index_i = start_i + t*delta_i (start at the boundary)
    std::map<std::string, Expr> sub;
    tr.start_symbols.assign(k, "");
    for (std::size_t i = 0; i < k; ++i) {
        Expr step = make_mul({make_const(delta[i]), make_symbol(tr.t_var)});
        if (i == pos) {
            sub.emplace(spec.index_vars[i], normalize(make_add({make_const(b), step})));
        } else {
            std::string s0 = "_start_" + spec.index_vars[i];
            tr.start_symbols[i] = s0;
            sub.emplace(spec.index_vars[i], normalize(make_add({make_symbol(s0), step})));
        }
    }

    RecurrenceSpec y;
    y.unknown = "y";
    y.index_vars = {tr.t_var};
    y.shift_terms[1] = coeff;
    y.forcing = normalize(substitute(spec.forcing, sub));
    y.linear_ok = true;
    y.raw_rhs = spec_rhs(y);
    tr.transformed = std::move(y);

    // y(0) = boundary pattern value with its free names bound to the chain starts
    std::map<std::string, Expr> patsub;
    for (std::size_t i = 0; i < k; ++i) {
        if (i == pos) continue;
        if (std::holds_alternative<std::string>(pat->args[i]))
            patsub.emplace(std::get<std::string>(pat->args[i]), make_symbol(tr.start_symbols[i]));
    }
    tr.seeds = {{0, normalize(substitute(pat->value, patsub))}};

    std::string iv = spec.index_vars[pos];
    tr.inverse_desc = spec.unknown + " = y at t = (" + iv + " - " + std::to_string(b) + ")/" +
                      std::to_string(d);
    tr.assumptions.push_back(iv + " >= " + std::to_string(b) + " and (" + iv + " - " +
                             std::to_string(b) + ") divisible by " + std::to_string(d));
    return tr;
}

// substitutes the chain parameters of a multivariate rewrite back into a
// solved y-expression
inline Expr apply_multivariate_inverse(const TransformResult& tr, const RecurrenceSpec& orig,
                                       const Expr& y_solution) {
    const std::string& iv = orig.index_vars[tr.chain_pos];
    Expr tval = normalize(make_mul({make_const(Rat(1, tr.chain_step)),
                                    make_add({make_symbol(iv), make_const(-tr.boundary)})}));
    std::map<std::string, Expr> sub{{tr.t_var, tval}};
    for (std::size_t i = 0; i < tr.start_symbols.size(); ++i) {
        if (tr.start_symbols[i].empty()) continue;
        Expr start = normalize(make_add(
            {make_symbol(orig.index_vars[i]),
             make_mul({make_const(-tr.drift[i]), tval})}));
        sub.emplace(tr.start_symbols[i], start);
    }
    return normalize(substitute(y_solution, sub));
}

}  // namespace recsolve
