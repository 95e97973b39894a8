#pragma once

// Classification of recurrences into the solver taxonomy and the solve()
// orchestrator: classify, route, solve, verify. Every Exact result goes
// through the symbolic checker before it is returned; every Bounds result is
// spot-checked against the iteration oracle. Solver failures surface as
// Unsolved(reason), never as crashes, for anything the grammar admits.

#include "recsolve/approxbounds.hpp"
#include "recsolve/dcbounds.hpp"
#include "recsolve/error.hpp"
#include "recsolve/linsolve.hpp"
#include "recsolve/recurrence.hpp"
#include "recsolve/transforms.hpp"
#include "recsolve/varsolve.hpp"
#include "recsolve/verify.hpp"

#include <string>
#include <variant>

namespace recsolve {

struct Classification {
    enum class Kind {
        LinearConstCoeff,
        LinearVarCoeff,
        NonLinear,
        InfiniteOrder,
        DivideConquer,
        Multivariate,
        System,
        Unsupported,
    } kind = Kind::Unsupported;
    long order = 0;
    Rat alpha, beta;
    std::string reason;

    std::string name() const {
        switch (kind) {
            case Kind::LinearConstCoeff:
                return "linear-constant-coefficients(order " + std::to_string(order) + ")";
            case Kind::LinearVarCoeff:
                return "linear-variable-coefficients(order " + std::to_string(order) + ")";
            case Kind::NonLinear: return "non-linear";
            case Kind::InfiniteOrder: return "infinite-order";
            case Kind::DivideConquer:
                return "divide-and-conquer(alpha " + alpha.to_string() + ", beta " +
                       beta.to_string() + ")";
            case Kind::Multivariate: return "multivariate";
            case Kind::System: return "system";
            case Kind::Unsupported: return "unsupported(" + reason + ")";
        }
        return "?";
    }
};

inline Classification classify(const RecurrenceSpec& spec) {
    Classification c;
    if (spec.multivariate()) {
        c.kind = Classification::Kind::Multivariate;
        return c;
    }
    if (spec.prefix_sum_coeff) {
        c.kind = Classification::Kind::InfiniteOrder;
        return c;
    }
    if (spec.divisor) {
        c.kind = Classification::Kind::DivideConquer;
        c.beta = spec.divisor->beta;
        try {
            c.alpha = eval_exact(spec.divisor->coeff);
        } catch (const Error&) {
            c.kind = Classification::Kind::Unsupported;
            c.reason = "symbolic divide-and-conquer coefficient";
        }
        return c;
    }
    if (!spec.linear_ok) {
        c.kind = Classification::Kind::NonLinear;
        return c;
    }
    if (contains_unknown(spec.forcing)) {
        c.kind = Classification::Kind::Unsupported;
        c.reason = "reference to an undefined unknown";
        return c;
    }
    if (spec.shift_terms.empty()) {
        c.kind = Classification::Kind::Unsupported;
        c.reason = "the unknown does not recur";
        return c;
    }
    c.order = spec.order();
    bool var_coeff = false;
    for (const auto& [s, coeff] : spec.shift_terms)
        var_coeff = var_coeff || contains_symbol(coeff, spec.var());
    c.kind = var_coeff ? Classification::Kind::LinearVarCoeff
                       : Classification::Kind::LinearConstCoeff;
    return c;
}

inline Classification classify(const ParsedRecurrence& pr) {
    if (std::holds_alternative<RecurrenceSystem>(pr)) {
        Classification c;
        c.kind = Classification::Kind::System;
        return c;
    }
    return classify(std::get<RecurrenceSpec>(pr));
}

struct SolveOptions {
    enum class Mode { Auto, Exact, Bounds } mode = Mode::Auto;
    long verify_horizon = 64;
    Rat root_width = Rat(1, 1000);
};

namespace solve_detail {

inline std::string ic_symbol(const RecurrenceSpec& spec, long idx) {
    std::string i = std::to_string(idx);
    if (idx < 0) i = "m" + std::to_string(-idx);
    return spec.unknown + i;
}

// order-many conditions from the smallest given index (default 0); missing
// values become named symbols so symbolic fits stay first-class
inline std::vector<std::pair<long, Expr>> gather_ics(const RecurrenceSpec& spec,
                                                     const InitialConditions& ics, long order) {
    long base = 0;
    bool any = false;
    for (const auto& p : ics.points) {
        if (p.unknown != spec.unknown || p.idx.size() != 1) continue;
        if (!any || p.idx[0] < base) base = p.idx[0];
        any = true;
    }
    std::vector<std::pair<long, Expr>> out;
    for (long j = base; j < base + order; ++j) {
        const Expr* v = ics.find(spec.unknown, {j});
        out.push_back({j, v ? normalize(*v) : make_symbol(ic_symbol(spec, j))});
    }
    return out;
}

inline InitialConditions to_ics(const RecurrenceSpec& spec,
                                const std::vector<std::pair<long, Expr>>& pairs) {
    InitialConditions ics;
    for (auto& [i, v] : pairs) ics.points.push_back({spec.unknown, {i}, v});
    return ics;
}

// split a forcing expression into (parameter factor, exponential polynomial)
// components so symbolic constants ride along linearly
inline std::vector<std::pair<Expr, ExpPoly>> decompose_forcing(const Expr& forcing,
                                                               const std::string& var) {
    std::vector<std::pair<Expr, ExpPoly>> out;
    Expr f = normalize(forcing);
    if (f.is_zero()) return out;
    struct KeyLess {
        bool operator()(const std::vector<Expr>& a, const std::vector<Expr>& b) const {
            return compare_lists(a, b) < 0;
        }
    };
    std::map<std::vector<Expr>, std::vector<Expr>, KeyLess> groups;
    for (const auto& term : detail::add_terms(f)) {
        detail::TermParts tp = detail::split_term(term);
        std::vector<Expr> symfac, rest{make_const(tp.coeff)};
        for (const auto& x : tp.factors) {
            std::set<std::string> fs = free_symbols(x);
            bool has_var = contains_symbol(x, var);
            fs.erase(var);
            if (!fs.empty() && has_var)
                throw Error(Err::NotExpPoly, "parameter entangled with the index variable");
            if (fs.empty() && !has_var && (x.kind() == Kind::Func || contains_func(x))) {
                symfac.push_back(x);  // constant but non-rational, e.g. log(3)
            } else if (fs.empty()) {
                rest.push_back(x);  // rational constant or a function of the variable
            } else {
                symfac.push_back(x);
            }
        }
        groups[symfac].push_back(make_mul(std::move(rest)));
    }
    for (auto& [key, terms] : groups) {
        ExpPoly xp = to_expoly(make_add(terms), var, /*allow_signed=*/true);
        if (xp.is_zero()) continue;
        std::vector<Expr> kf = key;
        out.push_back({normalize(make_mul(std::move(kf))), xp});
    }
    return out;
}

// symbolic-tree comparison with an exact numeric fallback for sum/prod forms
inline bool values_agree(const Expr& a, const Expr& b) {
    Expr na = normalize(a), nb = normalize(b);
    if (equals(na, nb)) return true;
    std::set<std::string> syms = free_symbols(na);
    for (const auto& s : free_symbols(nb)) syms.insert(s);
    for (auto& binds : detail::sample_bindings(syms, "")) {
        try {
            QuadBindings qb;
            for (auto& [k, v] : binds) qb.emplace(k, Quad(v));
            if (eval_quad(na, qb) != eval_quad(nb, qb)) return false;
        } catch (const Error&) {
            return false;
        } catch (const SurdMixError&) {
            return false;
        }
    }
    return true;
}

}  // namespace solve_detail

inline Solution solve(const ParsedRecurrence& input, const InitialConditions& ics,
                      const SolveOptions& opts = {});

namespace solve_detail {

// oracle agreement for an exact closed form; equality is of exact values
inline VerifyReport verify_exact_against_oracle(const RecurrenceSpec& spec,
                                                const InitialConditions& ics, const Expr& closed,
                                                long horizon, long valid_from = 0) {
    VerifyReport rep;
    rep.method = "oracle";
    const std::string& var = spec.var();
    try {
        if (spec.divisor) {
            long maxk = 0;
            Rat n(1);
            while (n * spec.divisor->beta <= Rat(horizon)) {
                n = n * spec.divisor->beta;
                ++maxk;
            }
            std::set<std::string> syms = free_symbols(closed);
            for (const auto& p : ics.points)
                for (const auto& s : free_symbols(p.value)) syms.insert(s);
            syms.erase(var);
            std::vector<Bindings> blist{{}};
            if (!syms.empty()) blist = detail::sample_bindings(syms, var);
            for (auto& binds : blist) {
                auto pts = iterate_oracle_dc(spec, ics, maxk, binds);
                for (auto& [nn, xv] : pts) {
                    Bindings b = binds;
                    b[var] = Rat(nn);
                    Rat cv = eval_loglin(closed, b);
                    if (cv != xv) {
                        rep.ok = false;
                        return rep;
                    }
                }
                rep.checked_up_to = pts.empty() ? 0 : pts.back().first;
            }
            rep.ok = true;
            return rep;
        }
        if (spec.multivariate()) {
            MultiOracle mo(spec, ics);
            Bindings none;
            for (long m = 0; m <= 8; ++m) {
                for (long n2 = 0; n2 <= 8; ++n2) {
                    std::vector<long> idx{m, n2};
                    Rat want;
                    try {
                        want = mo.value(idx);
                    } catch (const Error&) {
                        continue;
                    }
                    std::map<std::string, Expr> sub;
                    for (std::size_t i = 0; i < spec.index_vars.size(); ++i)
                        sub.emplace(spec.index_vars[i], make_const(idx[i]));
                    Expr cv = normalize(substitute(closed, sub));
                    if (!cv.is_const() || cv.value() != want) {
                        rep.ok = false;
                        return rep;
                    }
                }
            }
            rep.checked_up_to = 8;
            rep.ok = true;
            return rep;
        }
        OracleSeq seq = iterate_oracle_sym(spec, ics, horizon);
        for (long n = std::max(seq.base, valid_from); n <= horizon; ++n) {
            Expr cv = substitute(closed, var, make_const(n));
            if (!values_agree(cv, seq.sym_at(n))) {
                rep.ok = false;
                rep.checked_up_to = n;
                return rep;
            }
        }
        rep.checked_up_to = horizon;
        rep.ok = true;
    } catch (const Error& e) {
        if (e.kind() == Err::SymbolicBlocked || e.kind() == Err::MissingInitialCondition ||
            e.kind() == Err::UnboundSymbol) {
            rep.method = "none";
            rep.ok = true;  // nothing to iterate against; symbolic certification decides
            return rep;
        }
        rep.ok = false;
    }
    return rep;
}

// bound verification that binds sample values for any symbolic parameters
inline VerifyReport verify_bounds_sampled(const RecurrenceSpec& spec, const InitialConditions& ics,
                                          const Expr& lower, const Expr& upper, long N) {
    std::set<std::string> syms = free_symbols(lower);
    for (const auto& s : free_symbols(upper)) syms.insert(s);
    for (const auto& p : ics.points) {
        for (const auto& s : free_symbols(p.value)) syms.insert(s);
    }
    syms.erase(spec.var());
    VerifyReport rep;
    rep.method = "bounds";
    if (syms.empty()) {
        BoundsReport r = check_bounds_numeric(spec, ics, lower, upper, N);
        return {r.checked, r.ok, "bounds"};
    }
    long checked = 0;
    for (auto& binds : detail::sample_bindings(syms, spec.var())) {
        BoundsReport r = check_bounds_numeric(spec, ics, lower, upper, N, binds);
        if (!r.ok) return {r.checked, false, "bounds"};
        checked = std::max(checked, r.checked);
    }
    return {checked, true, "bounds(sampled parameters)"};
}

inline Solution finalize_exact(const RecurrenceSpec& spec, const InitialConditions& ics,
                               Solution sol, const SolveOptions& opts, long dc_base = 1,
                               long valid_from = 0) {
    CheckResult cr = check_solution_symbolic(spec, sol.exact, 50, dc_base);
    if (cr.verdict == Verdict::Certified) {
        sol.verification = {opts.verify_horizon, true, "certified"};
        // belt and braces: certified forms still get an oracle pass when numeric
        VerifyReport rep =
            verify_exact_against_oracle(spec, ics, sol.exact, opts.verify_horizon, valid_from);
        if (!rep.ok) sol.verification = {rep.checked_up_to, false, "certified-but-oracle-mismatch"};
        return sol;
    }
    if (cr.verdict == Verdict::Refuted) {
        sol.verification = {cr.witness, false, "refuted"};
        return sol;
    }
    VerifyReport rep =
        verify_exact_against_oracle(spec, ics, sol.exact, opts.verify_horizon, valid_from);
    sol.verification = rep;
    return sol;
}

inline Solution solve_linear_const(const RecurrenceSpec& spec, const InitialConditions& ics,
                                   const SolveOptions& opts) {
    std::map<long, Rat> coeffs;
    try {
        coeffs = rational_coeffs(spec);
    } catch (const Error& e) {
        return Solution::unsolved(e.what());
    }
    CharDecomposition decomp = char_decompose(spec);

    if (decomp.fully_resolved()) {
        try {
            auto parts = solve_detail::decompose_forcing(spec.forcing, spec.var());
            std::vector<Expr> particular_terms;
            for (auto& [symfac, xp] : parts) {
                ExpPoly pp = particular_solution(coeffs, decomp.charpoly, xp);
                particular_terms.push_back(normalize(make_mul({symfac, expoly_to_expr(pp)})));
            }
            Expr particular = normalize(make_add(std::move(particular_terms)));
            auto icv = gather_ics(spec, ics, spec.order());
            Expr fitted = apply_initial_conditions(homogeneous_basis(decomp), particular, icv,
                                                   spec.var());
            Solution s = Solution::exact_form(
                fitted, "all " + spec.var() + " >= " + std::to_string(icv.front().first));
            return finalize_exact(spec, to_ics(spec, icv), std::move(s), opts);
        } catch (const Error& e) {
            if (e.kind() != Err::NotExpPoly && e.kind() != Err::SingularSystem &&
                e.kind() != Err::IllFormed)
                throw;
            if (spec.order() == 1 && spec.shift_terms.size() == 1) {
                // non-exp-poly forcing still yields a first-order closed form
                auto icv = gather_ics(spec, ics, 1);
                try {
                    auto [expr, k0] = solve_first_order_var(spec, icv.front().second,
                                                            icv.front().first);
                    Solution s = Solution::exact_form(
                        expr, "all " + spec.var() + " >= " + std::to_string(k0));
                    return finalize_exact(spec, to_ics(spec, icv), std::move(s), opts);
                } catch (const Error& e2) {
                    return Solution::unsolved(e2.what());
                }
            }
            return Solution::unsolved(e.what());
        } catch (const SurdMixError& e) {
            return Solution::unsolved(e.what());
        }
    }

    // irrational roots of degree >= 3: order reduction or bounds
    try {
        OrderReduction red = order_reduce(spec);
        std::vector<Expr> class_forms;
        bool all_exact = true;
        for (long r = 0; r < red.g && all_exact; ++r) {
            RecurrenceSpec& sub = red.subs[r];
            InitialConditions sub_ics;
            for (const auto& p : ics.points) {
                if (p.unknown != spec.unknown || p.idx.size() != 1) continue;
                if ((p.idx[0] % red.g + red.g) % red.g != r) continue;
                sub_ics.points.push_back({sub.unknown, {(p.idx[0] - r) / red.g}, p.value});
            }
            SolveOptions sub_opts = opts;
            Solution ss = solve(sub, sub_ics, sub_opts);
            if (ss.kind != Solution::Kind::Exact) {
                all_exact = false;
                break;
            }
            // back to n: m = (n - r)/g
            Expr msub = normalize(make_mul({make_const(Rat(1, red.g)),
                                            make_add({make_symbol(spec.var()), make_const(-r)})}));
            class_forms.push_back(normalize(substitute(ss.exact, sub.var(), msub)));
        }
        if (all_exact && !class_forms.empty()) {
            bool merged = true;
            for (auto& e : class_forms) merged = merged && equals(e, class_forms.front());
            if (merged) {
                Solution s = Solution::exact_form(class_forms.front(),
                                                  "all " + spec.var() + " >= 0");
                return finalize_exact(spec, ics, std::move(s), opts);
            }
        }
    } catch (const Error&) {
    }

    if (opts.mode != SolveOptions::Mode::Exact) {
        try {
            SandwichBounds sw = expoly_sandwich(spec, ics, opts.root_width);
            Solution s = Solution::bounds(sw.lower, sw.upper,
                                          "all " + spec.var() + " >= 0");
            s.assumptions.push_back("coefficients and initial conditions non-negative");
            BoundsReport rep =
                check_bounds_numeric(spec, ics, s.lower, s.upper, opts.verify_horizon);
            s.verification = {rep.checked, rep.ok, "bounds"};
            return s;
        } catch (const Error& e) {
            return Solution::unsolved(std::string("no exact form (irrational characteristic "
                                                  "roots); bounds failed: ") +
                                      e.what());
        }
    }
    return Solution::unsolved("characteristic polynomial has irrational roots of degree >= 3");
}

inline Solution solve_spec(const RecurrenceSpec& spec, const InitialConditions& ics,
                           const SolveOptions& opts) {
    Classification cls = classify(spec);
    Solution out;
    switch (cls.kind) {
        case Classification::Kind::LinearConstCoeff: {
            out = solve_linear_const(spec, ics, opts);
            break;
        }
        case Classification::Kind::LinearVarCoeff: {
            if (spec.order() != 1) {
                out = Solution::unsolved("higher-order variable coefficients");
                break;
            }
            auto icv = gather_ics(spec, ics, 1);
            try {
                auto [expr, k0] =
                    solve_first_order_var(spec, icv.front().second, icv.front().first);
                Solution s = Solution::exact_form(
                    expr, "all " + spec.var() + " >= " + std::to_string(k0));
                out = finalize_exact(spec, to_ics(spec, icv), std::move(s), opts);
            } catch (const Error& e) {
                out = Solution::unsolved(e.what());
            }
            break;
        }
        case Classification::Kind::NonLinear: {
            try {
                TransformResult tr = linearize_nonlinear(spec);
                long order = tr.transformed.order();
                // y(i) = log(x(i)); literal conditions must be positive
                InitialConditions yics;
                std::vector<std::string> assumptions = tr.assumptions;
                for (long j = 0; j < order; ++j) {
                    const Expr* v = ics.find(spec.unknown, {j});
                    Expr xv = v ? normalize(*v) : make_symbol(ic_symbol(spec, j));
                    if (xv.is_const() && xv.value().sign() <= 0)
                        throw Error(Err::NonPositiveConstant,
                                    "initial condition " + spec.unknown + "(" +
                                        std::to_string(j) + ") must be positive");
                    yics.points.push_back({"y", {j}, normalize(make_func("log", {xv}))});
                }
                SolveOptions yopts = opts;
                yopts.mode = SolveOptions::Mode::Exact;
                Solution ys = solve(tr.transformed, yics, yopts);
                if (ys.kind != Solution::Kind::Exact) {
                    out = Solution::unsolved("transformed recurrence unsolved: " + ys.reason);
                    break;
                }
                Expr x = apply_log_inverse(ys.exact);
                Solution s = Solution::exact_form(x, "all " + spec.var() + " >= 0");
                s.assumptions = assumptions;
                out = finalize_exact(spec, ics, std::move(s), opts);
            } catch (const Error& e) {
                out = Solution::unsolved(e.what());
            }
            break;
        }
        case Classification::Kind::InfiniteOrder: {
            try {
                TransformResult tr = reduce_infinite_order(spec, ics);
                const Expr& x1 = tr.seeds[1].second;
                auto [expr, k0] = solve_first_order_var(tr.transformed, x1, 1);
                (void)k0;
                Solution s = Solution::exact_form(
                    expr, "all " + spec.var() + " >= 1; " + spec.unknown + "(0) = " +
                              render(tr.seeds[0].second));
                Expr f0 = normalize(substitute(spec.forcing, spec.var(), make_const(0)));
                bool seed_overridden =
                    ics.find(spec.unknown, {0}) && !equals(normalize(*ics.find(spec.unknown, {0})), f0);
                if (seed_overridden) {
                    // the prefix sum runs through the overridden x(0); only the
                    // oracle can vouch for the closed form
                    s.verification = verify_exact_against_oracle(spec, ics, s.exact,
                                                                 opts.verify_horizon, tr.valid_from);
                    out = s;
                } else {
                    out = finalize_exact(spec, ics, std::move(s), opts, 1, tr.valid_from);
                }
            } catch (const Error& e) {
                out = Solution::unsolved(e.what());
            }
            break;
        }
        case Classification::Kind::DivideConquer: {
            try {
                DCSpec d = make_dcspec(spec, ics);
                if (opts.mode == SolveOptions::Mode::Bounds) {
                    Solution s = dc_bounds(d);
                    s.verification = verify_bounds_sampled(spec, ics, s.lower, s.upper,
                                                           opts.verify_horizon);
                    out = s;
                } else {
                    Expr e = dc_exact_on_powers(d);
                    Solution s = Solution::exact_form(
                        e, d.var + " = " + std::to_string(d.n0) + "*" + d.beta.to_string() +
                               "^k, k >= 0 (each n for which the recurrence is well-defined)");
                    out = finalize_exact(spec, ics, std::move(s), opts, d.n0);
                }
            } catch (const Error& e) {
                out = Solution::unsolved(e.what());
            }
            break;
        }
        case Classification::Kind::Multivariate: {
            try {
                TransformResult tr = rewrite_multivariate(spec, ics);
                InitialConditions yics;
                yics.points.push_back({"y", {0}, tr.seeds[0].second});
                SolveOptions yopts = opts;
                yopts.mode = SolveOptions::Mode::Exact;
                Solution ys = solve(tr.transformed, yics, yopts);
                if (ys.kind != Solution::Kind::Exact) {
                    out = Solution::unsolved("transformed recurrence unsolved: " + ys.reason);
                    break;
                }
                Expr x = apply_multivariate_inverse(tr, spec, ys.exact);
                Solution s = Solution::exact_form(x, tr.assumptions.empty()
                                                         ? "all well-defined indices"
                                                         : tr.assumptions.front());
                out = finalize_exact(spec, ics, std::move(s), opts);
            } catch (const Error& e) {
                out = Solution::unsolved(e.what());
            }
            break;
        }
        case Classification::Kind::System:
        case Classification::Kind::Unsupported: {
            out = Solution::unsolved(cls.reason.empty() ? "unsupported input" : cls.reason);
            break;
        }
    }
    out.classification = cls.name();
    return out;
}

inline Solution solve_system(const RecurrenceSystem& sys, const InitialConditions& ics,
                             const SolveOptions& opts) {
    try {
        const std::string target = sys.eqs.front().unknown;
        RecurrenceSpec derived = eliminate_system(sys, target);
        long order = derived.order();
        InitialConditions derived_ics;
        if (!ics.empty()) {
            auto seqs = iterate_oracle_system(sys, ics, std::max<long>(order - 1, 0));
            const OracleSeq& t = seqs.at(target);
            for (long j = 0; j < order; ++j)
                derived_ics.points.push_back({target, {j}, t.sym[j]});
        }
        Solution s = solve_spec(derived, derived_ics, opts);
        s.classification = "system -> " + s.classification;
        if (s.kind != Solution::Kind::Unsolved)
            s.assumptions.insert(s.assumptions.begin(),
                                 "reduced to " + render_equation(derived));
        return s;
    } catch (const Error& e) {
        Solution s = Solution::unsolved(e.what());
        s.classification = "system";
        return s;
    }
}

}  // namespace solve_detail

inline Solution solve(const ParsedRecurrence& input, const InitialConditions& ics,
                      const SolveOptions& opts) {
    if (std::holds_alternative<RecurrenceSystem>(input))
        return solve_detail::solve_system(std::get<RecurrenceSystem>(input), ics, opts);
    return solve_detail::solve_spec(std::get<RecurrenceSpec>(input), ics, opts);
}

}  // namespace recsolve
