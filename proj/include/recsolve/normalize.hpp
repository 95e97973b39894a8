#pragma once

// Canonicalization of expression trees. The rewrite system:
//   - distributes products over sums and expands literal integer powers of sums
//   - folds constants exactly (with a size cap so huge powers stay symbolic)
//   - merges same-base factors by adding exponents
//   - rewrites literal positive bases through their prime factorization, so
//     4^n -> 2^(2*n), (1/2)^n -> 2^(-n), 12^(1/2) -> 2*3^(1/2)
//   - absorbs coefficient content into matching exponents: 2*2^n -> 2^(n+1)
//   - expands log of products/powers and of factorable literals
//   - resolves factorial ratios with literal integer offsets and binomial
//     calls with literal second argument
// The result is a fixed point: sums/products are flat, sorted, and like terms
// are collected, so semantically equal exponential polynomials share one tree.

#include "recsolve/expr.hpp"

#include <optional>

namespace recsolve {

inline Expr normalize(const Expr& e);

namespace detail {

constexpr long kExpandCap = 64;  // max literal power of a sum to expand
// constants beyond these sizes stay symbolic; folding policy is part of the
// canonical form, so both caps are fixed
constexpr unsigned long kFoldBitCap = 1u << 12;
constexpr unsigned long kFactorBitCap = 1u << 12;
constexpr long kFactorialFoldCap = 20000;

inline bool factorable_size(const Rat& c) {
    return mpz_sizeinbase(c.num().get_mpz_t(), 2) <= kFactorBitCap &&
           mpz_sizeinbase(c.den().get_mpz_t(), 2) <= kFactorBitCap;
}

inline Expr norm_rec(const Expr& e);
inline Expr normalize_mul(std::vector<Expr> factors);
inline Expr normalize_add(std::vector<Expr> terms);

inline std::vector<Expr> add_terms(const Expr& e) {
    if (e.kind() == Kind::Add) return e.kids();
    return {e};
}

inline std::vector<Expr> mul_factors(const Expr& e) {
    if (e.kind() == Kind::Mul) return e.kids();
    return {e};
}

inline bool contains_log(const Expr& e) {
    if (e.kind() == Kind::Func && e.name() == "log") return true;
    for (const auto& k : e.kids()) {
        if (contains_log(k)) return true;
    }
    return false;
}

// exact constant fold of base^exp with a bit-size cap; nullopt keeps it symbolic
inline std::optional<Rat> fold_const_pow(const Rat& base, const Rat& exp) {
    if (exp.is_zero()) return Rat(1);
    if (base.is_zero()) {
        if (exp.sign() > 0) return Rat(0);
        return std::nullopt;  // 0^negative: leave for eval to reject
    }
    Rat absexp = exp.abs();
    if (!absexp.num().fits_ulong_p()) return std::nullopt;
    unsigned long bits = std::max(mpz_sizeinbase(base.num().get_mpz_t(), 2),
                                  mpz_sizeinbase(base.den().get_mpz_t(), 2));
    unsigned long mult = std::max(1ul, absexp.ceil().get_ui());
    if (mult > kFoldBitCap || bits > kFoldBitCap / mult) return std::nullopt;
    return ratfn::pow_exact(base, exp);
}

inline Expr make_log(const Expr& a) { return make_func("log", {a}); }

// conservatively provable positive (for log expansion / exp-log rewrites)
inline bool surely_positive(const Expr& e) {
    switch (e.kind()) {
        case Kind::Const: return e.value().sign() > 0;
        case Kind::Symbol: return true;  // index vars and parameters: positive domain
        case Kind::Pow: return surely_positive(e.kids()[0]);
        case Kind::Func: return e.name() == "factorial";
        case Kind::Mul: {
            for (const auto& k : e.kids()) {
                if (!surely_positive(k)) return false;
            }
            return true;
        }
        default: return false;
    }
}

inline bool is_prime_const(const Rat& c) {
    return c.is_integer() && c.sign() > 0 && intfn::is_probable_prime(c.num());
}

// log(c) for a positive rational literal, split over prime factors;
// log of a prime is the atom and stays put.
inline Expr log_of_const(const Rat& c) {
    if (!factorable_size(c)) return make_log(make_const(c));
    if (is_prime_const(c)) return make_log(make_const(c));
    std::vector<Expr> terms;
    for (const auto& [p, e] : intfn::factorize(c.num())) {
        Expr lg = make_log(make_const(Rat(p, Int(1))));
        terms.push_back(e == 1 ? lg : make_mul({make_const(e), lg}));
    }
    for (const auto& [p, e] : intfn::factorize(c.den())) {
        Expr lg = make_log(make_const(Rat(p, Int(1))));
        terms.push_back(make_mul({make_const(-e), lg}));
    }
    if (terms.empty()) return make_const(0);  // c == 1
    return normalize_add(std::move(terms));
}

struct TermParts {
    Rat coeff;
    std::vector<Expr> factors;  // no Const entries, sorted
};

inline TermParts split_term(const Expr& t) {
    TermParts p;
    p.coeff = Rat(1);
    if (t.kind() == Kind::Const) {
        p.coeff = t.value();
        return p;
    }
    if (t.kind() == Kind::Mul) {
        for (const auto& f : t.kids()) {
            if (f.kind() == Kind::Const) p.coeff = p.coeff * f.value();
            else p.factors.push_back(f);
        }
        return p;
    }
    p.factors.push_back(t);
    return p;
}

inline Expr pow_rule(const Expr& base, const Expr& exp);

// exp-log canonical rewrite for literal positive bases: b^x -> prod p_i^(X_i)
// where x*log(b) = sum X_i * log(p_i). Returns nullopt when the exponent is
// not log-linear over constants.
inline std::optional<Expr> exp_log_collapse(const Rat& base, const Expr& exp) {
    if (!factorable_size(base)) return std::nullopt;
    Expr z = norm_rec(make_mul({exp, log_of_const(base)}));
    if (z.is_zero()) return make_const(1);
    std::vector<Expr> pows;
    for (const auto& term : add_terms(z)) {
        TermParts tp = split_term(term);
        Expr logf;
        std::vector<Expr> rest;
        int nlogs = 0;
        for (const auto& f : tp.factors) {
            if (f.kind() == Kind::Func && f.name() == "log") {
                ++nlogs;
                logf = f;
            } else {
                if (contains_log(f)) return std::nullopt;
                rest.push_back(f);
            }
        }
        if (nlogs != 1) return std::nullopt;
        const Expr& arg = logf.kids()[0];
        if (arg.kind() != Kind::Const || arg.value().sign() <= 0) return std::nullopt;
        rest.insert(rest.begin(), make_const(tp.coeff));
        pows.push_back(make_pow(arg, norm_rec(make_mul(std::move(rest)))));
    }
    return normalize_mul(std::move(pows));
}

inline Expr pow_rule(const Expr& base, const Expr& exp) {
    if (exp.is_zero()) return make_const(1);
    if (exp.is_one()) return base;
    if (base.is_one()) return make_const(1);

    if (base.is_const() && exp.is_const()) {
        if (auto v = fold_const_pow(base.value(), exp.value())) return make_const(*v);
    }

    // (u^v)^x -> u^(v*x) when safe
    if (base.kind() == Kind::Pow) {
        const Expr& u = base.kids()[0];
        const Expr& v = base.kids()[1];
        bool outer_int = exp.is_integer_const();
        bool inner_int_pos_base =
            v.is_integer_const() && u.is_const() && u.value().sign() > 0;
        if (outer_int || inner_int_pos_base || surely_positive(u)) {
            return pow_rule(u, norm_rec(make_mul({v, exp})));
        }
    }

    if (base.kind() == Kind::Mul && exp.is_integer_const()) {
        std::vector<Expr> fs;
        for (const auto& f : base.kids()) fs.push_back(pow_rule(f, exp));
        return normalize_mul(std::move(fs));
    }

    if (base.kind() == Kind::Add && exp.is_integer_const() && exp.value().fits_long()) {
        long k = exp.value().to_long();
        long a = k < 0 ? -k : k;
        if (a >= 2 && a <= kExpandCap) {
            Expr acc = base;
            for (long i = 1; i < a; ++i) acc = normalize_mul({acc, base});
            if (k > 0) return acc;
            return make_pow(acc, make_const(-1));
        }
        if (k < 0 && a == 1) return make_pow(base, make_const(-1));
    }

    if (base.is_const() && base.value().sign() > 0 && !base.value().is_one()) {
        if (auto collapsed = exp_log_collapse(base.value(), exp)) {
            Expr cand = *collapsed;
            if (!equals(cand, make_pow(base, exp))) return cand;
        }
    }

    return make_pow(base, exp);
}

inline Expr func_rule(const std::string& name, std::vector<Expr> args) {
    if (name == "factorial" && args.size() == 1 && args[0].is_const()) {
        const Rat& v = args[0].value();
        if (v.is_integer() && v.sign() >= 0 && v.fits_long() && v.to_long() <= kFactorialFoldCap) {
            return make_const(Rat(intfn::factorial(static_cast<unsigned long>(v.to_long())), Int(1)));
        }
    }
    if (name == "binomial" && args.size() == 2 && args[1].is_integer_const() &&
        args[1].value().fits_long()) {
        long k = args[1].value().to_long();
        if (k < 0) return make_const(0);
        if (k <= kExpandCap) {
            // binomial(a, k) = a*(a-1)*...*(a-k+1) / k!
            std::vector<Expr> fs{make_const(Rat(Int(1), intfn::factorial(static_cast<unsigned long>(k))))};
            for (long i = 0; i < k; ++i) {
                fs.push_back(norm_rec(make_add({args[0], make_const(-i)})));
            }
            return normalize_mul(std::move(fs));
        }
    }
    if (name == "log" && args.size() == 1) {
        const Expr& a = args[0];
        if (a.is_const() && a.value().sign() > 0) return log_of_const(a.value());
        if (a.kind() == Kind::Pow && surely_positive(a.kids()[0])) {
            return norm_rec(make_mul({a.kids()[1], make_log(a.kids()[0])}));
        }
        if (a.kind() == Kind::Mul && surely_positive(a)) {
            std::vector<Expr> terms;
            for (const auto& f : a.kids()) terms.push_back(make_log(f));
            return normalize_add(std::move(terms));
        }
    }
    return make_func(name, std::move(args));
}

// factorial(u)/factorial(v) with literal integer u - v resolves to a product
// of linear factors; returns extra factors to multiply in, or false.
struct Entry {
    Expr base;
    Expr exp;
};

inline bool factorial_pass(std::vector<Entry>& entries, std::vector<Expr>& extra) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].base.kind() != Kind::Func || entries[i].base.name() != "factorial") continue;
        if (!entries[i].exp.is_integer_const()) continue;
        int si = entries[i].exp.value().sign();
        if (si == 0) continue;
        for (std::size_t j = 0; j < entries.size(); ++j) {
            if (i == j) continue;
            if (entries[j].base.kind() != Kind::Func || entries[j].base.name() != "factorial") continue;
            if (!entries[j].exp.is_integer_const()) continue;
            int sj = entries[j].exp.value().sign();
            if (sj >= 0 || si <= 0) continue;  // want i positive, j negative
            Expr u = entries[i].base.kids()[0];
            Expr v = entries[j].base.kids()[0];
            Expr delta = norm_rec(make_add({u, make_mul({make_const(-1), v})}));
            if (!delta.is_integer_const() || !delta.value().fits_long()) continue;
            long d = delta.value().to_long();
            if (d == 0 || d > kExpandCap || d < -kExpandCap) continue;
            if (d > 0) {
                for (long t = 1; t <= d; ++t) extra.push_back(norm_rec(make_add({v, make_const(t)})));
            } else {
                for (long t = 1; t <= -d; ++t) {
                    extra.push_back(make_pow(norm_rec(make_add({u, make_const(t)})), make_const(-1)));
                }
            }
            entries[i].exp = make_const(entries[i].exp.value() - Rat(1));
            entries[j].exp = make_const(entries[j].exp.value() + Rat(1));
            return true;
        }
    }
    return false;
}

inline Expr normalize_mul(std::vector<Expr> factors) {
    // flatten
    std::vector<Expr> flat;
    for (auto& f : factors) {
        if (f.kind() == Kind::Mul) {
            for (const auto& k : f.kids()) flat.push_back(k);
        } else {
            flat.push_back(f);
        }
    }
    // group same bases first so that (k+1) * (k+1)^(-1) cancels before any
    // distribution can spread the factors apart
    Rat coeff(1);
    std::map<Expr, std::vector<Expr>, ExprLess> grouped;
    for (const auto& f : flat) {
        if (f.kind() == Kind::Const) {
            coeff = coeff * f.value();
        } else if (f.kind() == Kind::Pow) {
            grouped[f.kids()[0]].push_back(f.kids()[1]);
        } else {
            grouped[f].push_back(make_const(1));
        }
    }
    if (coeff.is_zero()) return make_const(0);

    std::vector<Entry> entries;
    std::vector<const Expr*> to_distribute;  // Add factors with positive literal exponents
    for (auto& [base, exps] : grouped) {
        Expr e = exps.size() == 1 ? exps[0] : norm_rec(make_add(exps));
        if (e.is_zero()) continue;
        if (base.is_const() && e.is_const()) {
            if (auto v = fold_const_pow(base.value(), e.value())) {
                coeff = coeff * *v;
                continue;
            }
        }
        entries.push_back({base, e});
    }
    if (coeff.is_zero()) return make_const(0);

    // distribution of sums: expand every Add base carrying a positive literal
    // integer exponent, then take the cartesian product over their terms
    {
        std::vector<Expr> adds, rest{make_const(coeff)};
        for (const auto& en : entries) {
            if (en.base.kind() == Kind::Add && en.exp.is_integer_const() &&
                en.exp.value().sign() > 0 && en.exp.value() <= Rat(kExpandCap)) {
                long m = en.exp.value().to_long();
                for (long i = 0; i < m; ++i) adds.push_back(en.base);
            } else {
                rest.push_back(en.exp.is_one() ? en.base : make_pow(en.base, en.exp));
            }
        }
        if (!adds.empty()) {
            std::vector<Expr> out{make_mul(std::move(rest))};
            for (const auto& a : adds) {
                std::vector<Expr> next;
                for (const auto& partial : out) {
                    for (const auto& term : a.kids()) {
                        next.push_back(normalize_mul({partial, term}));
                    }
                }
                out = std::move(next);
            }
            return normalize_add(std::move(out));
        }
    }

    std::vector<Expr> extra;
    while (factorial_pass(entries, extra)) {}
    if (!extra.empty()) {
        std::vector<Expr> redo{make_const(coeff)};
        for (const auto& en : entries) {
            if (en.exp.is_zero()) continue;
            redo.push_back(en.exp.is_one() ? en.base : make_pow(en.base, en.exp));
        }
        for (const auto& x : extra) redo.push_back(x);
        return normalize_mul(std::move(redo));
    }

    // absorb coefficient content into literal-base exponentials: 2*2^n -> 2^(n+1);
    // applies equally to fold-declined literal exponents (3*3^4094 -> 3^4095)
    for (auto& en : entries) {
        if (!en.base.is_const()) continue;
        Rat b = en.base.value();
        if (b.is_zero() || b.abs().is_one()) continue;
        Rat ab = b.abs();
        if (coeff.abs().is_one()) continue;
        if (!factorable_size(ab) || !factorable_size(coeff)) continue;
        long j = 0;
        bool first = true;
        auto consider = [&](const Int& p, long vb) {
            long vc = ratfn::valuation(coeff, p);
            long q = Rat(Int(vc), Int(vb)).floor().get_si();
            if (first || q < j) { j = q; first = false; }
        };
        for (const auto& [p, v] : intfn::factorize(ab.num())) consider(p, v);
        for (const auto& [p, v] : intfn::factorize(ab.den())) consider(p, -v);
        if (first || j == 0) continue;
        coeff = coeff / b.pow_int(j);
        en.exp = norm_rec(make_add({en.exp, make_const(j)}));
        if (en.exp.is_zero()) en.exp = make_const(0);  // handled below
    }

    std::vector<Expr> out;
    for (const auto& en : entries) {
        if (en.exp.is_zero()) continue;
        out.push_back(en.exp.is_one() ? en.base : make_pow(en.base, en.exp));
    }
    std::sort(out.begin(), out.end(), ExprLess{});
    if (out.empty()) return make_const(coeff);
    if (!coeff.is_one()) out.insert(out.begin(), make_const(coeff));
    return make_mul(std::move(out));
}

inline Expr normalize_add(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    for (auto& t : terms) {
        if (t.kind() == Kind::Add) {
            for (const auto& k : t.kids()) flat.push_back(k);
        } else {
            flat.push_back(t);
        }
    }
    struct KeyLess {
        bool operator()(const std::vector<Expr>& a, const std::vector<Expr>& b) const {
            return compare_lists(a, b) < 0;
        }
    };
    std::map<std::vector<Expr>, Rat, KeyLess> collected;
    for (const auto& t : flat) {
        if (t.is_zero()) continue;
        TermParts p = split_term(t);
        auto [it, fresh] = collected.emplace(std::move(p.factors), p.coeff);
        if (!fresh) it->second += p.coeff;
    }
    std::vector<std::pair<std::vector<Expr>, Rat>> items;
    for (auto& [k, c] : collected) {
        if (!c.is_zero()) items.emplace_back(k, c);
    }
    // dominant factors first, constants last
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        int c = compare_lists(a.first, b.first);
        if (c != 0) return c > 0;
        return a.second > b.second;
    });
    std::vector<Expr> out;
    for (auto& [key, c] : items) {
        std::vector<Expr> fs{make_const(c)};
        for (const auto& f : key) fs.push_back(f);
        Expr t = normalize_mul(std::move(fs));
        if (!t.is_zero()) out.push_back(t);
    }
    if (out.empty()) return make_const(0);
    return make_add(std::move(out));
}

inline Expr norm_rec(const Expr& e) {
    switch (e.kind()) {
        case Kind::Const:
        case Kind::Symbol:
            return e;
        case Kind::Add: {
            std::vector<Expr> kids;
            for (const auto& k : e.kids()) kids.push_back(norm_rec(k));
            return normalize_add(std::move(kids));
        }
        case Kind::Mul: {
            std::vector<Expr> kids;
            for (const auto& k : e.kids()) kids.push_back(norm_rec(k));
            return normalize_mul(std::move(kids));
        }
        case Kind::Pow:
            return pow_rule(norm_rec(e.kids()[0]), norm_rec(e.kids()[1]));
        case Kind::Func: {
            std::vector<Expr> kids;
            for (const auto& k : e.kids()) kids.push_back(norm_rec(k));
            return func_rule(e.name(), std::move(kids));
        }
        case Kind::Unknown: {
            std::vector<Expr> kids;
            for (const auto& k : e.kids()) kids.push_back(norm_rec(k));
            return make_unknown(e.name(), std::move(kids));
        }
    }
    return e;
}

}  // namespace detail

inline Expr normalize(const Expr& e) {
    Expr cur = e;
    for (int i = 0; i < 10; ++i) {
        Expr next = detail::norm_rec(cur);
        if (equals(next, cur)) return cur;
        cur = next;
    }
    return cur;
}

}  // namespace recsolve
