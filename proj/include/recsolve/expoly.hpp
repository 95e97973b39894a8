#pragma once

// Exponential polynomials sum_i p_i(n) * base_i^n in canonical form: distinct
// bases, nonzero coefficient polynomials, terms sorted. Bases are exact
// rationals or quadratic surds; the public conversion requires positive
// bases, the signed variant (used by the verifier and the solvers) admits
// negative ones, where the family is still linearly independent.

#include "recsolve/error.hpp"
#include "recsolve/eval.hpp"
#include "recsolve/expr.hpp"
#include "recsolve/normalize.hpp"
#include "recsolve/poly.hpp"

#include <string>
#include <vector>

namespace recsolve {

// total order on bases: rationals first, then by radicand, value order within
inline bool base_less(const Quad& a, const Quad& b) {
    if (a.radicand() != b.radicand()) return a.radicand() < b.radicand();
    return a < b;
}

struct ExpTerm {
    Quad base;
    PolyQ poly;
};

struct ExpPoly {
    std::string var;
    std::vector<ExpTerm> terms;

    bool is_zero() const { return terms.empty(); }

    const PolyQ* poly_for(const Quad& base) const {
        for (const auto& t : terms) {
            if (t.base == base) return &t.poly;
        }
        return nullptr;
    }

    void add_term(const Quad& base, const PolyQ& p) {
        if (p.is_zero()) return;
        for (auto& t : terms) {
            if (t.base == base) {
                t.poly = t.poly + p;
                return;
            }
        }
        terms.push_back({base, p});
    }

    void canonicalize() {
        std::vector<ExpTerm> out;
        for (auto& t : terms) {
            if (t.poly.is_zero()) continue;
            out.push_back(t);
        }
        std::sort(out.begin(), out.end(),
                  [](const ExpTerm& x, const ExpTerm& y) { return base_less(x.base, y.base); });
        terms = std::move(out);
    }

    ExpPoly operator+(const ExpPoly& o) const {
        ExpPoly r = *this;
        for (const auto& t : o.terms) r.add_term(t.base, t.poly);
        r.canonicalize();
        return r;
    }

    ExpPoly scaled(const Quad& s) const {
        ExpPoly r{var, {}};
        if (s.is_zero()) return r;
        for (const auto& t : terms) r.terms.push_back({t.base, t.poly * s});
        return r;
    }

    ExpPoly operator-(const ExpPoly& o) const { return *this + o.scaled(Quad(Rat(-1))); }

    // substitute var -> var + off (integer offset)
    ExpPoly shifted(long off) const {
        ExpPoly r{var, {}};
        for (const auto& t : terms) {
            r.add_term(t.base, t.poly.shift(Quad(Rat(off))) * t.base.pow_int(off));
        }
        r.canonicalize();
        return r;
    }

    Quad eval_at(long n) const {
        Quad acc(Rat(0));
        for (const auto& t : terms) acc += t.poly.eval(Quad(Rat(n))) * t.base.pow_int(n);
        return acc;
    }

    bool operator==(const ExpPoly& o) const {
        if (terms.size() != o.terms.size()) return false;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (!(terms[i].base == o.terms[i].base) || terms[i].poly != o.terms[i].poly)
                return false;
        }
        return true;
    }
};

inline ExpPoly expoly_zero(const std::string& var) { return ExpPoly{var, {}}; }

inline ExpPoly expoly_from_poly(const std::string& var, const PolyQ& p) {
    ExpPoly xp{var, {}};
    xp.add_term(Quad(Rat(1)), p);
    xp.canonicalize();
    return xp;
}

namespace detail {

// exponent as a*var + b with rational a, b
inline bool linear_in(const Expr& x, const std::string& var, Rat& a, Rat& b) {
    a = Rat(0);
    b = Rat(0);
    for (const auto& term : add_terms(x)) {
        TermParts tp = split_term(term);
        if (tp.factors.empty()) {
            b += tp.coeff;
        } else if (tp.factors.size() == 1 && tp.factors[0].kind() == Kind::Symbol &&
                   tp.factors[0].name() == var) {
            a += tp.coeff;
        } else {
            return false;
        }
    }
    return true;
}

inline Quad quad_pow_rat(const Quad& base, const Rat& e) {
    if (e.is_integer()) {
        if (!e.fits_long()) throw Error(Err::NotExpPoly, "exponent too large");
        return base.pow_int(e.to_long());
    }
    if (!base.is_rational()) throw Error(Err::NotExpPoly, "surd base with fractional exponent");
    if (!e.den().fits_ulong_p() || !e.num().fits_slong_p())
        throw Error(Err::NotExpPoly, "exponent too large");
    Rat powed = base.as_rat().pow_int(e.num().get_si());
    auto r = quadfn::root_rat(powed, e.den().get_ui());
    if (!r) throw Error(Err::NotExpPoly, "irrational base power");
    return *r;
}

}  // namespace detail

// Conversion to canonical exponential-polynomial form. Throws NotExpPoly when
// the expression leaves the family (logs, factorials, unknowns, symbolic
// parameters, var-dependent bases, non-positive bases unless allow_signed).
inline ExpPoly to_expoly(const Expr& input, const std::string& var, bool allow_signed = false) {
    Expr e = normalize(input);
    ExpPoly xp{var, {}};
    for (const auto& term : detail::add_terms(e)) {
        if (term.is_zero()) continue;
        detail::TermParts tp = detail::split_term(term);
        Quad coeff{tp.coeff};
        Quad base{Rat(1)};
        long deg = 0;
        for (const auto& f : tp.factors) {
            if (f.kind() == Kind::Symbol) {
                if (f.name() != var)
                    throw Error(Err::NotExpPoly, "symbolic parameter '" + f.name() + "'");
                deg += 1;
                continue;
            }
            if (f.kind() == Kind::Pow) {
                const Expr& B = f.kids()[0];
                const Expr& X = f.kids()[1];
                if (B.kind() == Kind::Symbol && B.name() == var) {
                    if (!X.is_integer_const() || X.value().sign() < 0 || !X.value().fits_long())
                        throw Error(Err::NotExpPoly, "non-monomial power of the variable");
                    deg += X.value().to_long();
                    continue;
                }
                if (contains_symbol(B, var))
                    throw Error(Err::NotExpPoly, "variable inside a base");
                Quad Bq;
                try {
                    Bq = eval_quad(B, {});
                } catch (const Error&) {
                    throw Error(Err::NotExpPoly, "base is not a numeric constant");
                } catch (const SurdMixError&) {
                    throw Error(Err::NotExpPoly, "mixed surds in base");
                }
                Rat a, b;
                if (!detail::linear_in(X, var, a, b))
                    throw Error(Err::NotExpPoly, "exponent not linear in the variable");
                if (Bq.is_zero()) throw Error(Err::NotExpPoly, "zero base");
                base *= detail::quad_pow_rat(Bq, a);
                coeff *= detail::quad_pow_rat(Bq, b);
                continue;
            }
            // any other factor must be a numeric constant
            if (contains_symbol(f, var) || f.kind() == Kind::Func || f.kind() == Kind::Unknown)
                throw Error(Err::NotExpPoly, "factor outside the exponential polynomial family");
            try {
                coeff *= eval_quad(f, {});
            } catch (const Error&) {
                throw Error(Err::NotExpPoly, "factor is not a numeric constant");
            }
        }
        if (base.sign() < 0 && !allow_signed)
            throw Error(Err::NotExpPoly, "non-positive base");
        if (base.is_zero()) throw Error(Err::NotExpPoly, "zero base");
        xp.add_term(base, PolyQ::monomial(deg, coeff));
    }
    xp.canonicalize();
    return xp;
}

inline Expr polyq_to_expr(const PolyQ& p, const std::string& var) {
    std::vector<Expr> terms;
    for (auto& [d, c] : p.coeffs()) {
        std::vector<Expr> fs{quad_to_expr(c)};
        if (d == 1) fs.push_back(make_symbol(var));
        else if (d > 1) fs.push_back(make_pow(make_symbol(var), make_const(d)));
        terms.push_back(make_mul(std::move(fs)));
    }
    return make_add(std::move(terms));
}

inline Expr expoly_to_expr(const ExpPoly& xp) {
    std::vector<Expr> terms;
    for (const auto& t : xp.terms) {
        Expr p = polyq_to_expr(t.poly, xp.var);
        if (t.base.is_one()) {
            terms.push_back(p);
        } else {
            Expr b = quad_to_expr(t.base);
            terms.push_back(make_mul({p, make_pow(b, make_symbol(xp.var))}));
        }
    }
    return normalize(make_add(std::move(terms)));
}

}  // namespace recsolve
