#pragma once

// Exact evaluation of expression trees. eval_exact produces a rational and
// rejects anything irrational; eval_quad additionally tolerates one square
// root, so closed forms with quadratic surd bases evaluate exactly.

#include "recsolve/error.hpp"
#include "recsolve/expr.hpp"
#include "recsolve/quad.hpp"

#include <map>
#include <string>

namespace recsolve {

using QuadBindings = std::map<std::string, Quad>;

namespace detail {

constexpr unsigned long kEvalBitCap = 1u << 25;  // ~4 MB numbers

inline Quad eval_rec(const Expr& e, const QuadBindings& b);

inline Quad eval_pow(const Expr& base, const Expr& exp, const QuadBindings& b) {
    Quad xv = eval_rec(exp, b);
    if (!xv.is_rational()) throw Error(Err::NonIntegerExponent, "irrational exponent");
    Rat x = xv.as_rat();
    Quad bv = eval_rec(base, b);
    if (x.is_integer()) {
        if (!x.fits_long()) throw Error(Err::DomainError, "exponent too large");
        if (bv.is_rational()) {
            const Rat& br = bv.as_rat();
            if (br.is_zero() && x.sign() < 0) throw Error(Err::DomainError, "0 to negative power");
            if (!br.is_zero() && !br.abs().is_one()) {
                unsigned long bits = std::max(mpz_sizeinbase(br.num().get_mpz_t(), 2),
                                              mpz_sizeinbase(br.den().get_mpz_t(), 2));
                unsigned long m = static_cast<unsigned long>(
                    x.to_long() < 0 ? -x.to_long() : x.to_long());
                m = std::max(1ul, m);
                if (m > kEvalBitCap || bits > kEvalBitCap / m)
                    throw Error(Err::DomainError, "value too large for exact evaluation");
            }
        }
        return bv.pow_int(x.to_long());
    }
    if (!bv.is_rational()) throw Error(Err::NonIntegerExponent, "surd base with fractional exponent");
    Rat br = bv.as_rat();
    if (br.sign() < 0) throw Error(Err::NonIntegerExponent, "negative base with fractional exponent");
    if (!x.den().fits_ulong_p()) throw Error(Err::DomainError, "exponent denominator too large");
    // integer part times root part
    Int ip = x.floor();
    Rat frac = x - Rat(ip);
    if (!ip.fits_slong_p()) throw Error(Err::DomainError, "exponent too large");
    Quad whole = Quad(br).pow_int(ip.get_si());
    Rat root_base = br.pow_int(static_cast<long>(frac.num().get_ui()));
    auto root = quadfn::root_rat(root_base, frac.den().get_ui());
    if (!root) throw Error(Err::DomainError, "irrational value in exact evaluation");
    return whole * *root;
}

inline Quad eval_func(const Expr& e, const QuadBindings& b) {
    const std::string& fn = e.name();
    if (fn == "factorial" && e.kids().size() == 1) {
        Quad a = eval_rec(e.kids()[0], b);
        if (!a.is_rational() || !a.as_rat().is_integer() || a.as_rat().sign() < 0)
            throw Error(Err::DomainError, "factorial of non-natural");
        if (!a.as_rat().fits_long() || a.as_rat().to_long() > 200000)
            throw Error(Err::DomainError, "factorial argument too large");
        return Quad(Rat(intfn::factorial(static_cast<unsigned long>(a.as_rat().to_long())), Int(1)));
    }
    if (fn == "binomial" && e.kids().size() == 2) {
        Quad n = eval_rec(e.kids()[0], b);
        Quad k = eval_rec(e.kids()[1], b);
        if (!n.is_rational() || !n.as_rat().is_integer() || !k.is_rational() ||
            !k.as_rat().is_integer())
            throw Error(Err::DomainError, "binomial of non-integers");
        if (k.as_rat().sign() < 0) return Quad(Rat(0));
        if (!k.as_rat().fits_long()) throw Error(Err::DomainError, "binomial arg too large");
        return Quad(Rat(intfn::binomial(n.as_rat().num(), static_cast<unsigned long>(k.as_rat().to_long())), Int(1)));
    }
    if (fn == "log" && e.kids().size() == 1) {
        Quad a = eval_rec(e.kids()[0], b);
        if (a.is_rational() && a.as_rat().sign() <= 0)
            throw Error(Err::DomainError, "log of non-positive value");
        if (a.is_one()) return Quad(Rat(0));
        throw Error(Err::DomainError, "log evaluates only symbolically");
    }
    if ((fn == "sum" || fn == "prod") && e.kids().size() == 4) {
        const Expr& body = e.kids()[0];
        if (e.kids()[1].kind() != Kind::Symbol)
            throw Error(Err::DomainError, fn + " needs a symbol iteration variable");
        const std::string& var = e.kids()[1].name();
        Quad lo = eval_rec(e.kids()[2], b);
        Quad hi = eval_rec(e.kids()[3], b);
        if (!lo.is_rational() || !lo.as_rat().is_integer() || !hi.is_rational() ||
            !hi.as_rat().is_integer())
            throw Error(Err::DomainError, fn + " bounds must be integers");
        if (!lo.as_rat().fits_long() || !hi.as_rat().fits_long())
            throw Error(Err::DomainError, fn + " bounds too large");
        long l = lo.as_rat().to_long(), h = hi.as_rat().to_long();
        Quad acc(fn == "sum" ? Rat(0) : Rat(1));
        QuadBindings inner = b;
        for (long k = l; k <= h; ++k) {
            inner[var] = Quad(Rat(k));
            Quad t = eval_rec(body, inner);
            if (fn == "sum") acc += t;
            else acc *= t;
        }
        return acc;
    }
    throw Error(Err::DomainError, "cannot evaluate call to '" + fn + "'");
}

inline Quad eval_rec(const Expr& e, const QuadBindings& b) {
    switch (e.kind()) {
        case Kind::Const:
            return Quad(e.value());
        case Kind::Symbol: {
            auto it = b.find(e.name());
            if (it == b.end()) throw Error(Err::UnboundSymbol, e.name());
            return it->second;
        }
        case Kind::Add: {
            Quad acc(Rat(0));
            for (const auto& k : e.kids()) acc += eval_rec(k, b);
            return acc;
        }
        case Kind::Mul: {
            // collect half-integer powers of rational literals so that
            // 2^(1/2)*3^(1/2) evaluates through a single radicand
            Quad acc(Rat(1));
            Rat sqrt_acc(1);
            for (const auto& k : e.kids()) {
                if (k.kind() == Kind::Pow && k.kids()[0].is_const() && k.kids()[1].is_const() &&
                    !k.kids()[1].value().is_integer() && k.kids()[1].value().den() == 2 &&
                    k.kids()[0].value().sign() > 0) {
                    Rat base = k.kids()[0].value();
                    Rat x = k.kids()[1].value();
                    Int ip = x.floor();
                    sqrt_acc *= base;  // fractional part is exactly 1/2
                    acc *= Quad(base).pow_int(ip.get_si());
                } else {
                    acc *= eval_rec(k, b);
                }
            }
            if (!sqrt_acc.is_one()) acc *= quadfn::sqrt_rat(sqrt_acc);
            return acc;
        }
        case Kind::Pow:
            return eval_pow(e.kids()[0], e.kids()[1], b);
        case Kind::Func:
            return eval_func(e, b);
        case Kind::Unknown:
            throw Error(Err::UnboundSymbol, "unknown function '" + e.name() + "' in numeric context");
    }
    throw Error(Err::Internal, "eval: bad node");
}

}  // namespace detail

using Bindings = std::map<std::string, Rat>;

inline Quad eval_quad(const Expr& e, const QuadBindings& b) { return detail::eval_rec(e, b); }

inline Rat eval_exact(const Expr& e, const Bindings& b = {}) {
    QuadBindings qb;
    for (const auto& [k, v] : b) qb.emplace(k, Quad(v));
    Quad q = detail::eval_rec(e, qb);
    if (!q.is_rational()) throw Error(Err::DomainError, "irrational value in exact evaluation");
    return q.as_rat();
}

// Quad constants as expression trees: a + b*sqrt(d)
inline Expr quad_to_expr(const Quad& q) {
    if (q.is_rational()) return make_const(q.rat_part());
    Expr surd = make_pow(make_const(Rat(q.radicand(), Int(1))), make_const(Rat(1, 2)));
    Expr term = q.surd_coeff().is_one() ? surd : make_mul({make_const(q.surd_coeff()), surd});
    if (q.rat_part().is_zero()) return term;
    return make_add({make_const(q.rat_part()), term});
}

}  // namespace recsolve
