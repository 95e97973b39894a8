#pragma once

// Closed forms for symbolic sums and products: exponential-polynomial
// summation (geometric-with-polynomial and Faulhaber cases), Gosper's
// algorithm for hypergeometric antidifferences, and products of rational
// functions that factor into integer-rooted linear pieces.

#include "recsolve/error.hpp"
#include "recsolve/expoly.hpp"
#include "recsolve/linalg.hpp"
#include "recsolve/normalize.hpp"
#include "recsolve/poly.hpp"
#include "recsolve/roots.hpp"

#include <optional>
#include <string>

namespace recsolve {

// ---- rational-function extraction ------------------------------------------

inline std::optional<Poly> expr_to_poly(const Expr& input, const std::string& var) {
    Expr e = normalize(input);
    Poly out;
    for (const auto& term : detail::add_terms(e)) {
        if (term.is_zero()) continue;
        detail::TermParts tp = detail::split_term(term);
        long deg = 0;
        for (const auto& f : tp.factors) {
            if (f.kind() == Kind::Symbol && f.name() == var) {
                deg += 1;
            } else if (f.kind() == Kind::Pow && f.kids()[0].kind() == Kind::Symbol &&
                       f.kids()[0].name() == var && f.kids()[1].is_integer_const() &&
                       f.kids()[1].value().sign() > 0 && f.kids()[1].value().fits_long()) {
                deg += f.kids()[1].value().to_long();
            } else {
                return std::nullopt;
            }
        }
        out.set(deg, out.coeff(deg) + tp.coeff);
    }
    return out;
}

struct RatPoly {
    Poly num, den;  // den monic, gcd(num, den) = 1
};

inline std::optional<RatPoly> expr_to_ratpoly(const Expr& input, const std::string& var) {
    Expr e = normalize(input);
    std::vector<std::pair<Poly, Poly>> parts;  // per-term num/den
    for (const auto& term : detail::add_terms(e)) {
        if (term.is_zero()) continue;
        detail::TermParts tp = detail::split_term(term);
        Poly num(tp.coeff), den(Rat(1));
        for (const auto& f : tp.factors) {
            Expr base = f;
            long ex = 1;
            if (f.kind() == Kind::Pow) {
                if (!f.kids()[1].is_integer_const() || !f.kids()[1].value().fits_long())
                    return std::nullopt;
                base = f.kids()[0];
                ex = f.kids()[1].value().to_long();
            }
            auto bp = expr_to_poly(base, var);
            if (!bp || bp->is_zero()) return std::nullopt;
            for (long i = 0; i < (ex < 0 ? -ex : ex); ++i) {
                if (ex > 0) num = num * *bp;
                else den = den * *bp;
            }
        }
        parts.push_back({num, den});
    }
    Poly N(Rat(0)), D(Rat(1));
    for (auto& [n, d] : parts) {
        N = N * d + n * D;
        D = D * d;
    }
    if (N.is_zero()) return RatPoly{Poly(Rat(0)), Poly(Rat(1))};
    Poly g = poly_gcd(N, D);
    if (g.degree() > 0) {
        N = N.divexact(g);
        D = D.divexact(g);
    }
    Rat lc = D.lc();
    N = N * (Rat(1) / lc);
    D = D * (Rat(1) / lc);
    return RatPoly{N, D};
}

inline Expr poly_to_expr(const Poly& p, const std::string& var) {
    std::vector<Expr> terms;
    for (auto& [d, c] : p.coeffs()) {
        std::vector<Expr> fs{make_const(c)};
        if (d == 1) fs.push_back(make_symbol(var));
        else if (d > 1) fs.push_back(make_pow(make_symbol(var), make_const(d)));
        terms.push_back(make_mul(std::move(fs)));
    }
    return normalize(make_add(std::move(terms)));
}

// ---- exponential polynomial summation --------------------------------------

namespace detail {

// F with F(m) = sum_{k=0}^{m} p(k) alpha^k and F(-1) = 0, as an ExpPoly in m
inline ExpPoly antidiff_upto(const Quad& alpha, const PolyQ& p, const std::string& var) {
    ExpPoly F{var, {}};
    if (alpha.is_one()) {
        // Faulhaber by exact interpolation: degree deg(p)+1 through m = 0..deg+1
        long d = p.degree();
        std::vector<std::pair<Quad, Quad>> pts;
        Quad acc(Rat(0));
        for (long m = 0; m <= d + 1; ++m) {
            acc += p.eval(Quad(Rat(m)));
            pts.push_back({Quad(Rat(m)), acc});
        }
        F.add_term(Quad(Rat(1)), interpolate(pts));
        F.canonicalize();
        return F;
    }
    // u(m) - u(m-1)/alpha = p(m), deg u = deg p; then F = u*alpha^m + C
    long d = p.degree();
    Quad inva = Quad(Rat(1)) / alpha;
    std::vector<std::vector<Quad>> A(d + 1, std::vector<Quad>(d + 1, Quad(Rat(0))));
    std::vector<Quad> rhs(d + 1, Quad(Rat(0)));
    for (long j = 0; j <= d; ++j) {
        PolyQ contrib = PolyQ::monomial(j, Quad(Rat(1)));
        contrib = contrib - PolyQ::monomial(j, Quad(Rat(1))).shift(Quad(Rat(-1))) * inva;
        for (long i = 0; i <= d; ++i) A[i][j] = contrib.coeff(i);
    }
    for (long i = 0; i <= d; ++i) rhs[i] = p.coeff(i);
    auto sol = solve_linear(A, rhs);
    if (!sol.consistent) throw Error(Err::Internal, "sum_expoly: singular system");
    PolyQ u;
    for (long j = 0; j <= d; ++j) u.set(j, sol.x[j]);
    Quad C = p.eval(Quad(Rat(0))) - u.eval(Quad(Rat(0)));
    F.add_term(alpha, u);
    F.add_term(Quad(Rat(1)), PolyQ(C));
    F.canonicalize();
    return F;
}

}  // namespace detail

// Exact closed form of sum_{k=lo}^{out_var + hi_off} xp(k), an ExpPoly in
// out_var. Empty ranges contribute zero by the F(hi) - F(lo-1) convention.
inline ExpPoly sum_expoly(const ExpPoly& xp, long lo, const std::string& out_var,
                          long hi_off = 0) {
    ExpPoly total{out_var, {}};
    for (const auto& t : xp.terms) {
        ExpPoly F = detail::antidiff_upto(t.base, t.poly, out_var);
        ExpPoly Fhi = hi_off == 0 ? F : F.shifted(hi_off);
        Fhi.var = out_var;
        Quad Flo = F.eval_at(lo - 1);
        total = total + Fhi;
        total.add_term(Quad(Rat(1)), PolyQ(-Flo));
    }
    total.canonicalize();
    return total;
}

// ---- Gosper's algorithm ------------------------------------------------------

struct GosperResult {
    bool summable = false;
    Expr antidifference;    // S with S(k) - S(k-1) = t(k)
    std::string certificate;  // why not, when !summable
};

// antidifference of a hypergeometric term t(k); throws NotHypergeometric when
// t(k+1)/t(k) is not a rational function of k
inline GosperResult gosper(const Expr& t, const std::string& k) {
    Expr kp1 = normalize(make_add({make_symbol(k), make_const(1)}));
    Expr tshift = normalize(substitute(t, k, kp1));
    Expr ratio = normalize(make_mul({tshift, make_pow(t, make_const(-1))}));
    auto rp = expr_to_ratpoly(ratio, k);
    if (!rp || rp->num.is_zero())
        throw Error(Err::NotHypergeometric, "term ratio is not rational in " + k);

    Poly a = rp->num, b = rp->den, c(Rat(1));
    // normalize so gcd(a(k), b(k+j)) = 1 for every j >= 0
    Rat bound = cauchy_bound(a) + cauchy_bound(b);
    long J = bound.ceil().fits_slong_p() ? bound.ceil().get_si() : 64;
    for (long j = 0; j <= J; ++j) {
        Poly g = poly_gcd(a, b.shift(Rat(j)));
        if (g.degree() <= 0) continue;
        a = a.divexact(g);
        b = b.divexact(g.shift(Rat(-j)));
        for (long i = 1; i <= j; ++i) c = c * g.shift(Rat(-i));
    }

    // solve a(k) x(k+1) - b(k-1) x(k) = c(k) over polynomials
    Poly bm = b.shift(Rat(-1));
    Poly s = a - bm;
    long degA = std::max(a.degree(), bm.degree());
    long d;
    if (s.degree() == degA) {
        d = c.degree() - degA;
    } else {
        long d1 = c.degree() - (degA - 1);
        Rat top = s.coeff(degA - 1);
        Rat cand = -top / a.lc();
        long d2 = -1;
        if (cand.is_integer() && cand.sign() >= 0 && cand.fits_long()) d2 = cand.to_long();
        d = std::max(d1, d2);
    }
    if (d < 0) {
        GosperResult r;
        r.certificate = "degree bound " + std::to_string(d) + " rules out a polynomial solution";
        return r;
    }

    long maxdeg = std::max(a.degree() + d, std::max(bm.degree() + d, c.degree()));
    std::vector<std::vector<Rat>> A(maxdeg + 1, std::vector<Rat>(d + 1, Rat(0)));
    std::vector<Rat> rhs(maxdeg + 1, Rat(0));
    for (long j = 0; j <= d; ++j) {
        Poly contrib = a * Poly::monomial(j, Rat(1)).shift(Rat(1)) - bm * Poly::monomial(j, Rat(1));
        for (long i = 0; i <= maxdeg; ++i) A[i][j] = contrib.coeff(i);
    }
    for (long i = 0; i <= maxdeg; ++i) rhs[i] = c.coeff(i);
    auto sol = solve_linear(A, rhs);
    if (!sol.consistent) {
        GosperResult r;
        r.certificate = "coefficient system for the polynomial certificate is inconsistent";
        return r;
    }
    Poly x;
    for (long j = 0; j <= d; ++j) x.set(j, sol.x[j]);

    // S(k) = b(k) x(k+1) t(k+1) / c(k+1)
    Expr xk1 = poly_to_expr(x.shift(Rat(1)), k);
    Expr S = normalize(make_mul({poly_to_expr(b, k), xk1, tshift,
                                 make_pow(poly_to_expr(c.shift(Rat(1)), k), make_const(-1))}));
    GosperResult r;
    r.summable = true;
    r.antidifference = S;
    return r;
}

// ---- products ---------------------------------------------------------------

// Exact closed form of prod_{k=lo}^{out_var + hi_off} a(k) in factorial
// ratios and powers. a must be a rational function of k whose numerator and
// denominator split into integer-rooted linear factors below lo.
inline Expr product_closed(const Expr& a, const std::string& k, long lo,
                           const std::string& out_var, long hi_off = 0) {
    Expr hi_expr = normalize(make_add({make_symbol(out_var), make_const(hi_off)}));
    Expr count = normalize(make_add({make_symbol(out_var), make_const(hi_off - lo + 1)}));
    if (!contains_symbol(a, k)) {
        // constant factor (possibly symbolic): prod = a^count
        return normalize(make_pow(a, count));
    }
    auto rp = expr_to_ratpoly(a, k);
    if (!rp) throw Error(Err::NotFactorable, "factor is not a rational function of " + k);
    if (rp->num.is_zero()) return make_const(0);

    auto piece = [&](const Poly& p, bool inverted) -> std::vector<Expr> {
        std::vector<Expr> fs;
        Poly monic = p.monic();
        if (monic.degree() > 0) {
            std::vector<Rat> roots = rational_roots(monic);
            if (static_cast<long>(roots.size()) != monic.degree())
                throw Error(Err::NotFactorable, "irreducible polynomial factor of degree > 1");
            for (const Rat& r : roots) {
                if (!r.is_integer() || !r.fits_long())
                    throw Error(Err::NotFactorable, "non-integer rational root " + r.to_string());
                long ri = r.to_long();
                if (ri >= lo)
                    throw Error(Err::NotFactorable,
                                "factor vanishes inside the product range at k=" + std::to_string(ri));
                // prod_{k=lo}^{H} (k - r) = (H - r)! / (lo - 1 - r)!
                Expr top = make_func("factorial", {normalize(make_add({hi_expr, make_const(-ri)}))});
                Expr bot = make_func("factorial", {make_const(lo - 1 - ri)});
                Expr f = normalize(make_mul({top, make_pow(bot, make_const(-1))}));
                fs.push_back(inverted ? make_pow(f, make_const(-1)) : f);
            }
        }
        Rat lc = p.lc();
        if (!lc.is_one()) {
            Expr cpow = make_pow(make_const(inverted ? Rat(1) / lc : lc), count);
            fs.push_back(cpow);
        }
        return fs;
    };

    std::vector<Expr> fs = piece(rp->num, false);
    for (auto& f : piece(rp->den, true)) fs.push_back(f);
    if (fs.empty()) return make_const(1);
    return normalize(make_mul(std::move(fs)));
}

}  // namespace recsolve
