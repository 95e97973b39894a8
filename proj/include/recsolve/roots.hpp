#pragma once

// Root machinery for rational-coefficient polynomials: exact rational roots
// with multiplicity, quadratic surd roots, square-free decomposition, and
// bisection-based isolation of the unique positive real root.

#include "recsolve/error.hpp"
#include "recsolve/poly.hpp"

#include <algorithm>
#include <vector>

namespace recsolve {

struct RootInterval {
    Rat lo, hi;
    Poly poly;
    Rat width() const { return hi - lo; }
    bool is_point() const { return lo == hi; }
};

// 1 + max |a_i / a_lead|: every complex root has modulus below this
inline Rat cauchy_bound(const Poly& p) {
    if (p.is_zero()) throw Error(Err::DomainError, "cauchy bound of zero poly");
    Rat lead = p.lc().abs();
    Rat m(0);
    for (auto& [d, c] : p.coeffs()) {
        if (d == p.degree()) continue;
        Rat q = c.abs() / lead;
        if (q > m) m = q;
    }
    return m + Rat(1);
}

// Exactly the rational roots of p, repeated per multiplicity, ascending.
// Candidates come from divisors of the extreme coefficients of the integer
// normalization; multiplicity by repeated exact division.
inline std::vector<Rat> rational_roots(Poly p) {
    if (p.is_zero()) throw Error(Err::DomainError, "rational_roots of zero poly");
    std::vector<Rat> out;
    // strip x^k
    long low = p.coeffs().begin()->first;
    if (low > 0) {
        Poly q;
        for (auto& [d, c] : p.coeffs()) q.set(d - low, c);
        for (long i = 0; i < low; ++i) out.push_back(Rat(0));
        p = q;
    }
    if (p.degree() == 0) {
        std::sort(out.begin(), out.end());
        return out;
    }
    // clear denominators
    Int den(1);
    for (auto& [d, c] : p.coeffs()) {
        Int g = intfn::gcd(den, c.den());
        den = den / g * c.den();
    }
    std::vector<Int> ic(p.degree() + 1, Int(0));
    for (auto& [d, c] : p.coeffs()) ic[d] = c.num() * (den / c.den());
    Int a0 = ic.front(), an = ic.back();
    for (const Int& pn : intfn::divisors(a0)) {
        for (const Int& qd : intfn::divisors(an)) {
            if (intfn::gcd(pn, qd) != 1) continue;
            for (int s : {1, -1}) {
                Rat cand(s * pn, qd);
                if (!p.eval(cand).is_zero()) continue;
                Poly lin;
                lin.set(1, Rat(1));
                lin.set(0, -cand);
                while (true) {
                    auto [q, r] = p.divmod(lin);
                    if (!r.is_zero()) break;
                    out.push_back(cand);
                    p = q;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Bisection on [0, cauchy bound]. Precondition: exactly one positive real
// root (verified through the sign change); exact rational roots are returned
// as point intervals.
inline RootInterval isolate_positive_root(const Poly& p, const Rat& width) {
    if (p.is_zero() || width.sign() <= 0)
        throw Error(Err::DomainError, "isolate_positive_root: bad input");
    // a unique exact rational root short-circuits the search
    std::vector<Rat> pos;
    for (const Rat& r : rational_roots(p)) {
        if (r.sign() > 0 && (pos.empty() || pos.back() != r)) pos.push_back(r);
    }
    if (pos.size() == 1) return RootInterval{pos[0], pos[0], p};

    Rat lo(0), hi = cauchy_bound(p);
    Rat flo = p.eval(lo), fhi = p.eval(hi);
    if (flo.is_zero()) {
        // 0 is a root; positive root search starts just above it
        lo = Rat(1, 1024);
        flo = p.eval(lo);
    }
    if (flo.sign() == 0 || fhi.sign() == 0 || flo.sign() == fhi.sign())
        throw Error(Err::NoSignChange, "no sign change on (0, " + hi.to_string() + "]");
    // refine past the request so the enclosure hugs the root, not the grid
    Rat target = width / Rat(4);
    while (hi - lo > target) {
        Rat mid = (lo + hi) / Rat(2);
        Rat fm = p.eval(mid);
        if (fm.is_zero()) return RootInterval{mid, mid, p};
        if (fm.sign() == flo.sign()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return RootInterval{lo, hi, p};
}

// Yun square-free decomposition: p = prod out[i].first ^ out[i].second
inline std::vector<std::pair<Poly, int>> squarefree_decompose(const Poly& p) {
    std::vector<std::pair<Poly, int>> out;
    if (p.degree() <= 0) return out;
    Poly a = p.monic();
    Poly g = poly_gcd(a, a.derivative());
    if (g.degree() == 0) {
        out.push_back({a, 1});
        return out;
    }
    Poly b = a.divexact(g);
    Poly c = a.derivative().divexact(g);
    Poly d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        Poly f = poly_gcd(b, d);
        if (f.degree() > 0) out.push_back({f.monic(), i});
        b = b.divexact(f);
        c = d.divexact(f);
        d = c - b.derivative();
        ++i;
    }
    return out;
}

// Roots of a monic quadratic over Q as exact surds, if real.
inline std::optional<std::pair<Quad, Quad>> quadratic_roots(const Poly& q) {
    if (q.degree() != 2) return std::nullopt;
    Rat a = q.coeff(2), b = q.coeff(1), c = q.coeff(0);
    Rat disc = b * b - Rat(4) * a * c;
    if (disc.sign() < 0) return std::nullopt;  // complex pair
    Quad sq = quadfn::sqrt_rat(disc);
    Quad half = Quad(Rat(1) / (Rat(2) * a));
    Quad r1 = (Quad(-b) + sq) * half;
    Quad r2 = (Quad(-b) - sq) * half;
    return std::make_pair(r1, r2);
}

}  // namespace recsolve
