#pragma once

// Exact solving of linear constant-coefficient recurrences: characteristic
// decomposition (rational and quadratic-surd roots with multiplicity),
// undetermined-coefficient particular solutions with resonance, initial
// condition fitting over symbolic values, order reduction, and elimination
// of systems to a single recurrence.

#include "recsolve/error.hpp"
#include "recsolve/eval.hpp"
#include "recsolve/expoly.hpp"
#include "recsolve/linalg.hpp"
#include "recsolve/normalize.hpp"
#include "recsolve/parser.hpp"
#include "recsolve/recurrence.hpp"
#include "recsolve/roots.hpp"
#include "recsolve/summation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace recsolve {

struct CharRoot {
    Quad root;
    int mult;
};

struct CharDecomposition {
    Poly charpoly;
    std::vector<CharRoot> roots;
    Poly unresolved;  // constant 1 when fully resolved
    bool fully_resolved() const { return unresolved.degree() <= 0; }
};

// rational coefficient of every shift term; throws on symbolic coefficients
inline std::map<long, Rat> rational_coeffs(const RecurrenceSpec& spec) {
    std::map<long, Rat> out;
    for (const auto& [s, c] : spec.shift_terms) {
        try {
            out[s] = eval_exact(c);
        } catch (const Error&) {
            throw Error(Err::Unsupported, "symbolic coefficient on shift " + std::to_string(s));
        }
    }
    return out;
}

inline Poly characteristic_poly(const std::map<long, Rat>& coeffs, long order) {
    Poly p = Poly::monomial(order, Rat(1));
    for (const auto& [s, a] : coeffs) p.set(order - s, p.coeff(order - s) - a);
    return p;
}

inline CharDecomposition char_decompose(const RecurrenceSpec& spec) {
    auto coeffs = rational_coeffs(spec);
    long order = spec.order();
    CharDecomposition d;
    d.charpoly = characteristic_poly(coeffs, order);

    Poly rest = d.charpoly;
    std::map<Rat, int> ratroots;
    for (const Rat& r : rational_roots(d.charpoly)) ratroots[r]++;
    for (const auto& [r, m] : ratroots) {
        d.roots.push_back({Quad(r), m});
        Poly lin;
        lin.set(1, Rat(1));
        lin.set(0, -r);
        for (int i = 0; i < m; ++i) rest = rest.divexact(lin);
    }
    d.unresolved = Poly(Rat(1));
    if (rest.degree() > 0) {
        for (const auto& [factor, mult] : squarefree_decompose(rest)) {
            bool resolved = false;
            if (factor.degree() == 2) {
                if (auto qr = quadratic_roots(factor)) {
                    d.roots.push_back({qr->first, mult});
                    d.roots.push_back({qr->second, mult});
                    resolved = true;
                }
            }
            if (!resolved) {
                for (int i = 0; i < mult; ++i) d.unresolved = d.unresolved * factor;
            }
        }
        d.unresolved = d.unresolved * rest.lc();
    }
    return d;
}

// multiplicity of alpha as a characteristic root (0 when not a root)
inline int root_multiplicity(const Poly& charpoly, const Quad& alpha) {
    PolyQ p = to_polyq(charpoly);
    PolyQ lin;
    lin.set(1, Quad(Rat(1)));
    lin.set(0, -alpha);
    int m = 0;
    while (!p.is_zero() && p.eval(alpha).is_zero()) {
        p = p.divexact(lin);
        ++m;
    }
    return m;
}

// Particular solution of x_n = sum a_i x_{n-i} + forcing by undetermined
// coefficients; a forcing base with multiplicity m as a characteristic root
// gets the resonant ansatz n^m * (poly of matching degree) * base^n.
inline ExpPoly particular_solution(const std::map<long, Rat>& coeffs, const Poly& charpoly,
                                   const ExpPoly& forcing) {
    ExpPoly result{forcing.var, {}};
    for (const auto& term : forcing.terms) {
        const Quad& alpha = term.base;
        if (alpha.is_zero()) throw Error(Err::IllFormed, "zero forcing base");
        int m = root_multiplicity(charpoly, alpha);
        long D = term.poly.degree();
        // n^m q(n) - sum_i a_i alpha^{-i} (n-i)^m q(n-i) = p(n)
        std::vector<PolyQ> basis;
        for (long j = 0; j <= D; ++j) {
            PolyQ contrib = PolyQ::monomial(m + j, Quad(Rat(1)));
            for (const auto& [s, a] : coeffs) {
                Quad scale = Quad(a) * alpha.pow_int(-s);
                contrib = contrib -
                          PolyQ::monomial(m + j, Quad(Rat(1))).shift(Quad(Rat(-s))) * scale;
            }
            basis.push_back(contrib);
        }
        long maxdeg = m + D;
        std::vector<std::vector<Quad>> A(maxdeg + 1, std::vector<Quad>(D + 1, Quad(Rat(0))));
        std::vector<Quad> rhs(maxdeg + 1, Quad(Rat(0)));
        for (long j = 0; j <= D; ++j) {
            for (long i = 0; i <= maxdeg; ++i) A[i][j] = basis[j].coeff(i);
        }
        for (long i = 0; i <= maxdeg; ++i) rhs[i] = term.poly.coeff(i);
        auto sol = solve_linear(A, rhs);
        if (!sol.consistent)
            throw Error(Err::Internal, "particular solution system inconsistent");
        PolyQ q;
        for (long j = 0; j <= D; ++j) q.set(j, sol.x[j]);
        result.add_term(alpha, PolyQ::monomial(m, Quad(Rat(1))) * q);
    }
    result.canonicalize();
    return result;
}

// one homogeneous basis element: n^power * root^n
struct BasisFn {
    Quad root;
    int power;

    Expr to_expr(const std::string& var) const {
        std::vector<Expr> fs;
        if (power == 1) fs.push_back(make_symbol(var));
        else if (power > 1) fs.push_back(make_pow(make_symbol(var), make_const(power)));
        fs.push_back(make_pow(quad_to_expr(root), make_symbol(var)));
        return make_mul(std::move(fs));
    }
    Quad eval(long n) const {
        return Quad(Rat(n)).pow_int(power) * root.pow_int(n);
    }
};

inline std::vector<BasisFn> homogeneous_basis(const CharDecomposition& d) {
    std::vector<BasisFn> out;
    for (const auto& r : d.roots) {
        for (int j = 0; j < r.mult; ++j) out.push_back({r.root, j});
    }
    return out;
}

// Fits the free coefficients of hom-basis + particular against the initial
// conditions; condition values may be symbolic expressions. The square system
// is solved exactly over Q(sqrt d) with expression-valued right-hand sides.
inline Expr apply_initial_conditions(const std::vector<BasisFn>& basis, const Expr& particular,
                                     const std::vector<std::pair<long, Expr>>& ics,
                                     const std::string& var) {
    const std::size_t k = basis.size();
    if (ics.size() != k)
        throw Error(Err::SingularSystem,
                    "need exactly " + std::to_string(k) + " initial conditions");
    std::vector<std::vector<Quad>> A(k, std::vector<Quad>(k, Quad(Rat(0))));
    std::vector<Expr> rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        long idx = ics[i].first;
        for (std::size_t j = 0; j < k; ++j) A[i][j] = basis[j].eval(idx);
        Expr part_at = substitute(particular, var, make_const(idx));
        rhs[i] = normalize(make_add({ics[i].second, make_mul({make_const(-1), part_at})}));
    }
    // gaussian elimination, expression-valued rhs
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        while (p < k && A[p][c].is_zero()) ++p;
        if (p == k) throw Error(Err::SingularSystem, "degenerate initial-condition system");
        std::swap(A[p], A[c]);
        std::swap(rhs[p], rhs[c]);
        Quad inv = Quad(Rat(1)) / A[c][c];
        for (std::size_t j = c; j < k; ++j) A[c][j] = A[c][j] * inv;
        rhs[c] = normalize(make_mul({quad_to_expr(inv), rhs[c]}));
        for (std::size_t i = 0; i < k; ++i) {
            if (i == c || A[i][c].is_zero()) continue;
            Quad f = A[i][c];
            for (std::size_t j = c; j < k; ++j) A[i][j] = A[i][j] - f * A[c][j];
            rhs[i] = normalize(make_add(
                {rhs[i], make_mul({quad_to_expr(-f), rhs[c]})}));
        }
    }
    std::vector<Expr> terms{particular};
    for (std::size_t j = 0; j < k; ++j) {
        terms.push_back(make_mul({rhs[j], basis[j].to_expr(var)}));
    }
    return normalize(make_add(std::move(terms)));
}

// ---- order reduction ---------------------------------------------------------

struct OrderReduction {
    long g = 1;  // gcd of shifts
    std::vector<RecurrenceSpec> subs;  // one per residue class r = 0..g-1, index var "m"
};

// Splits a recurrence whose shifts share gcd g > 1 into g interleaved
// sub-recurrences x_{g m + r}; the forcing is re-expressed per residue class.
inline OrderReduction order_reduce(const RecurrenceSpec& spec) {
    if (spec.shift_terms.empty()) throw Error(Err::NotReducible, "no shift terms");
    Int g(0);
    for (const auto& [s, c] : spec.shift_terms) g = intfn::gcd(g, Int(s));
    if (g <= 1) throw Error(Err::NotReducible, "gcd of shifts is 1");
    long gl = g.get_si();
    const std::string& var = spec.var();
    std::string mvar = var == "m" ? "m_" : "m";
    OrderReduction out;
    out.g = gl;
    for (long r = 0; r < gl; ++r) {
        RecurrenceSpec sub;
        sub.unknown = spec.unknown;
        sub.index_vars = {mvar};
        for (const auto& [s, c] : spec.shift_terms) sub.shift_terms[s / gl] = c;
        Expr nval = normalize(make_add({make_mul({make_const(gl), make_symbol(mvar)}), make_const(r)}));
        sub.forcing = normalize(substitute(spec.forcing, var, nval));
        sub.linear_ok = true;
        sub.raw_rhs = spec_rhs(sub);
        out.subs.push_back(std::move(sub));
    }
    return out;
}

// ---- system elimination --------------------------------------------------------

// Reduces a linear constant-coefficient system to a single recurrence in the
// target unknown by repeatedly substituting the shifted definitions of the
// other unknowns. Substitution depth is bounded by the sum of the equation
// orders; anything that does not close within the bound is rejected.
inline RecurrenceSpec eliminate_system(const RecurrenceSystem& sys, const std::string& target) {
    std::map<std::string, Expr> defs;
    long bound = 0;
    const std::string& var = sys.eqs.front().var();
    for (const auto& eq : sys.eqs) {
        defs[eq.unknown] = spec_rhs(eq);
        bound += std::max<long>(eq.order(), 1);
    }
    if (!defs.count(target)) throw Error(Err::NotEliminable, "unknown target " + target);
    bound += static_cast<long>(sys.eqs.size());

    Expr work = defs[target];
    for (long iter = 0; iter <= bound; ++iter) {
        bool found = false;
        std::function<Expr(const Expr&)> step = [&](const Expr& e) -> Expr {
            if (e.kind() == Kind::Unknown && e.name() != target && defs.count(e.name())) {
                found = true;
                if (e.kids().size() != 1)
                    throw Error(Err::NotEliminable, "multivariate unknown in system");
                Expr arg = e.kids()[0];
                Expr delta = normalize(
                    make_add({make_symbol(var), make_mul({make_const(-1), arg})}));
                if (!delta.is_integer_const() || delta.value().sign() < 0)
                    throw Error(Err::NotEliminable, "non-causal reference to " + e.name());
                return substitute(defs.at(e.name()), var, arg);
            }
            return map_children(e, step);
        };
        Expr next = normalize(step(work));
        work = next;
        if (!found) break;
        if (iter == bound)
            throw Error(Err::NotEliminable, "substitution did not close within the order bound");
    }
    std::set<std::string> names{target};
    return decompose_equation(target, {var}, work, names);
}

}  // namespace recsolve
