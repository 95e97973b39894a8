#pragma once

// The recurrence data model: a normalized equation (shift -> coefficient, a
// forcing part, optional prefix-sum coefficient or divide-and-conquer
// divisor), initial conditions, systems, and the Solution record that every
// solver returns.

#include "recsolve/error.hpp"
#include "recsolve/expr.hpp"
#include "recsolve/normalize.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace recsolve {

struct DivisorTerm {
    Rat beta;    // literal divisor > 1
    Expr coeff;  // coefficient of x(n/beta)
};

struct RecurrenceSpec {
    std::string unknown;
    std::vector<std::string> index_vars;

    // univariate linear structure (valid when linear_ok)
    std::map<long, Expr> shift_terms;          // shift >= 1 -> coefficient
    std::optional<DivisorTerm> divisor;        // x(n/beta) term
    std::optional<Expr> prefix_sum_coeff;      // coefficient of sum(x, k, 0, n-1)
    Expr forcing = make_const(0);

    // multivariate linear structure: shift vector -> coefficient
    std::map<std::vector<long>, Expr> mshift_terms;

    bool linear_ok = false;  // the unknown occurs linearly and was decomposed
    Expr raw_rhs = make_const(0);

    const std::string& var() const { return index_vars.front(); }
    long order() const {
        long m = 0;
        for (auto& [s, c] : shift_terms) m = std::max(m, s);
        return m;
    }
    bool multivariate() const { return index_vars.size() >= 2; }
};

struct RecurrenceSystem {
    std::vector<RecurrenceSpec> eqs;
};

using ParsedRecurrence = std::variant<RecurrenceSpec, RecurrenceSystem>;

// initial conditions: exact points x(i...) = value and patterns like x(0,n) = f(n)
struct ICPoint {
    std::string unknown;
    std::vector<long> idx;
    Expr value;
};

struct ICPattern {
    std::string unknown;
    std::vector<std::variant<long, std::string>> args;  // literal or free index name
    Expr value;
};

struct InitialConditions {
    std::vector<ICPoint> points;
    std::vector<ICPattern> patterns;

    const Expr* find(const std::string& unknown, const std::vector<long>& idx) const {
        for (const auto& p : points) {
            if (p.unknown == unknown && p.idx == idx) return &p.value;
        }
        return nullptr;
    }
    const Expr* find1(long i, const std::string& unknown = "") const {
        for (const auto& p : points) {
            if (p.idx.size() == 1 && p.idx[0] == i && (unknown.empty() || p.unknown == unknown))
                return &p.value;
        }
        return nullptr;
    }
    bool empty() const { return points.empty() && patterns.empty(); }
};

struct VerifyReport {
    long checked_up_to = 0;
    bool ok = false;
    std::string method;  // "certified", "sampled", "bounds", "none"
};

struct Solution {
    enum class Kind { Exact, Bounds, Unsolved };
    Kind kind = Kind::Unsolved;
    Expr exact;
    Expr lower, upper;
    std::string reason;
    std::string domain;
    std::vector<std::string> assumptions;
    VerifyReport verification;
    std::string classification;

    static Solution exact_form(Expr e, std::string dom) {
        Solution s;
        s.kind = Kind::Exact;
        s.exact = std::move(e);
        s.domain = std::move(dom);
        return s;
    }
    static Solution bounds(Expr lo, Expr hi, std::string dom) {
        Solution s;
        s.kind = Kind::Bounds;
        s.lower = std::move(lo);
        s.upper = std::move(hi);
        s.domain = std::move(dom);
        return s;
    }
    static Solution unsolved(std::string why) {
        Solution s;
        s.kind = Kind::Unsolved;
        s.reason = std::move(why);
        return s;
    }
};

// rebuild the right-hand side of a spec as a single expression
inline Expr spec_rhs(const RecurrenceSpec& s) {
    if (!s.linear_ok) return s.raw_rhs;
    std::vector<Expr> terms;
    const std::string& v = s.var();
    for (const auto& [shift, coeff] : s.shift_terms) {
        Expr ref = make_unknown(s.unknown, {normalize(make_add({make_symbol(v), make_const(-shift)}))});
        terms.push_back(make_mul({coeff, ref}));
    }
    for (const auto& [vec, coeff] : s.mshift_terms) {
        std::vector<Expr> args;
        for (std::size_t i = 0; i < vec.size(); ++i) {
            args.push_back(normalize(make_add({make_symbol(s.index_vars[i]), make_const(-vec[i])})));
        }
        terms.push_back(make_mul({coeff, make_unknown(s.unknown, std::move(args))}));
    }
    if (s.divisor) {
        Expr arg = normalize(make_mul({make_symbol(v), make_const(Rat(1) / s.divisor->beta)}));
        terms.push_back(make_mul({s.divisor->coeff, make_unknown(s.unknown, {arg})}));
    }
    if (s.prefix_sum_coeff) {
        Expr sumref = make_func("sum", {make_symbol(s.unknown), make_symbol("k"), make_const(0),
                                        normalize(make_add({make_symbol(v), make_const(-1)}))});
        terms.push_back(make_mul({*s.prefix_sum_coeff, sumref}));
    }
    if (!s.forcing.is_zero()) terms.push_back(s.forcing);
    return normalize(make_add(std::move(terms)));
}

inline std::string render_equation(const RecurrenceSpec& s) {
    std::string lhs = s.unknown + "(";
    for (std::size_t i = 0; i < s.index_vars.size(); ++i) {
        if (i) lhs += ",";
        lhs += s.index_vars[i];
    }
    lhs += ")";
    return lhs + " = " + render(spec_rhs(s));
}

}  // namespace recsolve
