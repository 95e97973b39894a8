#pragma once

// Immutable symbolic expression trees over exact rationals. An Expr is a
// shared handle to a const node; all rewriting builds new trees. Canonical
// form (sorted sums/products, folded constants, merged exponents) is
// established by normalize() in normalize.hpp; builders here only flatten
// trivial cases.

#include "recsolve/error.hpp"
#include "recsolve/rat.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace recsolve {

enum class Kind { Const, Symbol, Add, Mul, Pow, Func, Unknown };

class Expr;
struct ExprNode;

class Expr {
public:
    Expr();  // defaults to 0
    explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}

    const ExprNode& node() const { return *n_; }
    Kind kind() const;
    const Rat& value() const;               // Const
    const std::string& name() const;        // Symbol / Func / Unknown
    const std::vector<Expr>& kids() const;  // Add/Mul terms, Pow [base,exp], call args

    bool is_const() const { return kind() == Kind::Const; }
    bool is_const(const Rat& v) const { return is_const() && value() == v; }
    bool is_zero() const { return is_const(Rat(0)); }
    bool is_one() const { return is_const(Rat(1)); }
    bool is_integer_const() const { return is_const() && value().is_integer(); }

private:
    std::shared_ptr<const ExprNode> n_;
};

struct ExprNode {
    Kind kind;
    Rat value;               // Const
    std::string name;        // Symbol, Func, Unknown
    std::vector<Expr> kids;  // children
};

inline Kind Expr::kind() const { return n_->kind; }
inline const Rat& Expr::value() const { return n_->value; }
inline const std::string& Expr::name() const { return n_->name; }
inline const std::vector<Expr>& Expr::kids() const { return n_->kids; }

// ---- builders ------------------------------------------------------------

inline Expr make_const(const Rat& v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Const;
    n->value = v;
    return Expr(n);
}
inline Expr make_const(long v) { return make_const(Rat(v)); }

inline Expr::Expr() {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Const;
    n_ = std::move(n);
}

inline Expr make_symbol(const std::string& name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Symbol;
    n->name = name;
    return Expr(n);
}

inline Expr make_add(std::vector<Expr> kids) {
    if (kids.empty()) return make_const(0);
    if (kids.size() == 1) return kids[0];
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Add;
    n->kids = std::move(kids);
    return Expr(n);
}

inline Expr make_mul(std::vector<Expr> kids) {
    if (kids.empty()) return make_const(1);
    if (kids.size() == 1) return kids[0];
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Mul;
    n->kids = std::move(kids);
    return Expr(n);
}

inline Expr make_pow(Expr base, Expr exp) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Pow;
    n->kids = {std::move(base), std::move(exp)};
    return Expr(n);
}

inline Expr make_func(const std::string& name, std::vector<Expr> args) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Func;
    n->name = name;
    n->kids = std::move(args);
    return Expr(n);
}

inline Expr make_unknown(const std::string& name, std::vector<Expr> args) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Unknown;
    n->name = name;
    n->kids = std::move(args);
    return Expr(n);
}

// operator sugar for building test expressions
inline Expr operator+(const Expr& a, const Expr& b) { return make_add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) {
    return make_add({a, make_mul({make_const(-1), b})});
}
inline Expr operator*(const Expr& a, const Expr& b) { return make_mul({a, b}); }
inline Expr operator-(const Expr& a) { return make_mul({make_const(-1), a}); }

// ---- structural total order ----------------------------------------------

inline int kind_rank(Kind k) {
    switch (k) {
        case Kind::Const: return 0;
        case Kind::Symbol: return 1;
        case Kind::Pow: return 2;
        case Kind::Func: return 3;
        case Kind::Unknown: return 4;
        case Kind::Mul: return 5;
        case Kind::Add: return 6;
    }
    return 7;
}

inline int compare(const Expr& a, const Expr& b);

inline int compare_lists(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        int c = compare(a[i], b[i]);
        if (c != 0) return c;
    }
    if (a.size() < b.size()) return -1;
    if (a.size() > b.size()) return 1;
    return 0;
}

inline int compare(const Expr& a, const Expr& b) {
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Kind::Const: {
            if (a.value() == b.value()) return 0;
            return a.value() < b.value() ? -1 : 1;
        }
        case Kind::Symbol:
            return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
        case Kind::Pow: {
            // exponent first so that 2^n outranks n^2 in the term order
            int c = compare(a.kids()[1], b.kids()[1]);
            if (c != 0) return c;
            return compare(a.kids()[0], b.kids()[0]);
        }
        case Kind::Func:
        case Kind::Unknown: {
            int c = a.name().compare(b.name());
            if (c != 0) return c < 0 ? -1 : 1;
            return compare_lists(a.kids(), b.kids());
        }
        case Kind::Mul:
        case Kind::Add:
            return compare_lists(a.kids(), b.kids());
    }
    return 0;
}

inline bool equals(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// ---- traversal utilities ---------------------------------------------------

inline Expr rebuild(const Expr& e, std::vector<Expr> kids) {
    auto n = std::make_shared<ExprNode>(e.node());
    n->kids = std::move(kids);
    return Expr(n);
}

template <class Fn>
inline Expr map_children(const Expr& e, Fn&& fn) {
    if (e.kids().empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(e.kids().size());
    bool changed = false;
    for (const auto& k : e.kids()) {
        Expr k2 = fn(k);
        changed = changed || &k2.node() != &k.node();
        kids.push_back(std::move(k2));
    }
    if (!changed) return e;
    return rebuild(e, std::move(kids));
}

inline bool is_binder(const Expr& e) {
    return e.kind() == Kind::Func && (e.name() == "sum" || e.name() == "prod") &&
           e.kids().size() == 4 && e.kids()[1].kind() == Kind::Symbol;
}

inline Expr substitute(const Expr& e, const std::map<std::string, Expr>& binds) {
    if (e.kind() == Kind::Symbol) {
        auto it = binds.find(e.name());
        return it != binds.end() ? it->second : e;
    }
    if (is_binder(e) && binds.count(e.kids()[1].name())) {
        // iteration variable shadows an outer binding inside the body
        auto inner = binds;
        inner.erase(e.kids()[1].name());
        std::vector<Expr> kids{substitute(e.kids()[0], inner), e.kids()[1],
                               substitute(e.kids()[2], binds), substitute(e.kids()[3], binds)};
        return rebuild(e, std::move(kids));
    }
    return map_children(e, [&](const Expr& k) { return substitute(k, binds); });
}

inline Expr substitute(const Expr& e, const std::string& sym, const Expr& v) {
    return substitute(e, std::map<std::string, Expr>{{sym, v}});
}

// Replace every Unknown node via callback (name, args) -> Expr.
template <class Fn>
inline Expr replace_unknowns(const Expr& e, Fn&& fn) {
    Expr mapped = map_children(e, [&](const Expr& k) { return replace_unknowns(k, fn); });
    if (mapped.kind() == Kind::Unknown) return fn(mapped.name(), mapped.kids());
    return mapped;
}

inline void collect_symbols(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == Kind::Symbol) out.insert(e.name());
    if (is_binder(e)) {
        std::set<std::string> body;
        collect_symbols(e.kids()[0], body);
        body.erase(e.kids()[1].name());
        out.insert(body.begin(), body.end());
        collect_symbols(e.kids()[2], out);
        collect_symbols(e.kids()[3], out);
        return;
    }
    for (const auto& k : e.kids()) collect_symbols(k, out);
}

inline std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> s;
    collect_symbols(e, s);
    return s;
}

inline bool contains_symbol(const Expr& e, const std::string& name) {
    if (e.kind() == Kind::Symbol && e.name() == name) return true;
    for (const auto& k : e.kids()) {
        if (contains_symbol(k, name)) return true;
    }
    return false;
}

inline bool contains_unknown(const Expr& e) {
    if (e.kind() == Kind::Unknown) return true;
    for (const auto& k : e.kids()) {
        if (contains_unknown(k)) return true;
    }
    return false;
}

inline bool contains_func(const Expr& e) {
    if (e.kind() == Kind::Func) return true;
    for (const auto& k : e.kids()) {
        if (contains_func(k)) return true;
    }
    return false;
}

// ---- canonical text rendering ----------------------------------------------
//
// The interchange format: '^' for powers, explicit '*', rationals as p/q,
// function calls by name. Every rendered string re-parses to an equal tree.

namespace detail {

inline void render_expr(const Expr& e, std::ostream& os);

inline bool needs_parens_as_factor(const Expr& e) {
    if (e.kind() == Kind::Add || e.kind() == Kind::Mul) return true;
    if (e.kind() == Kind::Const && (e.value().sign() < 0 || !e.value().is_integer())) return true;
    return false;
}

inline void render_factor(const Expr& e, std::ostream& os) {
    if (needs_parens_as_factor(e)) {
        os << '(';
        render_expr(e, os);
        os << ')';
    } else {
        render_expr(e, os);
    }
}

inline void render_pow(const Expr& base, const Expr& exp, std::ostream& os) {
    if (needs_parens_as_factor(base) || base.kind() == Kind::Pow) {
        os << '(';
        render_expr(base, os);
        os << ')';
    } else {
        render_expr(base, os);
    }
    os << '^';
    bool simple = (exp.kind() == Kind::Symbol) ||
                  (exp.kind() == Kind::Const && exp.value().is_integer() && exp.value().sign() >= 0);
    if (simple) {
        render_expr(exp, os);
    } else {
        os << '(';
        render_expr(exp, os);
        os << ')';
    }
}

// splits a product into numerator/denominator factor lists by exponent sign
inline void render_mul(const std::vector<Expr>& kids, std::ostream& os) {
    std::vector<Expr> num, den;
    Rat coeff(1);
    bool have_coeff = false;
    for (const auto& k : kids) {
        if (k.kind() == Kind::Const) {
            coeff = coeff * k.value();
            have_coeff = true;
        } else if (k.kind() == Kind::Pow && k.kids()[1].kind() == Kind::Const &&
                   k.kids()[1].value().sign() < 0) {
            Rat e = -k.kids()[1].value();
            den.push_back(e.is_one() ? k.kids()[0] : make_pow(k.kids()[0], make_const(e)));
        } else {
            num.push_back(k);
        }
    }
    bool first = true;
    if (have_coeff && !(coeff.is_one() && !num.empty())) {
        if (coeff == Rat(-1) && !num.empty()) {
            os << '-';
        } else {
            os << coeff.to_string();
            first = false;
        }
    }
    if (num.empty() && first) {
        if (!have_coeff) os << '1';
        first = false;
    }
    for (const auto& f : num) {
        if (!first) os << '*';
        first = false;
        if (f.kind() == Kind::Pow) render_pow(f.kids()[0], f.kids()[1], os);
        else render_factor(f, os);
    }
    if (first && num.empty()) os << '1';
    if (!den.empty()) {
        os << '/';
        if (den.size() > 1) os << '(';
        bool dfirst = true;
        for (const auto& f : den) {
            if (!dfirst) os << '*';
            dfirst = false;
            if (f.kind() == Kind::Pow) render_pow(f.kids()[0], f.kids()[1], os);
            else render_factor(f, os);
        }
        if (den.size() > 1) os << ')';
    }
}

// negated view for "a - b" rendering: strips one -1 if possible
inline bool strip_negation(const Expr& e, Expr& out) {
    if (e.kind() == Kind::Const && e.value().sign() < 0) {
        out = make_const(-e.value());
        return true;
    }
    if (e.kind() == Kind::Mul) {
        for (std::size_t i = 0; i < e.kids().size(); ++i) {
            const Expr& k = e.kids()[i];
            if (k.kind() == Kind::Const && k.value().sign() < 0) {
                std::vector<Expr> kids = e.kids();
                Rat v = -k.value();
                if (v.is_one() && kids.size() > 1) kids.erase(kids.begin() + i);
                else kids[i] = make_const(v);
                out = make_mul(std::move(kids));
                return true;
            }
        }
    }
    return false;
}

inline void render_expr(const Expr& e, std::ostream& os) {
    switch (e.kind()) {
        case Kind::Const:
            os << e.value().to_string();
            return;
        case Kind::Symbol:
            os << e.name();
            return;
        case Kind::Add: {
            bool first = true;
            for (const auto& t : e.kids()) {
                Expr pos;
                if (!first && strip_negation(t, pos)) {
                    os << " - ";
                    if (pos.kind() == Kind::Mul) render_mul(pos.kids(), os);
                    else render_expr(pos, os);
                } else {
                    if (!first) os << " + ";
                    render_expr(t, os);
                }
                first = false;
            }
            return;
        }
        case Kind::Mul:
            render_mul(e.kids(), os);
            return;
        case Kind::Pow:
            render_pow(e.kids()[0], e.kids()[1], os);
            return;
        case Kind::Func:
        case Kind::Unknown: {
            os << e.name() << '(';
            bool first = true;
            for (const auto& a : e.kids()) {
                if (!first) os << ',';
                first = false;
                render_expr(a, os);
            }
            os << ')';
            return;
        }
    }
}

}  // namespace detail

inline std::string render(const Expr& e) {
    std::ostringstream os;
    detail::render_expr(e, os);
    return os.str();
}

}  // namespace recsolve
