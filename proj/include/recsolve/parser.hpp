#pragma once

// Recursive-descent parser for recurrence definitions, expressions, and
// initial conditions. Grammar (whitespace insignificant):
//
//   system   := equation (";" equation)*
//   equation := ident "(" ivar ("," ivar)* ")" "=" expr
//   expr     := term (("+"|"-") term)*
//   term     := factor (("*"|"/") factor)*
//   factor   := base ("^" factor)?
//   base     := integer | ident | call | "(" expr ")" | "-" base
//   call     := ident "(" expr ("," expr)* ")"
//
// Calls to log/factorial/binomial/sum/prod are function nodes; any other
// call is a reference to an unknown sequence. Rationals arrive as division.

#include "recsolve/error.hpp"
#include "recsolve/expr.hpp"
#include "recsolve/normalize.hpp"
#include "recsolve/recurrence.hpp"

#include <cctype>
#include <set>
#include <string>
#include <vector>

namespace recsolve {

namespace parse_detail {

struct Token {
    enum Type { Int, Ident, Op, End } type;
    std::string text;
    std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Token::Int, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Token::Ident, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        if (std::string("+-*/^(),;=").find(c) != std::string::npos) {
            out.push_back({Token::Op, std::string(1, c), i});
            ++i;
            continue;
        }
        throw ParseError(i, "a token");
    }
    out.push_back({Token::End, "", s.size()});
    return out;
}

inline bool reserved_func(const std::string& n) {
    return n == "log" || n == "factorial" || n == "binomial" || n == "sum" || n == "prod";
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

    Expr parse_expression() {
        Expr e = expr();
        expect_end();
        return e;
    }

    // one 'ident(args) = expr' unit; returns lhs name, lhs args (raw exprs), rhs
    struct RawEquation {
        std::string name;
        std::vector<Expr> lhs_args;
        Expr rhs;
    };

    std::vector<RawEquation> parse_equations() {
        std::vector<RawEquation> eqs;
        while (true) {
            eqs.push_back(equation());
            if (peek().type == Token::Op && peek().text == ";") {
                next();
                continue;
            }
            break;
        }
        expect_end();
        return eqs;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_++]; }
    void expect_op(const std::string& op) {
        if (peek().type != Token::Op || peek().text != op) throw ParseError(peek().pos, "'" + op + "'");
        next();
    }
    void expect_end() {
        if (peek().type != Token::End) throw ParseError(peek().pos, "end of input");
    }

    RawEquation equation() {
        if (peek().type != Token::Ident) throw ParseError(peek().pos, "an unknown name");
        RawEquation eq;
        eq.name = next().text;
        expect_op("(");
        while (true) {
            eq.lhs_args.push_back(expr());
            if (peek().type == Token::Op && peek().text == ",") {
                next();
                continue;
            }
            break;
        }
        expect_op(")");
        expect_op("=");
        eq.rhs = expr();
        return eq;
    }

    Expr expr() {
        Expr acc = term();
        while (peek().type == Token::Op && (peek().text == "+" || peek().text == "-")) {
            std::string op = next().text;
            Expr rhs = term();
            if (op == "+") acc = make_add({acc, rhs});
            else acc = make_add({acc, make_mul({make_const(-1), rhs})});
        }
        return acc;
    }

    Expr term() {
        Expr acc = factor();
        while (peek().type == Token::Op && (peek().text == "*" || peek().text == "/")) {
            std::string op = next().text;
            Expr rhs = factor();
            if (op == "*") acc = make_mul({acc, rhs});
            else acc = make_mul({acc, make_pow(rhs, make_const(-1))});
        }
        return acc;
    }

    Expr factor() {
        Expr b = base();
        if (peek().type == Token::Op && peek().text == "^") {
            next();
            Expr e = factor();  // right associative
            return make_pow(b, e);
        }
        return b;
    }

    Expr base() {
        const Token& t = peek();
        if (t.type == Token::Int) {
            next();
            return make_const(Rat::from_string(t.text));
        }
        if (t.type == Token::Op && t.text == "-") {
            next();
            // unary minus binds below '^': -n^2 reads as -(n^2)
            return make_mul({make_const(-1), factor()});
        }
        if (t.type == Token::Op && t.text == "(") {
            next();
            Expr e = expr();
            expect_op(")");
            return e;
        }
        if (t.type == Token::Ident) {
            std::string name = next().text;
            if (peek().type == Token::Op && peek().text == "(") {
                next();
                std::vector<Expr> args;
                while (true) {
                    args.push_back(expr());
                    if (peek().type == Token::Op && peek().text == ",") {
                        next();
                        continue;
                    }
                    break;
                }
                expect_op(")");
                if (reserved_func(name)) return make_func(name, std::move(args));
                return make_unknown(name, std::move(args));
            }
            return make_symbol(name);
        }
        throw ParseError(t.pos, "a value");
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

// does this expression reference the unknown (directly or via a prefix sum)?
inline bool references_unknown(const Expr& e, const std::string& name) {
    if (e.kind() == Kind::Unknown && e.name() == name) return true;
    if (e.kind() == Kind::Symbol && e.name() == name) return true;
    for (const auto& k : e.kids()) {
        if (references_unknown(k, name)) return true;
    }
    return false;
}

}  // namespace parse_detail

inline Expr parse_expr(const std::string& text) {
    parse_detail::Parser p(text);
    return p.parse_expression();
}

// Decompose a normalized right-hand side into the linear structure of a
// RecurrenceSpec. Nonlinear occurrences leave linear_ok false with the raw
// tree preserved for the transform passes.
inline RecurrenceSpec decompose_equation(const std::string& unknown,
                                         const std::vector<std::string>& ivars, const Expr& rhs,
                                         const std::set<std::string>& all_unknowns = {}) {
    RecurrenceSpec spec;
    spec.unknown = unknown;
    spec.index_vars = ivars;
    spec.raw_rhs = normalize(rhs);
    spec.linear_ok = true;

    auto is_unknown_ref = [&](const Expr& f) {
        return f.kind() == Kind::Unknown &&
               (f.name() == unknown || all_unknowns.count(f.name()) > 0);
    };
    auto is_prefix_sum = [&](const Expr& f) {
        return f.kind() == Kind::Func && f.name() == "sum" && f.kids().size() == 4 &&
               f.kids()[0].kind() == Kind::Symbol && f.kids()[0].name() == unknown;
    };

    std::vector<Expr> forcing_terms;
    for (const auto& term : detail::add_terms(spec.raw_rhs)) {
        detail::TermParts tp = detail::split_term(term);
        std::vector<Expr> coeff_fs{make_const(tp.coeff)};
        Expr ref;
        bool have_ref = false, bad = false;
        for (const auto& f : tp.factors) {
            bool refish = parse_detail::references_unknown(f, unknown);
            for (const auto& u : all_unknowns) refish = refish || parse_detail::references_unknown(f, u);
            if (!refish) {
                coeff_fs.push_back(f);
                continue;
            }
            if ((is_unknown_ref(f) || is_prefix_sum(f)) && !have_ref) {
                ref = f;
                have_ref = true;
            } else {
                bad = true;  // powers of the unknown, nested use, or a second factor
            }
        }
        if (bad) {
            spec.linear_ok = false;
            continue;
        }
        if (!have_ref) {
            forcing_terms.push_back(term);
            continue;
        }
        Expr coeff = normalize(make_mul(std::move(coeff_fs)));
        if (is_prefix_sum(ref)) {
            const Expr& lo = ref.kids()[2];
            const Expr& hi = ref.kids()[3];
            Expr want_hi = normalize(make_add({make_symbol(ivars[0]), make_const(-1)}));
            if (!lo.is_zero() || !equals(normalize(hi), want_hi)) {
                spec.linear_ok = false;
                continue;
            }
            if (spec.prefix_sum_coeff)
                spec.prefix_sum_coeff = normalize(make_add({*spec.prefix_sum_coeff, coeff}));
            else
                spec.prefix_sum_coeff = coeff;
            continue;
        }
        // unknown reference
        if (ref.name() != unknown) {
            // a different unknown of a system: keep the term intact in forcing
            forcing_terms.push_back(term);
            continue;
        }
        if (ref.kids().size() != ivars.size())
            throw Error(Err::InconsistentArity,
                        unknown + " used with " + std::to_string(ref.kids().size()) + " arguments");
        if (ivars.size() == 1) {
            Expr delta = normalize(make_add(
                {make_symbol(ivars[0]), make_mul({make_const(-1), ref.kids()[0]})}));
            if (delta.is_integer_const() && delta.value().fits_long()) {
                long d = delta.value().to_long();
                if (d <= 0)
                    throw Error(Err::SyntaxError,
                                d == 0 ? "unknown refers to itself without shift"
                                       : "forward reference in recurrence");
                auto it = spec.shift_terms.find(d);
                if (it == spec.shift_terms.end()) spec.shift_terms.emplace(d, coeff);
                else it->second = normalize(make_add({it->second, coeff}));
                continue;
            }
            // divisor form: argument c*n with 0 < c < 1
            Expr arg = normalize(ref.kids()[0]);
            detail::TermParts ap = detail::split_term(arg);
            if (ap.factors.size() == 1 && ap.factors[0].kind() == Kind::Symbol &&
                ap.factors[0].name() == ivars[0] && ap.coeff.sign() > 0 && ap.coeff < Rat(1)) {
                Rat beta = Rat(1) / ap.coeff;
                if (spec.divisor) {
                    if (spec.divisor->beta != beta)
                        throw Error(Err::MixedForm, "two different divisors on the unknown");
                    spec.divisor->coeff = normalize(make_add({spec.divisor->coeff, coeff}));
                } else {
                    spec.divisor = DivisorTerm{beta, coeff};
                }
                continue;
            }
            throw Error(Err::SyntaxError,
                        "unsupported argument shape '" + render(ref.kids()[0]) + "'");
        }
        // multivariate: integer shift per index variable
        std::vector<long> vec;
        for (std::size_t i = 0; i < ivars.size(); ++i) {
            Expr delta = normalize(make_add(
                {make_symbol(ivars[i]), make_mul({make_const(-1), ref.kids()[i]})}));
            if (!delta.is_integer_const() || !delta.value().fits_long())
                throw Error(Err::SyntaxError, "non-integer index shift");
            vec.push_back(delta.value().to_long());
        }
        bool allzero = true;
        for (long d : vec) allzero = allzero && d == 0;
        if (allzero) throw Error(Err::SyntaxError, "unknown refers to itself without shift");
        auto it = spec.mshift_terms.find(vec);
        if (it == spec.mshift_terms.end()) spec.mshift_terms.emplace(vec, coeff);
        else it->second = normalize(make_add({it->second, coeff}));
    }
    spec.forcing = normalize(make_add(std::move(forcing_terms)));
    if (spec.divisor && !spec.shift_terms.empty())
        throw Error(Err::MixedForm, "mixed n-k shifts and n/beta divisor");
    if (spec.divisor && spec.prefix_sum_coeff)
        throw Error(Err::MixedForm, "mixed divisor and prefix sum");
    return spec;
}

inline ParsedRecurrence parse_recurrence(const std::string& text) {
    parse_detail::Parser p(text);
    auto raw = p.parse_equations();
    std::set<std::string> names;
    for (const auto& eq : raw) {
        if (!names.insert(eq.name).second)
            throw Error(Err::SyntaxError, "unknown '" + eq.name + "' defined twice");
    }
    std::vector<RecurrenceSpec> specs;
    for (const auto& eq : raw) {
        std::vector<std::string> ivars;
        std::set<std::string> seen;
        for (const auto& a : eq.lhs_args) {
            if (a.kind() != Kind::Symbol)
                throw Error(Err::SyntaxError, "left-hand side index must be a variable");
            if (!seen.insert(a.name()).second)
                throw Error(Err::SyntaxError, "repeated index variable " + a.name());
            ivars.push_back(a.name());
        }
        specs.push_back(decompose_equation(eq.name, ivars, eq.rhs, names));
    }
    if (specs.size() == 1) return specs[0];
    // systems share one index variable
    for (const auto& s : specs) {
        if (s.index_vars.size() != 1 || s.index_vars[0] != specs[0].index_vars[0])
            throw Error(Err::SyntaxError, "system equations must share one index variable");
    }
    return RecurrenceSystem{std::move(specs)};
}

inline InitialConditions parse_initial_conditions(const std::string& text) {
    InitialConditions ics;
    if (text.empty()) return ics;
    parse_detail::Parser p(text);
    auto raw = p.parse_equations();
    for (const auto& eq : raw) {
        if (contains_unknown(eq.rhs))
            throw Error(Err::SyntaxError, "initial condition value may not reference unknowns");
        bool all_int = true;
        std::vector<std::variant<long, std::string>> args;
        for (const auto& a : eq.lhs_args) {
            Expr na = normalize(a);
            if (na.is_integer_const() && na.value().fits_long()) {
                args.push_back(na.value().to_long());
            } else if (na.kind() == Kind::Symbol) {
                args.push_back(na.name());
                all_int = false;
            } else {
                throw Error(Err::SyntaxError, "initial condition index must be an integer or variable");
            }
        }
        Expr val = normalize(eq.rhs);
        if (all_int) {
            std::vector<long> idx;
            for (auto& a : args) idx.push_back(std::get<long>(a));
            if (ics.find(eq.name, idx))
                throw Error(Err::DuplicateCondition, eq.name + " at given index");
            ics.points.push_back({eq.name, idx, val});
        } else {
            for (const auto& pat : ics.patterns) {
                if (pat.unknown == eq.name && pat.args == args)
                    throw Error(Err::DuplicateCondition, eq.name + " pattern");
            }
            ics.patterns.push_back({eq.name, args, val});
        }
    }
    return ics;
}

}  // namespace recsolve
