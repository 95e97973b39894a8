#include "recsolve/parser.hpp"
#include "recsolve/recurrence.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace recsolve;

namespace {

RecurrenceSpec parse1(const std::string& s) {
    return std::get<RecurrenceSpec>(parse_recurrence(s));
}

}  // namespace

TEST_CASE("parse: spec examples") {
    RecurrenceSpec a = parse1("x(n) = 5*x(n-1) - 6*x(n-2) + n^2");
    CHECK(a.unknown == "x");
    CHECK(a.order() == 2);
    CHECK(equals(a.shift_terms.at(1), make_const(5)));
    CHECK(equals(a.shift_terms.at(2), make_const(-6)));
    CHECK(equals(a.forcing, normalize(parse_expr("n^2"))));

    RecurrenceSpec b = parse1("x(n) = 7*x(n/2) + (9/2)*n^2");
    REQUIRE(b.divisor);
    CHECK(b.divisor->beta == Rat(2));
    CHECK(equals(b.divisor->coeff, make_const(7)));
    CHECK(equals(b.forcing, normalize(parse_expr("9/2*n^2"))));

    RecurrenceSpec c = parse1("x(n) = n/2 + n*sum(x, k, 0, n-1)");
    REQUIRE(c.prefix_sum_coeff);
    CHECK(equals(*c.prefix_sum_coeff, make_symbol("n")));
    CHECK(equals(c.forcing, normalize(parse_expr("n/2"))));
}

TEST_CASE("coefficients collect per shift") {
    RecurrenceSpec a = parse1("x(n)=x(n-1)+x(n-1)");
    RecurrenceSpec b = parse1("x(n)=2*x(n-1)");
    CHECK(equals(a.shift_terms.at(1), b.shift_terms.at(1)));
}

TEST_CASE("systems and multivariate forms") {
    auto sys = std::get<RecurrenceSystem>(
        parse_recurrence("x(n)=x(n-1)+y(n-1)+2^n; y(n)=z(n-1)+n-1; z(n)=x(n-1)+1"));
    CHECK(sys.eqs.size() == 3);
    CHECK(sys.eqs[0].unknown == "x");
    CHECK(sys.eqs[1].unknown == "y");

    RecurrenceSpec mv = parse1("x(m,n) = a + x(m-1,n+1)");
    CHECK(mv.index_vars == std::vector<std::string>{"m", "n"});
    REQUIRE(mv.mshift_terms.size() == 1);
    CHECK(mv.mshift_terms.begin()->first == std::vector<long>{1, -1});
}

TEST_CASE("nonlinear forms keep the raw tree") {
    RecurrenceSpec nl = parse1("x(n) = 3*x(n-1)^2");
    CHECK(!nl.linear_ok);
    CHECK(contains_unknown(nl.raw_rhs));
}

TEST_CASE("parse errors carry their kind") {
    auto kind_is = [](Err k) {
        return Catch::Matchers::Predicate<Error>(
            [k](const Error& e) { return e.kind() == k; });
    };
    CHECK_THROWS_MATCHES(parse_recurrence("x(n) = 5*"), Error, kind_is(Err::SyntaxError));
    CHECK_THROWS_MATCHES(parse_recurrence("x(n) = x(n-1,n-2)"), Error,
                         kind_is(Err::InconsistentArity));
    CHECK_THROWS_MATCHES(parse_recurrence("x(n) = x(n-1) + x(n/2)"), Error,
                         kind_is(Err::MixedForm));
    CHECK_THROWS_MATCHES(parse_recurrence("x(n) = x(n)"), Error, kind_is(Err::SyntaxError));
    CHECK_THROWS_MATCHES(parse_recurrence("x(n) = x(n+1)"), Error, kind_is(Err::SyntaxError));
    // parse errors report a position
    try {
        parse_recurrence("x(n) = ");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 7);
    }
}

TEST_CASE("initial conditions: spec examples") {
    InitialConditions a = parse_initial_conditions("x(0)=0;x(1)=1");
    REQUIRE(a.points.size() == 2);
    CHECK(equals(*a.find1(0), make_const(0)));
    CHECK(equals(*a.find1(1), make_const(1)));

    InitialConditions b = parse_initial_conditions("x(1)=1");
    CHECK(equals(*b.find1(1), make_const(1)));

    InitialConditions c = parse_initial_conditions("x(0,n)=9");
    REQUIRE(c.patterns.size() == 1);
    CHECK(std::get<long>(c.patterns[0].args[0]) == 0);
    CHECK(std::get<std::string>(c.patterns[0].args[1]) == "n");

    // symbolic right-hand sides stay symbolic
    InitialConditions d = parse_initial_conditions("x(1)=x1");
    CHECK(equals(*d.find1(1), make_symbol("x1")));

    CHECK_THROWS_MATCHES(parse_initial_conditions("x(0)=1;x(0)=2"), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == Err::DuplicateCondition;
                         }));
}

TEST_CASE("render-parse round trip on a regression corpus") {
    for (const char* t : {
             "x(n) = 5*x(n-1) - 6*x(n-2) + n^2",
             "x(n) = 7*x(n/2) + 9/2*n^2",
             "x(n) = n/2 + n*sum(x,k,0,n-1)",
             "x(n) = n*x(n-1) + 2",
             "x(n) = 3*x(n-1)^2",
             "x(m,n) = a + x(m-1,n+1)",
             "x(n) = x(n-1) + x(n-3) + 2^n + n - 1",
             "x(n) = 2*x(n/2) + n - 1",
         }) {
        auto first = parse_recurrence(t);
        REQUIRE(std::holds_alternative<RecurrenceSpec>(first));
        const auto& s1 = std::get<RecurrenceSpec>(first);
        auto second = parse_recurrence(render_equation(s1));
        const auto& s2 = std::get<RecurrenceSpec>(second);
        CHECK(equals(s1.raw_rhs, s2.raw_rhs));
        CHECK(s1.index_vars == s2.index_vars);
        CHECK(s1.unknown == s2.unknown);
    }
}
