#include "recsolve/linsolve.hpp"
#include "recsolve/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace recsolve;

namespace {

RecurrenceSpec parse1(const std::string& s) {
    return std::get<RecurrenceSpec>(parse_recurrence(s));
}

}  // namespace

TEST_CASE("char_decompose: spec examples") {
    CharDecomposition d1 = char_decompose(parse1("x(n)=5*x(n-1)-6*x(n-2)"));
    REQUIRE(d1.roots.size() == 2);
    CHECK(d1.fully_resolved());
    CHECK(d1.roots[0].root == Quad(Rat(2)));
    CHECK(d1.roots[1].root == Quad(Rat(3)));

    CharDecomposition d2 = char_decompose(parse1("x(n)=x(n-1)+x(n-2)"));
    REQUIRE(d2.roots.size() == 2);
    CHECK(d2.fully_resolved());
    Quad phi(Rat(1, 2), Rat(1, 2), Int(5));
    bool has_phi = d2.roots[0].root == phi || d2.roots[1].root == phi;
    CHECK(has_phi);

    CharDecomposition d3 = char_decompose(parse1("x(n)=x(n-1)+x(n-3)"));
    CHECK(d3.roots.empty());
    CHECK(d3.unresolved.degree() == 3);
    // t^3 - t^2 - 1 exactly
    CHECK(d3.unresolved.coeff(3) == Rat(1));
    CHECK(d3.unresolved.coeff(2) == Rat(-1));
    CHECK(d3.unresolved.coeff(0) == Rat(-1));
}

TEST_CASE("char_decompose tracks multiplicity") {
    // (t-1)^2: x(n) = 2x(n-1) - x(n-2)
    CharDecomposition d = char_decompose(parse1("x(n)=2*x(n-1)-x(n-2)"));
    REQUIRE(d.roots.size() == 1);
    CHECK(d.roots[0].root == Quad(Rat(1)));
    CHECK(d.roots[0].mult == 2);
}

TEST_CASE("particular_solution: spec examples") {
    // x(n) = 5x(n-1) - 6x(n-2) + n^2 -> p(n) = n^2/2 + 7n/2 + 15/2
    {
        RecurrenceSpec s = parse1("x(n)=5*x(n-1)-6*x(n-2)+n^2");
        auto coeffs = rational_coeffs(s);
        Poly cp = characteristic_poly(coeffs, 2);
        ExpPoly p = particular_solution(coeffs, cp, to_expoly(s.forcing, "n"));
        Expr pe = expoly_to_expr(p);
        CHECK(equals(pe, normalize(parse_expr("n^2/2 + 7*n/2 + 15/2"))));
        // verify by substitution at n = 2..8
        for (long n = 2; n <= 8; ++n) {
            Rat lhs = eval_exact(pe, {{"n", Rat(n)}});
            Rat rhs = Rat(5) * eval_exact(pe, {{"n", Rat(n - 1)}}) -
                      Rat(6) * eval_exact(pe, {{"n", Rat(n - 2)}}) + Rat(n * n);
            CHECK(lhs == rhs);
        }
    }
    // x(n) = 2x(n-1) + 1 -> p = -1
    {
        RecurrenceSpec s = parse1("x(n)=2*x(n-1)+1");
        auto coeffs = rational_coeffs(s);
        ExpPoly p = particular_solution(coeffs, characteristic_poly(coeffs, 1),
                                        to_expoly(s.forcing, "n"));
        CHECK(equals(expoly_to_expr(p), make_const(-1)));
    }
    // x(n) = x(n-1) + x(n-3) + 2^n -> p = (8/3) 2^n
    {
        RecurrenceSpec s = parse1("x(n)=x(n-1)+x(n-3)+2^n");
        auto coeffs = rational_coeffs(s);
        ExpPoly p = particular_solution(coeffs, characteristic_poly(coeffs, 3),
                                        to_expoly(s.forcing, "n"));
        REQUIRE(p.terms.size() == 1);
        CHECK(p.terms[0].base == Quad(Rat(2)));
        CHECK(p.terms[0].poly.coeff(0) == Quad(Rat(8, 3)));
    }
}

TEST_CASE("particular_solution handles resonance") {
    // forcing base 2 equals the characteristic root of x(n) = 2x(n-1)
    RecurrenceSpec s = parse1("x(n)=2*x(n-1)+2^n");
    auto coeffs = rational_coeffs(s);
    ExpPoly p = particular_solution(coeffs, characteristic_poly(coeffs, 1),
                                    to_expoly(s.forcing, "n"));
    Expr pe = expoly_to_expr(p);
    for (long n = 1; n <= 12; ++n) {
        Rat lhs = eval_exact(pe, {{"n", Rat(n)}});
        Rat rhs = Rat(2) * eval_exact(pe, {{"n", Rat(n - 1)}}) + Rat(2).pow_int(n);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("apply_initial_conditions: spec examples") {
    // Fibonacci: Binet form, value 55 at n = 10
    {
        RecurrenceSpec s = parse1("x(n)=x(n-1)+x(n-2)");
        CharDecomposition d = char_decompose(s);
        Expr sol = apply_initial_conditions(homogeneous_basis(d), make_const(0),
                                            {{0, make_const(0)}, {1, make_const(1)}}, "n");
        QuadBindings qb{{"n", Quad(Rat(10))}};
        CHECK(eval_quad(sol, qb) == Quad(Rat(55)));
        auto seq = iterate_oracle(s, parse_initial_conditions("x(0)=0;x(1)=1"), 20);
        for (long n = 0; n <= 20; ++n) {
            QuadBindings b{{"n", Quad(Rat(n))}};
            CHECK(eval_quad(sol, b) == Quad(seq.at(n)));
        }
    }
    // x(n) = 2x(n-1), x0 = c -> c 2^n
    {
        RecurrenceSpec s = parse1("x(n)=2*x(n-1)");
        CharDecomposition d = char_decompose(s);
        Expr sol = apply_initial_conditions(homogeneous_basis(d), make_const(0),
                                            {{0, make_symbol("c")}}, "n");
        CHECK(equals(sol, normalize(parse_expr("c*2^n"))));
    }
    // fitted order-2 with forcing matches the oracle for n <= 20
    {
        RecurrenceSpec s = parse1("x(n)=5*x(n-1)-6*x(n-2)+n^2");
        CharDecomposition d = char_decompose(s);
        auto coeffs = rational_coeffs(s);
        ExpPoly p = particular_solution(coeffs, d.charpoly, to_expoly(s.forcing, "n"));
        Expr sol = apply_initial_conditions(homogeneous_basis(d), expoly_to_expr(p),
                                            {{0, make_const(0)}, {1, make_const(1)}}, "n");
        auto seq = iterate_oracle(s, parse_initial_conditions("x(0)=0;x(1)=1"), 20);
        for (long n = 0; n <= 20; ++n) {
            CHECK(eval_exact(sol, {{"n", Rat(n)}}) == seq.at(n));
        }
    }
}

TEST_CASE("order_reduce: spec examples") {
    // x(n) = 4x(n-2), x0=1, x1=3: interleaved values 1,3,4,12,16
    {
        RecurrenceSpec s = parse1("x(n)=4*x(n-2)");
        OrderReduction red = order_reduce(s);
        CHECK(red.g == 2);
        REQUIRE(red.subs.size() == 2);
        CHECK(red.subs[0].order() == 1);
        // interleaving reproduces the original (oracle-checked)
        auto even = iterate_oracle(red.subs[0], {{ {"x", {0}, make_const(1)} }, {}}, 20);
        auto odd = iterate_oracle(red.subs[1], {{ {"x", {0}, make_const(3)} }, {}}, 20);
        auto orig = iterate_oracle(s, parse_initial_conditions("x(0)=1;x(1)=3"), 40);
        for (long n = 0; n <= 40; ++n) {
            Rat want = n % 2 == 0 ? even.at(n / 2) : odd.at(n / 2);
            CHECK(orig.at(n) == want);
        }
        CHECK(orig.at(0) == Rat(1));
        CHECK(orig.at(1) == Rat(3));
        CHECK(orig.at(2) == Rat(4));
        CHECK(orig.at(3) == Rat(12));
        CHECK(orig.at(4) == Rat(16));
    }
    // gcd 1 is not reducible
    CHECK_THROWS_MATCHES(order_reduce(parse1("x(n)=x(n-1)+1")), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == Err::NotReducible;
                         }));
    // x(n) = 2x(n-3): three order-1 chains
    {
        OrderReduction red = order_reduce(parse1("x(n)=2*x(n-3)"));
        CHECK(red.g == 3);
        CHECK(red.subs.size() == 3);
        for (auto& sub : red.subs) CHECK(sub.order() == 1);
        auto orig = iterate_oracle(parse1("x(n)=2*x(n-3)"),
                                   parse_initial_conditions("x(0)=1;x(1)=5;x(2)=7"), 40);
        for (long r = 0; r < 3; ++r) {
            Rat ic = r == 0 ? Rat(1) : (r == 1 ? Rat(5) : Rat(7));
            auto sub = iterate_oracle(red.subs[r], {{ {"x", {0}, make_const(ic)} }, {}}, 13);
            for (long m = 0; 3 * m + r <= 40; ++m) CHECK(orig.at(3 * m + r) == sub.at(m));
        }
    }
}

TEST_CASE("order_reduce carries the forcing into each residue class") {
    // x(n) = 4x(n-2) + 2^n + n
    RecurrenceSpec s = parse1("x(n)=4*x(n-2)+2^n+n");
    OrderReduction red = order_reduce(s);
    auto orig = iterate_oracle(s, parse_initial_conditions("x(0)=1;x(1)=1"), 30);
    for (long r = 0; r < 2; ++r) {
        auto sub = iterate_oracle(red.subs[r],
                                  {{ {"x", {0}, make_const(orig.at(r))} }, {}}, 15);
        for (long m = 0; 2 * m + r <= 30; ++m) CHECK(orig.at(2 * m + r) == sub.at(m));
    }
}

TEST_CASE("eliminate_system: spec examples") {
    // the three-equation system reduces to x(n) = x(n-1) + x(n-3) + 2^n + n - 1
    {
        auto sys = std::get<RecurrenceSystem>(
            parse_recurrence("x(n)=x(n-1)+y(n-1)+2^n; y(n)=z(n-1)+n-1; z(n)=x(n-1)+1"));
        RecurrenceSpec red = eliminate_system(sys, "x");
        RecurrenceSpec want = parse1("x(n)=x(n-1)+x(n-3)+2^n+n-1");
        CHECK(equals(red.raw_rhs, want.raw_rhs));
        CHECK(red.order() == 3);
        // the reduced recurrence's oracle equals the system's x component
        auto ics = parse_initial_conditions("x(0)=0;y(0)=0;z(0)=0");
        auto sys_seqs = iterate_oracle_system(sys, ics, 40);
        InitialConditions red_ics;
        for (long j = 0; j < 3; ++j)
            red_ics.points.push_back({"x", {j}, sys_seqs.at("x").sym[j]});
        auto red_seq = iterate_oracle(red, red_ics, 40);
        for (long n = 0; n <= 40; ++n) CHECK(red_seq.at(n) == sys_seqs.at("x").vals[n]);
    }
    // two-step swap
    {
        auto sys = std::get<RecurrenceSystem>(parse_recurrence("x(n)=y(n-1); y(n)=x(n-1)"));
        RecurrenceSpec red = eliminate_system(sys, "x");
        CHECK(equals(red.raw_rhs, parse1("x(n)=x(n-2)").raw_rhs));
    }
    // cross-coupled with coefficients
    {
        auto sys = std::get<RecurrenceSystem>(parse_recurrence("x(n)=2*y(n-1); y(n)=3*x(n-1)"));
        RecurrenceSpec red = eliminate_system(sys, "x");
        CHECK(equals(red.raw_rhs, parse1("x(n)=6*x(n-2)").raw_rhs));
        auto ics = parse_initial_conditions("x(0)=1;y(0)=1");
        auto seqs = iterate_oracle_system(sys, ics, 10);
        InitialConditions red_ics;
        for (long j = 0; j < 2; ++j)
            red_ics.points.push_back({"x", {j}, seqs.at("x").sym[j]});
        auto red_seq = iterate_oracle(red, red_ics, 10);
        for (long n = 0; n <= 10; ++n) CHECK(red_seq.at(n) == seqs.at("x").vals[n]);
    }
}
