#include "recsolve/approxbounds.hpp"
#include "recsolve/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace recsolve;

namespace {

RecurrenceSpec parse1(const std::string& s) {
    return std::get<RecurrenceSpec>(parse_recurrence(s));
}

void check_sandwich(const RecurrenceSpec& spec, const InitialConditions& ics, long N) {
    SandwichBounds sw = expoly_sandwich(spec, ics);
    BoundsReport rep = check_bounds_numeric(spec, ics, sw.lower, sw.upper, N);
    INFO(render_equation(spec));
    CHECK(rep.ok);
}

}  // namespace

TEST_CASE("leading_term: spec examples") {
    // forcing dominates: 2 > lambda ~ 1.4656, coefficient 8/3
    BoundTerm t1 = leading_term(parse1("x(n)=x(n-1)+x(n-3)+2^n+n-1"));
    CHECK(t1.alpha == Rat(2));
    CHECK(t1.d == Rat(0));
    CHECK(t1.c.lo == Rat(8, 3));
    CHECK(t1.c.hi == Rat(8, 3));

    // homogeneous part dominates a constant forcing
    BoundTerm t2 = leading_term(parse1("x(n)=2*x(n-1)+1"));
    CHECK(t2.alpha == Rat(2));
    CHECK(t2.d == Rat(0));

    // x(n) = 3x(n-1) + 2^n: homogeneous base 3 beats forcing base 2
    BoundTerm t3 = leading_term(parse1("x(n)=3*x(n-1)+2^n"));
    CHECK(t3.alpha == Rat(3));
    // the iterated ratio x_{n+1}/x_n approaches 3
    auto seq = iterate_oracle(parse1("x(n)=3*x(n-1)+2^n"), parse_initial_conditions("x(0)=1"), 30);
    Rat ratio = seq.at(30) / seq.at(29);
    CHECK((ratio - Rat(3)).abs() < Rat(1, 100));
}

TEST_CASE("resonance at the top bumps the degree") {
    // x(n) = 2x(n-1) + 2^n: forcing base equals the characteristic root
    BoundTerm t = leading_term(parse1("x(n)=2*x(n-1)+2^n"));
    CHECK(t.alpha == Rat(2));
    CHECK(t.d == Rat(1));
}

TEST_CASE("expoly_sandwich on the paper recurrence") {
    auto spec = parse1("x(n)=x(n-1)+x(n-3)+2^n+n-1");
    auto ics = parse_initial_conditions("x(0)=0;x(1)=0;x(2)=0");
    SandwichBounds sw = expoly_sandwich(spec, ics);
    CHECK(sw.X == Rat(0));
    CHECK(lambda_sound(spec, sw.lambda));
    // charpoly(lambda) >= 0 is the exact soundness statement
    CHECK(sw.lambda >= Rat(1465, 1000));
    BoundsReport rep = check_bounds_numeric(spec, ics, sw.lower, sw.upper, 60);
    CHECK(rep.ok);

    // the leading part of f is (8/3) 2^n
    const PolyQ* p2 = sw.f.poly_for(Quad(Rat(2)));
    REQUIRE(p2);
    CHECK(p2->coeff(0) == Quad(Rat(8, 3)));
}

TEST_CASE("the paper's printed sandwich passes with lambda = 1466/1000 and X = 0") {
    auto spec = parse1("x(n)=x(n-1)+x(n-3)+2^n+n-1");
    auto ics = parse_initial_conditions("x(0)=0;x(1)=0;x(2)=0");
    Rat lam(1466, 1000);
    // sum a_i lambda^-i <= 1, exactly
    CHECK(lambda_sound(spec, lam));
    std::string l = lam.to_string();
    Expr lo = parse_expr("(8/3)*2^n - (35/3)*(" + l + "/(" + l + "-1))*(" + l + ")^n");
    Expr hi = parse_expr("(8/3)*2^n + (" + l + ")^n*(" + l + "/(" + l + "-1)^2)*(0+1)");
    BoundsReport rep = check_bounds_numeric(spec, ics, lo, hi, 40);
    CHECK(rep.ok);
    CHECK(rep.checked == 41);
}

TEST_CASE("trivial and golden-ratio sandwiches") {
    // x(n) = x(n-1), x0 = 5: f = 5 with zero slack
    {
        auto spec = parse1("x(n)=x(n-1)");
        auto ics = parse_initial_conditions("x(0)=5");
        SandwichBounds sw = expoly_sandwich(spec, ics);
        CHECK(sw.g_plus.c.hi == Rat(0));
        CHECK(sw.g_minus.c.hi == Rat(0));
        CHECK(equals(expoly_to_expr(sw.f), make_const(5)));
        BoundsReport rep = check_bounds_numeric(spec, ics, sw.lower, sw.upper, 40);
        CHECK(rep.ok);
    }
    // x(n) = x(n-1) + x(n-2) + 1 with zero start: lambda bounds the golden ratio
    {
        auto spec = parse1("x(n)=x(n-1)+x(n-2)+1");
        auto ics = parse_initial_conditions("x(0)=0;x(1)=0");
        SandwichBounds sw = expoly_sandwich(spec, ics);
        CHECK(sw.lambda > Rat(1618, 1001));
        BoundsReport rep = check_bounds_numeric(spec, ics, sw.lower, sw.upper, 40);
        CHECK(rep.ok);
    }
}

TEST_CASE("widening lambda keeps the sandwich valid") {
    auto spec = parse1("x(n)=x(n-1)+x(n-3)+2^n+n-1");
    auto ics = parse_initial_conditions("x(0)=0;x(1)=0;x(2)=0");
    SandwichBounds sw = expoly_sandwich(spec, ics);
    Rat wide = sw.lambda * Rat(101, 100);
    CHECK(lambda_sound(spec, wide));
    // recompute H for the widened lambda (it can only shrink)
    auto seq = iterate_oracle(spec, ics, 2);
    Rat H(0);
    for (long j = 0; j <= 2; ++j) {
        Quad fj = sw.f.eval_at(j);
        Rat rj = (seq.at(j) - fj.as_rat()).abs() / wide.pow_int(j);
        if (rj > H) H = rj;
    }
    Expr fx = expoly_to_expr(sw.f);
    Expr slack = BoundTerm{{H, H}, Rat(0), wide}.to_expr("n", true);
    Expr lo = normalize(make_add({fx, make_mul({make_const(-1), slack})}));
    Expr hi = normalize(make_add({fx, slack}));
    BoundsReport rep = check_bounds_numeric(spec, ics, lo, hi, 60);
    CHECK(rep.ok);
}

TEST_CASE("negative coefficients are rejected") {
    CHECK_THROWS_MATCHES(leading_term(parse1("x(n)=x(n-1)-x(n-2)+1")), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == Err::Unsupported;
                         }));
}

TEST_CASE("random non-negative instances satisfy the sandwich for n <= 60") {
    std::mt19937 rng(8642);
    std::uniform_int_distribution<int> ord(1, 3), coefd(0, 3), icd(0, 4), fb(0, 2), fc(1, 4);
    const char* fbases[] = {"1", "2", "3"};
    for (int iter = 0; iter < 50; ++iter) {
        int k = ord(rng);
        std::string rec = "x(n)=";
        int used = 0;
        bool any = false;
        for (int i = 1; i <= k; ++i) {
            int c = coefd(rng);
            if (i == k && !any && c == 0) c = 1;
            if (c == 0) continue;
            if (any) rec += "+";
            rec += std::to_string(c) + "*x(n-" + std::to_string(i) + ")";
            any = true;
            used = i;
        }
        rec += "+" + std::to_string(fc(rng)) + "*" + fbases[fb(rng)] + "^n";
        std::string init;
        for (int i = 0; i < used; ++i) {
            if (i) init += ";";
            init += "x(" + std::to_string(i) + ")=" + std::to_string(icd(rng));
        }
        auto spec = parse1(rec);
        auto ics = parse_initial_conditions(init);
        INFO(rec << " with " << init);
        check_sandwich(spec, ics, 60);
    }
}
