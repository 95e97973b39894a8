#include "recsolve/classify.hpp"
#include "recsolve/dcbounds.hpp"
#include "recsolve/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace recsolve;

namespace {

RecurrenceSpec parse1(const std::string& s) {
    return std::get<RecurrenceSpec>(parse_recurrence(s));
}

}  // namespace

TEST_CASE("dc_exact_on_powers: Strassen") {
    auto spec = parse1("x(n)=7*x(n/2)+(9/2)*n^2");
    auto ics = parse_initial_conditions("x(1)=1");
    DCSpec d = make_dcspec(spec, ics);
    Expr e = dc_exact_on_powers(d);
    CHECK(equals(e, normalize(parse_expr("7*n^(log(7)/log(2)) - 6*n^2"))));
    // exact agreement with iteration at n = 1, 2, 4, ..., 1024
    auto pts = iterate_oracle_dc(spec, ics, 10);
    REQUIRE(pts.size() == 11);
    for (auto& [n, x] : pts) {
        CHECK(eval_loglin(e, {{"n", Rat(n)}}) == x);
    }
}

TEST_CASE("dc_exact_on_powers: mergesort with symbolic base value") {
    auto spec = parse1("x(n)=2*x(n/2)+n-1");
    DCSpec d = make_dcspec(spec, parse_initial_conditions("x(1)=x1"));
    Expr e = dc_exact_on_powers(d);
    CHECK(equals(e, normalize(parse_expr("n*log(n)/log(2) - n + 1 + n*x1"))));
    // iterate with x1 = 0 and x1 = 5
    for (long x1 : {0L, 5L}) {
        auto ics = parse_initial_conditions("x(1)=" + std::to_string(x1));
        auto pts = iterate_oracle_dc(spec, ics, 10);
        for (auto& [n, x] : pts) {
            CHECK(eval_loglin(e, {{"n", Rat(n)}, {"x1", Rat(x1)}}) == x);
        }
    }
}

TEST_CASE("dc_exact_on_powers: g = 0") {
    auto spec = parse1("x(n)=x(n/2)");
    DCSpec d = make_dcspec(spec, parse_initial_conditions("x(1)=x1"));
    Expr e = dc_exact_on_powers(d);
    CHECK(equals(e, make_symbol("x1")));
}

TEST_CASE("dc_bounds sandwich the oracle at every well-defined n <= 2^12") {
    struct Case {
        const char* rec;
        const char* init;
    } cases[] = {
        {"x(n)=7*x(n/2)+(9/2)*n^2", "x(1)=1"},
        {"x(n)=2*x(n/2)+n-1", "x(1)=0"},
        {"x(n)=2*x(n/2)+n-1", "x(1)=5"},
        {"x(n)=3*x(n/3)+n", "x(1)=2"},
        {"x(n)=x(n/2)+1", "x(1)=0"},
        {"x(n)=4*x(n/2)+n^2+n", "x(1)=1"},
    };
    for (const auto& c : cases) {
        auto spec = parse1(c.rec);
        auto ics = parse_initial_conditions(c.init);
        Solution s = dc_bounds(make_dcspec(spec, ics));
        BoundsReport rep = check_bounds_numeric(spec, ics, s.lower, s.upper, 1 << 12);
        INFO(c.rec);
        CHECK(rep.ok);
        CHECK(rep.checked >= 12);
    }
}

TEST_CASE("the printed Strassen and mergesort bound pairs pass the oracle check") {
    // Strassen: n^(log7/log2) - (3/2) n^2 <= x_n <= 7 n^(log7/log2) - 6 n^2
    {
        auto spec = parse1("x(n)=7*x(n/2)+(9/2)*n^2");
        auto ics = parse_initial_conditions("x(1)=1");
        Expr lo = parse_expr("n^(log(7)/log(2)) - (3/2)*n^2");
        Expr hi = parse_expr("7*n^(log(7)/log(2)) - 6*n^2");
        BoundsReport rep = check_bounds_numeric(spec, ics, lo, hi, 1 << 10);
        CHECK(rep.ok);
        CHECK(rep.checked == 11);
    }
    // mergesort: h(n) - 3n + 3 + (1/2) n x1 <= x_n <= h(n) - n/2 + 1 + n x1
    for (long x1 : {0L, 5L}) {
        auto spec = parse1("x(n)=2*x(n/2)+n-1");
        auto ics = parse_initial_conditions("x(1)=" + std::to_string(x1));
        Expr lo = parse_expr("n*log(n)/log(2) - 3*n + 3 + (1/2)*n*" + std::to_string(x1));
        Expr hi = parse_expr("n*log(n)/log(2) - n/2 + 1 + n*" + std::to_string(x1));
        BoundsReport rep = check_bounds_numeric(spec, ics, lo, hi, 1 << 10);
        INFO("x1 = " << x1);
        CHECK(rep.ok);
    }
}

TEST_CASE("asymptotics: mergesort ~ n log n / log 2 at n = 2^20 via the level-sum formula") {
    auto spec = parse1("x(n)=2*x(n/2)+n-1");
    DCSpec d = make_dcspec(spec, parse_initial_conditions("x(1)=0"));
    Expr e = dc_exact_on_powers(d);
    Rat n = Rat(1048576);  // 2^20
    Rat xn = eval_loglin(e, {{"n", n}});
    Rat hn = n * Rat(20);  // n log n / log 2 at a power of two
    Rat ratio = xn / hn;
    CHECK((ratio - Rat(1)).abs() <= Rat(1, 10));
}

TEST_CASE("dc rejections") {
    auto kind_is = [](Err k) {
        return Catch::Matchers::Predicate<Error>(
            [k](const Error& e) { return e.kind() == k; });
    };
    // exponential forcing
    CHECK_THROWS_MATCHES(
        make_dcspec(parse1("x(n)=2*x(n/2)+2^n"), parse_initial_conditions("x(1)=1")), Error,
        kind_is(Err::IllFormed));
    // decreasing forcing
    CHECK_THROWS_MATCHES(
        make_dcspec(parse1("x(n)=2*x(n/2)-n"), parse_initial_conditions("x(1)=1")), Error,
        kind_is(Err::IllFormed));
    // g with negative constant term is fine as long as g(1) >= 0
    CHECK_NOTHROW(make_dcspec(parse1("x(n)=2*x(n/2)+n-1"), parse_initial_conditions("x(1)=1")));
}

TEST_CASE("rational beta chains stop when they leave the integers") {
    auto spec = parse1("x(n)=2*x(2*n/3)+n");
    DCSpec d = make_dcspec(spec, parse_initial_conditions("x(1)=1"));
    CHECK(d.beta == Rat(3, 2));
    auto pts = iterate_oracle_dc(spec, parse_initial_conditions("x(1)=1"), 10);
    CHECK(pts.size() == 1);  // 1 * 3/2 is not an integer: the chain is just {1}
}
