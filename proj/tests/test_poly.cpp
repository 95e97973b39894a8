#include "recsolve/poly.hpp"
#include "recsolve/roots.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace recsolve;

namespace {

Poly make(std::initializer_list<std::pair<long, long>> cs) {
    Poly p;
    for (auto& [d, c] : cs) p.set(d, Rat(c));
    return p;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
    Poly p = make({{2, 1}, {0, -4}});   // t^2 - 4
    Poly q = make({{1, 1}, {0, 2}});    // t + 2
    CHECK(p.divexact(q) == make({{1, 1}, {0, -2}}));
    CHECK((p * q).degree() == 3);
    CHECK(p.eval(Rat(3)) == Rat(5));
    CHECK(p.shift(Rat(1)) == make({{2, 1}, {1, 2}, {0, -3}}));
    CHECK(p.derivative() == make({{1, 2}}));
    CHECK(poly_gcd(p, q) == q.monic());
}

TEST_CASE("rational roots: spec examples") {
    CHECK(rational_roots(make({{2, 1}, {1, -5}, {0, 6}})) == std::vector<Rat>{Rat(2), Rat(3)});
    CHECK(rational_roots(make({{3, 1}, {2, -1}, {0, -1}})).empty());
    CHECK(rational_roots(make({{2, 1}, {1, -2}, {0, 1}})) == std::vector<Rat>{Rat(1), Rat(1)});
    // non-monic with fractional roots: (2t-1)(3t+2)
    Poly p = make({{2, 6}, {1, 1}, {0, -2}});
    CHECK(rational_roots(p) == std::vector<Rat>{Rat(-2, 3), Rat(1, 2)});
    // zero roots strip
    CHECK(rational_roots(make({{3, 1}, {1, -1}})) ==
          std::vector<Rat>{Rat(-1), Rat(0), Rat(1)});
}

TEST_CASE("positive root isolation: spec examples") {
    Poly cubic = make({{3, 1}, {2, -1}, {0, -1}});
    RootInterval iv = isolate_positive_root(cubic, Rat(1, 1000));
    CHECK(iv.width() <= Rat(1, 1000));
    CHECK(Rat(1465, 1000) <= iv.lo);
    CHECK(iv.hi <= Rat(1466, 1000));
    // sign pattern invariant
    CHECK(cubic.eval(iv.lo) <= Rat(0));
    CHECK(cubic.eval(iv.hi) >= Rat(0));

    RootInterval exact = isolate_positive_root(make({{1, 1}, {0, -2}}), Rat(1, 10));
    CHECK(exact.lo == Rat(2));
    CHECK(exact.hi == Rat(2));

    RootInterval sqrt2 = isolate_positive_root(make({{2, 1}, {0, -2}}), Rat(1, 100));
    CHECK(sqrt2.hi <= Rat(142, 100));
    CHECK(sqrt2.lo * sqrt2.lo <= Rat(2));
    CHECK(sqrt2.hi * sqrt2.hi >= Rat(2));
}

TEST_CASE("no sign change is reported") {
    CHECK_THROWS_MATCHES(isolate_positive_root(make({{2, 1}, {0, 1}}), Rat(1, 10)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == Err::NoSignChange;
                         }));
}

TEST_CASE("squarefree decomposition") {
    // (t-1)^2 (t^2-2)
    Poly p = make({{2, 1}, {1, -2}, {0, 1}}) * make({{2, 1}, {0, -2}});
    auto sf = squarefree_decompose(p);
    REQUIRE(sf.size() == 2);
    bool saw_quad = false, saw_lin = false;
    for (auto& [f, m] : sf) {
        if (f.degree() == 2 && m == 1) saw_quad = true;
        if (f.degree() == 1 && m == 2) saw_lin = true;
    }
    CHECK(saw_quad);
    CHECK(saw_lin);
}

TEST_CASE("quadratic surd roots") {
    auto r = quadratic_roots(make({{2, 1}, {1, -1}, {0, -1}}));  // t^2 - t - 1
    REQUIRE(r);
    Quad phi(Rat(1, 2), Rat(1, 2), Int(5));
    CHECK((r->first == phi || r->second == phi));
    CHECK(!quadratic_roots(make({{2, 1}, {0, 1}})));  // t^2 + 1: complex
}

TEST_CASE("interpolation is exact") {
    std::vector<std::pair<Rat, Rat>> pts{{Rat(0), Rat(1)}, {Rat(1), Rat(2)}, {Rat(2), Rat(5)}};
    Poly p = interpolate(pts);
    CHECK(p == make({{2, 1}, {0, 1}}));
}
