// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Every comparison is exact rational arithmetic; no floating point is
// used anywhere in the checks.

#include "recsolve/cli.hpp"
#include "recsolve/recsolve.hpp"

#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace recsolve;

namespace {

int failures = 0;

void report(int num, const std::string& what, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << num << ": " << what;
    if (!ok && !detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
    if (!ok) ++failures;
}

RecurrenceSpec parse1(const std::string& s) {
    return std::get<RecurrenceSpec>(parse_recurrence(s));
}

bool exact_and_certified(const Solution& s) {
    return s.kind == Solution::Kind::Exact && s.verification.ok;
}

// exact closed-form vs oracle comparison over n = base..N (symbolic values
// compare as canonical trees, numeric components as rationals)
bool matches_oracle(const RecurrenceSpec& spec, const InitialConditions& ics, const Expr& closed,
                    long N, long from = 0) {
    OracleSeq seq = iterate_oracle_sym(spec, ics, N);
    for (long n = std::max(seq.base, from); n <= N; ++n) {
        Expr cv = normalize(substitute(closed, spec.var(), make_const(n)));
        if (!solve_detail::values_agree(cv, seq.sym_at(n))) return false;
    }
    return true;
}

// ---- criterion 1: paper-example regression --------------------------------

void criterion1() {
    bool ok = true;
    std::string why;

    {
        auto spec = parse1("x(n)=5*x(n-1)-6*x(n-2)+n^2");
        auto ics = parse_initial_conditions("x(0)=0;x(1)=1");
        Solution s = solve(spec, ics, {});
        bool good = exact_and_certified(s) &&
                    check_solution_symbolic(spec, s.exact).verdict == Verdict::Certified &&
                    matches_oracle(spec, ics, s.exact, 50);
        if (!good) { ok = false; why = "order-2 with n^2 forcing"; }
    }
    {
        auto spec = parse1("x(n)=n*x(n-1)+2");
        auto ics = parse_initial_conditions("x(0)=0");
        Solution s = solve(spec, ics, {});
        bool good = s.kind == Solution::Kind::Exact && s.verification.ok &&
                    matches_oracle(spec, ics, s.exact, 50);
        if (!good) { ok = false; why = "first-order variable coefficients"; }
    }
    {
        auto spec = parse1("x(n)=3*x(n-1)^2");
        auto ics = parse_initial_conditions("x(0)=x0");
        Solution s = solve(spec, ics, {});
        bool good = exact_and_certified(s) &&
                    equals(s.exact, normalize(parse_expr("3^(2^n-1)*x0^(2^n)"))) &&
                    matches_oracle(spec, ics, s.exact, 50);
        if (!good) { ok = false; why = "power-product linearization"; }
    }
    {
        auto spec = parse1("x(n)=n/2+n*sum(x,k,0,n-1)");
        Solution s = solve(spec, {}, {});
        bool good = s.kind == Solution::Kind::Exact && s.verification.ok &&
                    equals(s.exact, normalize(parse_expr("n*factorial(n)/2"))) &&
                    matches_oracle(spec, {}, s.exact, 50, 1);
        if (!good) { ok = false; why = "prefix-sum recurrence"; }
    }
    {
        auto spec = parse1("x(m,n)=a+x(m-1,n+1)");
        auto ics = parse_initial_conditions("x(0,n)=9");
        Solution s = solve(spec, ics, {});
        bool good = exact_and_certified(s) && equals(s.exact, normalize(parse_expr("9+a*m")));
        if (good) {
            MultiOracle mo(spec, ics, {{"a", Rat(7, 3)}});
            for (long m = 0; m <= 20 && good; ++m) {
                for (long n = 0; n <= 20 && good; ++n) {
                    Rat want = mo.value({m, n});
                    Rat got = eval_exact(s.exact, {{"a", Rat(7, 3)}, {"m", Rat(m)}, {"n", Rat(n)}});
                    good = want == got;
                }
            }
        }
        if (!good) { ok = false; why = "multivariate rewriting"; }
    }
    report(1, "paper-example regression solves exactly and matches the oracle", ok, why);
}

// ---- criterion 2: system elimination ----------------------------------------

void criterion2() {
    auto sys = std::get<RecurrenceSystem>(
        parse_recurrence("x(n)=x(n-1)+y(n-1)+2^n; y(n)=z(n-1)+n-1; z(n)=x(n-1)+1"));
    bool ok = true;
    std::string why;
    try {
        RecurrenceSpec red = eliminate_system(sys, "x");
        RecurrenceSpec want = parse1("x(n)=x(n-1)+x(n-3)+2^n+n-1");
        if (!equals(red.raw_rhs, want.raw_rhs)) { ok = false; why = "reduced form differs"; }
        auto ics = parse_initial_conditions("x(0)=0;y(0)=0;z(0)=0");
        auto seqs = iterate_oracle_system(sys, ics, 40);
        InitialConditions red_ics;
        for (long j = 0; j < 3; ++j) red_ics.points.push_back({"x", {j}, seqs.at("x").sym[j]});
        auto red_seq = iterate_oracle(red, red_ics, 40);
        for (long n = 0; n <= 40 && ok; ++n) {
            if (red_seq.at(n) != seqs.at("x").vals[n]) { ok = false; why = "oracle mismatch"; }
        }
    } catch (const Error& e) {
        ok = false;
        why = e.what();
    }
    report(2, "three-equation system eliminates to x(n)=x(n-1)+x(n-3)+2^n+n-1", ok, why);
}

// ---- criterion 3: divide and conquer -----------------------------------------

void criterion3() {
    bool ok = true;
    std::string why;
    try {
        // (a) Strassen exact form at n = 2^0..2^10
        auto spec = parse1("x(n)=7*x(n/2)+(9/2)*n^2");
        auto ics = parse_initial_conditions("x(1)=1");
        Expr exact = dc_exact_on_powers(make_dcspec(spec, ics));
        Expr printed = parse_expr("7*n^(log(7)/log(2)) - 6*n^2");
        auto pts = iterate_oracle_dc(spec, ics, 10);
        if (pts.size() != 11) { ok = false; why = "chain too short"; }
        for (auto& [n, x] : pts) {
            Bindings b{{"n", Rat(n)}};
            if (eval_loglin(exact, b) != x || eval_loglin(printed, b) != x) {
                ok = false;
                why = "Strassen exactness at n=" + std::to_string(n);
            }
        }
        // (b) derived and printed bound pairs pass at all powers <= 2^10
        if (ok) {
            Solution db = dc_bounds(make_dcspec(spec, ics));
            BoundsReport r1 = check_bounds_numeric(spec, ics, db.lower, db.upper, 1 << 10);
            BoundsReport r2 = check_bounds_numeric(
                spec, ics, parse_expr("n^(log(7)/log(2)) - (3/2)*n^2"), printed, 1 << 10);
            if (!r1.ok || !r2.ok) { ok = false; why = "Strassen bounds"; }
        }
        if (ok) {
            auto mg = parse1("x(n)=2*x(n/2)+n-1");
            for (long x1 : {0L, 5L}) {
                auto mics = parse_initial_conditions("x(1)=" + std::to_string(x1));
                Solution db = dc_bounds(make_dcspec(mg, mics));
                BoundsReport r1 = check_bounds_numeric(mg, mics, db.lower, db.upper, 1 << 10,
                                                       {{"x1", Rat(x1)}});
                std::string sx = std::to_string(x1);
                Expr lo = parse_expr("n*log(n)/log(2) - 3*n + 3 + (1/2)*n*" + sx);
                Expr hi = parse_expr("n*log(n)/log(2) - n/2 + 1 + n*" + sx);
                BoundsReport r2 = check_bounds_numeric(mg, mics, lo, hi, 1 << 10);
                if (!r1.ok || !r2.ok) { ok = false; why = "mergesort bounds, x1=" + sx; }
            }
        }
        // (c) asymptotic ratio at n = 2^20 through the level-sum formula
        if (ok) {
            auto mg = parse1("x(n)=2*x(n/2)+n-1");
            Expr e = dc_exact_on_powers(make_dcspec(mg, parse_initial_conditions("x(1)=0")));
            Rat n(1048576);
            Rat ratio = eval_loglin(e, {{"n", n}}) / (n * Rat(20));
            if ((ratio - Rat(1)).abs() > Rat(1, 10)) { ok = false; why = "asymptotic ratio"; }
        }
    } catch (const Error& e) {
        ok = false;
        why = e.what();
    }
    report(3, "divide-and-conquer exactness, bound pairs, and asymptotics", ok, why);
}

// ---- criterion 4: exponential-polynomial sandwich ----------------------------

void criterion4() {
    bool ok = true;
    std::string why;
    try {
        auto spec = parse1("x(n)=x(n-1)+x(n-3)+2^n+n-1");
        auto ics = parse_initial_conditions("x(0)=0;x(1)=0;x(2)=0");
        SandwichBounds sw = expoly_sandwich(spec, ics);
        BoundsReport mine = check_bounds_numeric(spec, ics, sw.lower, sw.upper, 40);
        if (!mine.ok) { ok = false; why = "derived sandwich"; }

        Rat lam(1466, 1000);
        if (!lambda_sound(spec, lam)) { ok = false; why = "lambda soundness"; }
        std::string l = lam.to_string();
        Expr lo = parse_expr("(8/3)*2^n - (35/3)*(" + l + "/(" + l + "-1))*(" + l + ")^n");
        Expr hi = parse_expr("(8/3)*2^n + (" + l + ")^n*(" + l + "/(" + l + "-1)^2)*(0+1)");
        BoundsReport paper = check_bounds_numeric(spec, ics, lo, hi, 40);
        if (!paper.ok) {
            ok = false;
            why = "printed pair" + (paper.first_violation
                                        ? " fails at n=" + std::to_string(*paper.first_violation)
                                        : std::string());
        }
    } catch (const Error& e) {
        ok = false;
        why = e.what();
    }
    report(4, "exponential-polynomial sandwich (derived and printed pairs, lambda sound)", ok,
           why);
}

// ---- criterion 5: property suites ---------------------------------------------

void criterion5() {
    bool ok = true;
    std::string why;
    std::mt19937 rng(0x5EED);

    // (a) 200 random order <= 3 with constructed rational roots, resonance included
    {
        std::uniform_int_distribution<int> ord(1, 3), rootpick(0, 5), coefd(-5, 5), degd(0, 2),
            basepick(0, 3), icd(-4, 4);
        const Rat roots[] = {Rat(1), Rat(2), Rat(3), Rat(-1), Rat(1, 2), Rat(-2)};
        const Rat fbases[] = {Rat(1), Rat(2), Rat(3), Rat(5, 2)};
        int done = 0;
        for (int iter = 0; iter < 400 && done < 200 && ok; ++iter) {
            int k = ord(rng);
            Poly cp(Rat(1));
            std::vector<Rat> rs;
            for (int i = 0; i < k; ++i) {
                Rat r = roots[rootpick(rng)];
                rs.push_back(r);
                Poly lin;
                lin.set(1, Rat(1));
                lin.set(0, -r);
                cp = cp * lin;
            }
            std::string rec = "x(n)=";
            bool first = true;
            for (int i = 1; i <= k; ++i) {
                Rat a = -cp.coeff(k - i);
                if (a.is_zero()) continue;
                rec += (first ? "" : "+") + std::string("(") + a.to_string() + ")*x(n-" +
                       std::to_string(i) + ")";
                first = false;
            }
            if (first) continue;
            Rat fb = iter % 4 == 0 ? rs[0].abs() : fbases[basepick(rng)];
            if (fb.is_zero()) fb = Rat(2);
            int fc = coefd(rng);
            if (fc == 0) fc = 3;
            int fd = degd(rng);
            rec += "+(" + Rat(fc).to_string() + ")";
            if (fd > 0) rec += "*n^" + std::to_string(fd);
            if (!fb.is_one()) rec += "*(" + fb.to_string() + ")^n";
            std::string init;
            for (int i = 0; i < k; ++i) {
                if (i) init += ";";
                init += "x(" + std::to_string(i) + ")=" + std::to_string(icd(rng));
            }
            auto spec = parse1(rec);
            auto ics = parse_initial_conditions(init);
            Solution s = solve(spec, ics, {});
            if (s.kind != Solution::Kind::Exact || !s.verification.ok) {
                ok = false;
                why = "5a solve failed: " + rec;
                break;
            }
            auto seq = iterate_oracle(spec, ics, 50);
            for (long n = 0; n <= 50; ++n) {
                if (!(eval_quad(substitute(s.exact, "n", make_const(n)), {}) ==
                      Quad(seq.at(n)))) {
                    ok = false;
                    why = "5a oracle mismatch: " + rec;
                    break;
                }
            }
            ++done;
        }
        if (done < 200 && ok) { ok = false; why = "5a generated too few instances"; }
    }

    // (b) 100 random first-order variable-coefficient instances
    if (ok) {
        std::uniform_int_distribution<int> shift(1, 4), coefd(-4, 4), based(0, 2), pick(0, 2);
        const Rat bases[] = {Rat(1), Rat(2), Rat(3)};
        for (int iter = 0; iter < 100 && ok; ++iter) {
            int c = coefd(rng);
            if (c == 0) c = 2;
            int form = pick(rng), u = shift(rng), v = shift(rng);
            std::string a;
            if (form == 0) a = std::to_string(c);
            else if (form == 1) a = std::to_string(c) + "*(n+" + std::to_string(u) + ")";
            else
                a = std::to_string(c) + "*(n+" + std::to_string(u) + ")*(n+" +
                    std::to_string(v) + ")";
            int bc = coefd(rng);
            if (bc == 0) bc = 1;
            std::string b = std::to_string(bc) + "*" + bases[based(rng)].to_string() + "^n";
            std::string rec = "x(n)=(" + a + ")*x(n-1)+" + b;
            auto spec = parse1(rec);
            auto ics = parse_initial_conditions("x(0)=1");
            Solution s = solve(spec, ics, {});
            if (s.kind != Solution::Kind::Exact) { ok = false; why = "5b solve failed: " + rec; break; }
            auto seq = iterate_oracle(spec, ics, 30);
            for (long n = 0; n <= 30; ++n) {
                if (eval_exact(s.exact, {{"n", Rat(n)}}) != seq.at(n)) {
                    ok = false;
                    why = "5b oracle mismatch: " + rec;
                    break;
                }
            }
        }
    }

    // (c) Gosper identity: example set plus 50 random polynomial-times-geometric terms
    if (ok) {
        auto check_gosper = [&](const Expr& t) {
            GosperResult g = gosper(t, "k");
            if (!g.summable) return false;
            for (long k = 1; k <= 30; ++k) {
                Rat diff = eval_exact(g.antidifference, {{"k", Rat(k)}}) -
                           eval_exact(g.antidifference, {{"k", Rat(k - 1)}});
                if (diff != eval_exact(t, {{"k", Rat(k)}})) return false;
            }
            return true;
        };
        if (!check_gosper(parse_expr("k*2^k")) || !check_gosper(parse_expr("1/(k*(k+1))")) ||
            gosper(parse_expr("1/k"), "k").summable) {
            ok = false;
            why = "5c example set";
        }
        std::uniform_int_distribution<int> degd(0, 2), based(0, 3), coefd(-5, 5);
        const Rat gb[] = {Rat(2), Rat(3), Rat(1, 2), Rat(5, 2)};
        for (int iter = 0; iter < 50 && ok; ++iter) {
            int c1 = coefd(rng), c0 = coefd(rng);
            if (c1 == 0) c1 = 2;
            int d = degd(rng);
            Rat b = gb[based(rng)];
            std::string t = "(" + std::to_string(c1) + "*k^" + std::to_string(d + 1) + "+(" +
                            std::to_string(c0) + "))*(" + b.to_string() + ")^k";
            if (!check_gosper(parse_expr(t))) {
                ok = false;
                why = "5c random term: " + t;
            }
        }
    }

    // (d) 50 random non-negative sandwich instances, n <= 60
    if (ok) {
        std::uniform_int_distribution<int> ord(1, 3), coefd(0, 3), icd(0, 4), fb(0, 2), fc(1, 4);
        const char* fbases[] = {"1", "2", "3"};
        for (int iter = 0; iter < 50 && ok; ++iter) {
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
            try {
                SandwichBounds sw = expoly_sandwich(spec, ics);
                BoundsReport rep = check_bounds_numeric(spec, ics, sw.lower, sw.upper, 60);
                if (!rep.ok) { ok = false; why = "5d sandwich violated: " + rec; }
            } catch (const Error& e) {
                ok = false;
                why = std::string("5d failed: ") + e.what() + " on " + rec;
            }
        }
    }
    report(5, "property suites (random exact solves, Gosper identity, sandwiches)", ok, why);
}

// ---- criterion 6: determinism --------------------------------------------------

void criterion6() {
    // The library performs no floating-point arithmetic anywhere; every
    // comparison in this suite is exact. Byte-identical output across runs is
    // asserted on the regression corpus.
    std::vector<std::vector<std::string>> corpus = {
        {"solve", "x(n)=5*x(n-1)-6*x(n-2)+n^2", "--init", "x(0)=0;x(1)=1", "--format", "json"},
        {"solve", "x(n)=n*x(n-1)+2", "--init", "x(0)=0", "--format", "json"},
        {"solve", "x(n)=3*x(n-1)^2", "--init", "x(0)=x0", "--format", "json"},
        {"solve", "x(n)=n/2+n*sum(x,k,0,n-1)", "--format", "json"},
        {"solve", "x(m,n)=a+x(m-1,n+1)", "--init", "x(0,n)=9", "--format", "json"},
        {"solve", "x(n)=7*x(n/2)+(9/2)*n^2", "--init", "x(1)=1", "--mode", "bounds", "--format",
         "json"},
        {"solve", "x(n)=2*x(n/2)+n-1", "--init", "x(1)=x1", "--format", "json"},
        {"solve", "x(n)=x(n-1)+x(n-3)+2^n+n-1", "--init", "x(0)=0;x(1)=0;x(2)=0", "--format",
         "json", "--table", "10"},
        {"solve", "x(n)=x(n-1)+x(n-2)", "--init", "x(0)=0;x(1)=1", "--format", "json",
         "--verify", "50"},
    };
    bool ok = true;
    std::string why;
    for (const auto& args : corpus) {
        std::ostringstream o1, e1, o2, e2;
        int c1 = run(args, o1, e1);
        int c2 = run(args, o2, e2);
        if (c1 != c2 || o1.str() != o2.str()) {
            ok = false;
            why = "output differs for " + args[1];
            break;
        }
        if (c1 != 0) {
            ok = false;
            why = "corpus entry failed: " + args[1];
            break;
        }
    }
    report(6, "byte-identical CLI output across runs; exact arithmetic only", ok, why);
}

// ---- criterion 7: root isolation ------------------------------------------------

void criterion7() {
    Poly cubic;
    cubic.set(3, Rat(1));
    cubic.set(2, Rat(-1));
    cubic.set(0, Rat(-1));
    bool ok = true;
    std::string why;
    try {
        RootInterval iv = isolate_positive_root(cubic, Rat(1, 1000));
        if (!(cubic.eval(iv.lo) <= Rat(0) && cubic.eval(iv.hi) >= Rat(0))) {
            ok = false;
            why = "no sign change across the interval";
        }
        Rat hi3 = iv.hi * iv.hi * iv.hi - iv.hi * iv.hi - Rat(1);
        if (hi3 < Rat(0)) { ok = false; why = "hi is not an upper bound"; }
        if (!(Rat(1465, 1000) <= iv.lo && iv.hi <= Rat(1467, 1000))) {
            ok = false;
            why = "interval escapes [1465/1000, 1467/1000]";
        }
        if (iv.width() > Rat(1, 1000)) { ok = false; why = "interval too wide"; }
    } catch (const Error& e) {
        ok = false;
        why = e.what();
    }
    report(7, "positive-root isolation for t^3 - t^2 - 1 at width 1/1000", ok, why);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    if (failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << failures << " criterion(s) failed\n";
    return 1;
}
