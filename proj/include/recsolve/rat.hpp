#pragma once

// Exact arbitrary-precision rational arithmetic and the integer utilities
// (factorization, divisor enumeration, exact roots) the solvers are built on.
// Every quantity that feeds a decision is a Rat; no floating point anywhere.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace recsolve {

using Int = mpz_class;

class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(static_cast<signed long>(n)) {}
    Rat(int n) : v_(n) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        v_.canonicalize();
    }
    Rat(const Int& num, const Int& den) : v_(num, den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const Int& n) : v_(n) {}
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Accepts "p" or "p/q".
    static Rat from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::domain_error("Rat: bad literal '" + s + "'");
        q.canonicalize();
        return Rat(q);
    }

    Int num() const { return v_.get_num(); }
    Int den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    bool fits_long() const { return is_integer() && v_.get_num().fits_slong_p(); }
    long to_long() const {
        if (!fits_long()) throw std::domain_error("Rat: not a machine integer");
        return v_.get_num().get_si();
    }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(mpq_class(v_ / o.v_));
    }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }
    bool operator<(const Rat& o) const { return v_ < o.v_; }
    bool operator<=(const Rat& o) const { return v_ <= o.v_; }
    bool operator>(const Rat& o) const { return v_ > o.v_; }
    bool operator>=(const Rat& o) const { return v_ >= o.v_; }

    Rat abs() const { return sign() < 0 ? -*this : *this; }

    Int floor() const {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }
    Int ceil() const {
        Int q;
        mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }

    // this^e for machine-integer e; 0^negative is an error.
    Rat pow_int(long e) const {
        if (e == 0) return Rat(1);
        if (is_zero()) {
            if (e < 0) throw std::domain_error("Rat: 0 to negative power");
            return Rat(0);
        }
        unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
        Int pn, pd;
        mpz_pow_ui(pn.get_mpz_t(), num().get_mpz_t(), a);
        mpz_pow_ui(pd.get_mpz_t(), den().get_mpz_t(), a);
        return e > 0 ? Rat(pn, pd) : Rat(pd, pn);
    }

    std::string to_string() const {
        std::string s = v_.get_num().get_str();
        if (!is_integer()) s += "/" + v_.get_den().get_str();
        return s;
    }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline Rat operator+(long a, const Rat& b) { return Rat(a) + b; }
inline Rat operator-(long a, const Rat& b) { return Rat(a) - b; }
inline Rat operator*(long a, const Rat& b) { return Rat(a) * b; }

// Closed rational interval; used wherever an exact value is only enclosed.
struct RatInterval {
    Rat lo, hi;
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    Rat width() const { return hi - lo; }
};

namespace intfn {

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int pow_ui(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Int factorial(unsigned long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Int binomial(const Int& n, unsigned long k) {
    Int r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

inline bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// Pollard rho (Brent variant) for one nontrivial factor of composite n > 1.
inline Int pollard_rho(const Int& n) {
    if (n % 2 == 0) return Int(2);
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xC0FFEEul);  // fixed seed: deterministic runs
    while (true) {
        Int c = rng.get_z_range(n - 1) + 1;
        Int x = rng.get_z_range(n), y = x, d(1);
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Int diff = x - y;
            if (diff == 0) break;
            d = gcd(diff < 0 ? Int(-diff) : diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

// Full factorization of |n| > 0 as prime -> exponent.
inline std::map<Int, long> factorize(Int n) {
    std::map<Int, long> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) { out[Int(p)]++; n /= p; }
    }
    Int p(17);
    while (n > 1 && p * p <= n && p < 100000) {
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) { out[p]++; n /= p; }
        p += 2;
    }
    // recurse on what trial division left behind
    std::vector<Int> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m)) { out[m]++; continue; }
        Int d = pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return out;
}

// All positive divisors of |n|, ascending. Count capped to keep root
// candidate enumeration sane.
inline std::vector<Int> divisors(const Int& n, std::size_t cap = 1u << 16) {
    std::vector<Int> out{Int(1)};
    for (const auto& [p, e] : factorize(n)) {
        std::size_t base = out.size();
        Int pk(1);
        for (long i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) {
                out.push_back(out[j] * pk);
                if (out.size() > cap) throw std::domain_error("divisors: too many candidates");
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Exact k-th root if it exists.
inline std::optional<Int> exact_root(const Int& n, unsigned long k) {
    if (n < 0 && k % 2 == 0) return std::nullopt;
    Int r;
    int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    if (!exact) return std::nullopt;
    return r;
}

// p-adic valuation of nonzero n.
inline long valuation(const Int& n, const Int& p) {
    Int m;
    return static_cast<long>(mpz_remove(m.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

}  // namespace intfn

namespace ratfn {

// Exact q^(p/r) when the result is rational.
inline std::optional<Rat> pow_exact(const Rat& base, const Rat& exp) {
    if (!exp.is_integer()) {
        if (!exp.den().fits_ulong_p()) return std::nullopt;
        unsigned long r = exp.den().get_ui();
        auto rn = intfn::exact_root(base.num(), r);
        auto rd = intfn::exact_root(base.den(), r);
        if (!rn || !rd) return std::nullopt;
        Rat root(*rn, *rd);
        if (!exp.num().fits_slong_p()) return std::nullopt;
        return root.pow_int(exp.num().get_si());
    }
    if (!exp.num().fits_slong_p()) return std::nullopt;
    return base.pow_int(exp.num().get_si());
}

// p-adic valuation of a nonzero rational.
inline long valuation(const Rat& q, const Int& p) {
    return intfn::valuation(q.num(), p) - intfn::valuation(q.den(), p);
}

}  // namespace ratfn

}  // namespace recsolve
