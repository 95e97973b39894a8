#pragma once

// Exact arithmetic in Q(sqrt(d)): values a + b*sqrt(d) with rational a, b and
// a fixed non-square integer d >= 2. Rationals are the b = 0 case (d = 0).
// One extension at a time: mixing sqrt(2) with sqrt(3) throws, and callers
// that may hit mixed surds catch and fall back to sampling.

#include "recsolve/rat.hpp"

#include <stdexcept>
#include <string>

namespace recsolve {

struct SurdMixError : std::domain_error {
    SurdMixError() : std::domain_error("incompatible quadratic surds") {}
};

class Quad {
public:
    Quad() : a_(0), b_(0), d_(0) {}
    Quad(const Rat& r) : a_(r), b_(0), d_(0) {}
    Quad(long n) : a_(n), b_(0), d_(0) {}
    Quad(const Rat& a, const Rat& b, const Int& d) : a_(a), b_(b), d_(d) {
        if (b_.is_zero()) d_ = 0;
        if (!b_.is_zero() && d_ < 2) throw std::domain_error("Quad: bad radicand");
    }

    const Rat& rat_part() const { return a_; }
    const Rat& surd_coeff() const { return b_; }
    const Int& radicand() const { return d_; }

    bool is_rational() const { return b_.is_zero(); }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_one() const { return b_.is_zero() && a_.is_one(); }
    Rat as_rat() const {
        if (!is_rational()) throw std::domain_error("Quad: irrational value");
        return a_;
    }

    Quad conj() const { return Quad(a_, -b_, d_); }
    // field norm a^2 - b^2 d
    Rat norm() const { return a_ * a_ - b_ * b_ * Rat(d_, Int(1)); }

    Quad operator-() const { return Quad(-a_, -b_, d_); }

    Quad operator+(const Quad& o) const {
        Int d = unify(o);
        return Quad(a_ + o.a_, b_ + o.b_, d);
    }
    Quad operator-(const Quad& o) const { return *this + (-o); }

    Quad operator*(const Quad& o) const {
        Int d = unify(o);
        Rat rd(d, Int(1));
        return Quad(a_ * o.a_ + b_ * o.b_ * rd, a_ * o.b_ + b_ * o.a_, d);
    }

    Quad operator/(const Quad& o) const {
        if (o.is_zero()) throw std::domain_error("Quad: division by zero");
        if (o.is_rational()) return Quad(a_ / o.a_, b_ / o.a_, d_);
        Int d = unify(o);
        (void)d;
        Rat n = o.norm();  // nonzero: d non-square
        return (*this * o.conj()) * Quad(Rat(1) / n);
    }

    Quad& operator+=(const Quad& o) { *this = *this + o; return *this; }
    Quad& operator-=(const Quad& o) { *this = *this - o; return *this; }
    Quad& operator*=(const Quad& o) { *this = *this * o; return *this; }
    Quad& operator/=(const Quad& o) { *this = *this / o; return *this; }

    bool operator==(const Quad& o) const {
        if (is_rational() != o.is_rational()) return false;
        if (is_rational()) return a_ == o.a_;
        return d_ == o.d_ && a_ == o.a_ && b_ == o.b_;
    }
    bool operator!=(const Quad& o) const { return !(*this == o); }

    // exact sign of a + b*sqrt(d)
    int sign() const {
        if (b_.is_zero()) return a_.sign();
        if (a_.is_zero()) return b_.sign();
        if (a_.sign() > 0 && b_.sign() > 0) return 1;
        if (a_.sign() < 0 && b_.sign() < 0) return -1;
        // opposite signs: compare a^2 with b^2 d
        int cmp = (a_ * a_ - b_ * b_ * Rat(d_, Int(1))).sign();
        return a_.sign() > 0 ? cmp : -cmp;
    }

    bool operator<(const Quad& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const Quad& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const Quad& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const Quad& o) const { return (*this - o).sign() >= 0; }

    Quad pow_int(long e) const {
        if (e == 0) return Quad(Rat(1));
        Quad base = *this;
        if (e < 0) { base = Quad(Rat(1)) / base; e = -e; }
        Quad acc(Rat(1));
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    std::string to_string() const {
        if (is_rational()) return a_.to_string();
        std::string s;
        if (!a_.is_zero()) s += a_.to_string();
        if (b_.sign() < 0) s += s.empty() ? "-" : " - ";
        else if (!s.empty()) s += " + ";
        Rat ab = b_.abs();
        if (!ab.is_one()) s += ab.to_string() + "*";
        s += "sqrt(" + d_.get_str() + ")";
        return s;
    }

private:
    // returns common radicand, throws on a genuine mix
    Int unify(const Quad& o) const {
        if (b_.is_zero() || o.b_.is_zero()) {
            Int d = b_.is_zero() ? o.d_ : d_;
            return d;
        }
        if (d_ != o.d_) throw SurdMixError();
        return d_;
    }

    Rat a_, b_;
    Int d_;
};

namespace quadfn {

// sqrt of a non-negative rational as a Quad, pulling perfect squares out of
// the radicand (best effort via factorization).
inline Quad sqrt_rat(const Rat& r) {
    if (r.sign() < 0) throw std::domain_error("sqrt of negative rational");
    if (r.is_zero()) return Quad(Rat(0));
    Int m = r.num() * r.den();  // sqrt(p/q) = sqrt(pq)/q
    Int sq(1), rest(1);
    for (const auto& [p, e] : intfn::factorize(m)) {
        for (long i = 0; i < e / 2; ++i) sq *= p;
        if (e % 2) rest *= p;
    }
    Rat coeff(sq, r.den());
    if (rest == 1) return Quad(coeff);
    return Quad(Rat(0), coeff, rest);
}

// exact q-th root when representable as a Quad (rational, or square root)
inline std::optional<Quad> root_rat(const Rat& r, unsigned long q) {
    if (auto v = ratfn::pow_exact(r, Rat(1, static_cast<long>(q)))) return Quad(*v);
    if (q == 2 && r.sign() >= 0) return sqrt_rat(r);
    return std::nullopt;
}

}  // namespace quadfn

}  // namespace recsolve
