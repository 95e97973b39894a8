#pragma once

// Univariate polynomials over an exact field (Rat or Quad), as sparse
// degree -> coefficient maps with no stored zeros.

#include "recsolve/quad.hpp"
#include "recsolve/rat.hpp"

#include <map>
#include <string>
#include <vector>

namespace recsolve {

template <class F>
class PolyT {
public:
    PolyT() = default;
    explicit PolyT(const F& c) {
        if (!(c == F(0))) c_[0] = c;
    }
    static PolyT monomial(long deg, const F& c) {
        PolyT p;
        if (!(c == F(0))) p.c_[deg] = c;
        return p;
    }
    static PolyT variable() { return monomial(1, F(1)); }

    const std::map<long, F>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    long degree() const { return c_.empty() ? -1 : c_.rbegin()->first; }
    F coeff(long d) const {
        auto it = c_.find(d);
        return it == c_.end() ? F(0) : it->second;
    }
    F lc() const { return c_.empty() ? F(0) : c_.rbegin()->second; }

    void set(long d, const F& v) {
        if (v == F(0)) c_.erase(d);
        else c_[d] = v;
    }

    PolyT operator-() const {
        PolyT r;
        for (auto& [d, v] : c_) r.c_[d] = -v;
        return r;
    }
    PolyT operator+(const PolyT& o) const {
        PolyT r = *this;
        for (auto& [d, v] : o.c_) r.set(d, r.coeff(d) + v);
        return r;
    }
    PolyT operator-(const PolyT& o) const { return *this + (-o); }
    PolyT operator*(const PolyT& o) const {
        PolyT r;
        for (auto& [d1, v1] : c_) {
            for (auto& [d2, v2] : o.c_) r.set(d1 + d2, r.coeff(d1 + d2) + v1 * v2);
        }
        return r;
    }
    PolyT operator*(const F& s) const {
        PolyT r;
        if (s == F(0)) return r;
        for (auto& [d, v] : c_) r.c_[d] = v * s;
        return r;
    }
    bool operator==(const PolyT& o) const { return c_ == o.c_; }
    bool operator!=(const PolyT& o) const { return !(c_ == o.c_); }

    template <class X>
    X eval(const X& x) const {
        // Horner over the dense range
        if (c_.empty()) return X(0);
        long deg = degree();
        X acc(0);
        for (long d = deg; d >= 0; --d) {
            acc = acc * x;
            auto it = c_.find(d);
            if (it != c_.end()) acc = acc + X(it->second);
        }
        return acc;
    }

    PolyT derivative() const {
        PolyT r;
        for (auto& [d, v] : c_) {
            if (d > 0) r.c_[d - 1] = v * F(d);
        }
        return r;
    }

    // p(x + a)
    PolyT shift(const F& a) const {
        PolyT x = variable() + PolyT(a);
        return compose(x);
    }

    PolyT compose(const PolyT& inner) const {
        PolyT acc;
        long deg = degree();
        for (long d = deg; d >= 0; --d) {
            acc = acc * inner;
            auto it = c_.find(d);
            if (it != c_.end()) acc = acc + PolyT(it->second);
        }
        return acc;
    }

    // division with remainder over the field
    std::pair<PolyT, PolyT> divmod(const PolyT& g) const {
        if (g.is_zero()) throw std::domain_error("poly division by zero");
        PolyT q, r = *this;
        while (!r.is_zero() && r.degree() >= g.degree()) {
            long d = r.degree() - g.degree();
            F c = r.lc() / g.lc();
            PolyT t = monomial(d, c);
            q = q + t;
            r = r - t * g;
        }
        return {q, r};
    }

    PolyT divexact(const PolyT& g) const {
        auto [q, r] = divmod(g);
        if (!r.is_zero()) throw std::domain_error("poly division not exact");
        return q;
    }

    PolyT monic() const {
        if (is_zero()) return *this;
        return *this * (F(1) / lc());
    }

    std::string to_string(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            if (!s.empty()) s += " + ";
            s += coeff_str(it->second);
            if (it->first > 0) s += "*" + var;
            if (it->first > 1) s += "^" + std::to_string(it->first);
        }
        return s;
    }

private:
    static std::string coeff_str(const Rat& r) { return r.to_string(); }
    static std::string coeff_str(const Quad& q) { return "(" + q.to_string() + ")"; }

    std::map<long, F> c_;
};

using Poly = PolyT<Rat>;
using PolyQ = PolyT<Quad>;

inline PolyQ to_polyq(const Poly& p) {
    PolyQ q;
    for (auto& [d, v] : p.coeffs()) q.set(d, Quad(v));
    return q;
}

template <class F>
inline PolyT<F> poly_gcd(PolyT<F> a, PolyT<F> b) {
    while (!b.is_zero()) {
        auto [q, r] = a.divmod(b);
        (void)q;
        a = b;
        b = r;
    }
    return a.monic();
}

// exact polynomial interpolation through (x_i, y_i), distinct x_i
template <class F>
inline PolyT<F> interpolate(const std::vector<std::pair<F, F>>& pts) {
    PolyT<F> acc;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        PolyT<F> li(F(1));
        F denom(1);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            li = li * (PolyT<F>::variable() - PolyT<F>(pts[j].first));
            denom = denom * (pts[i].first - pts[j].first);
        }
        acc = acc + li * (pts[i].second / denom);
    }
    return acc;
}

}  // namespace recsolve
