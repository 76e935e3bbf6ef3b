#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace substwords {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline int sgn(const Rat& x) { return x > 0 ? 1 : x < 0 ? -1 : 0; }

// Dense univariate polynomial over the rationals, c[i] the coefficient of x^i.
struct Poly {
    std::vector<Rat> c;

    Poly() = default;
    explicit Poly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(Rat v) { return Poly{{std::move(v)}}; }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
    const Rat& lead() const { return c.back(); }

    Rat eval(const Rat& x) const {
        Rat acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly derivative() const {
        if (c.size() <= 1) return {};
        std::vector<Rat> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<int>(i);
        return Poly{std::move(d)};
    }

    Poly operator+(const Poly& o) const {
        std::vector<Rat> r(std::max(c.size(), o.c.size()), Rat(0));
        for (std::size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
        return Poly{std::move(r)};
    }
    Poly operator-(const Poly& o) const {
        std::vector<Rat> r(std::max(c.size(), o.c.size()), Rat(0));
        for (std::size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r[i] -= o.c[i];
        return Poly{std::move(r)};
    }
    Poly operator*(const Poly& o) const {
        if (zero() || o.zero()) return {};
        std::vector<Rat> r(c.size() + o.c.size() - 1, Rat(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
        return Poly{std::move(r)};
    }
    Poly operator*(const Rat& k) const {
        std::vector<Rat> r = c;
        for (auto& x : r) x *= k;
        return Poly{std::move(r)};
    }

    // Euclidean remainder; divisor must be nonzero.
    Poly rem(const Poly& d) const {
        if (d.zero()) throw Error("polynomial division by zero");
        std::vector<Rat> r = c;
        while (static_cast<int>(r.size()) - 1 >= d.degree()) {
            Rat f = r.back() / d.lead();
            std::size_t shift = r.size() - d.c.size();
            for (std::size_t i = 0; i < d.c.size(); ++i) r[shift + i] -= f * d.c[i];
            while (!r.empty() && r.back() == 0) r.pop_back();
            if (r.empty()) break;
        }
        return Poly{std::move(r)};
    }
};

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.zero()) {
        Poly r = a.rem(b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.zero()) {
        Rat inv = 1 / a.lead();
        for (auto& x : a.c) x *= inv;
    }
    return a;
}

inline Poly squarefree_part(const Poly& p) {
    if (p.degree() <= 1) return p;
    Poly g = poly_gcd(p, p.derivative());
    if (g.degree() <= 0) return p;
    // exact division p / g via repeated remainder-free elimination
    std::vector<Rat> num = p.c, q(p.c.size() - g.c.size() + 1, Rat(0));
    while (static_cast<int>(num.size()) - 1 >= g.degree() && !num.empty()) {
        Rat f = num.back() / g.lead();
        std::size_t shift = num.size() - g.c.size();
        q[shift] = f;
        for (std::size_t i = 0; i < g.c.size(); ++i) num[shift + i] -= f * g.c[i];
        while (!num.empty() && num.back() == 0) num.pop_back();
    }
    return Poly{std::move(q)};
}

// Sturm chain of a squarefree polynomial.
struct SturmChain {
    std::vector<Poly> s;

    explicit SturmChain(const Poly& p) {
        s.push_back(p);
        if (p.degree() >= 1) {
            s.push_back(p.derivative());
            while (s.back().degree() >= 1) {
                Poly r = s[s.size() - 2].rem(s.back());
                if (r.zero()) break;
                for (auto& x : r.c) x = -x;
                s.push_back(std::move(r));
            }
        }
    }

    int variations(const Rat& x) const {
        int v = 0, prev = 0;
        for (const auto& p : s) {
            int sg = sgn(p.eval(x));
            if (sg != 0) {
                if (prev != 0 && sg != prev) ++v;
                prev = sg;
            }
        }
        return v;
    }

    // number of distinct roots in (a, b]
    int count(const Rat& a, const Rat& b) const { return variations(a) - variations(b); }
};

// Cauchy-style bound: all real roots lie in [-B, B].
inline Rat root_bound(const Poly& p) {
    if (p.degree() < 1) return 1;
    Rat m = 0;
    for (int i = 0; i < p.degree(); ++i) {
        Rat a = abs(p.c[static_cast<std::size_t>(i)] / p.lead());
        m = std::max(m, a);
    }
    return m + 1;
}

// A real algebraic number: the unique root of a squarefree polynomial inside a
// shrinking half-open isolating interval (lo, hi]. Refinement is on demand.
class AlgebraicReal {
public:
    AlgebraicReal(Poly squarefree, Rat lo, Rat hi)
        : p_(std::move(squarefree)), chain_(p_), lo_(std::move(lo)), hi_(std::move(hi)) {
        if (chain_.count(lo_, hi_) != 1) throw Error("interval does not isolate one root");
    }

    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }

    void refine() {
        Rat mid = (lo_ + hi_) / 2;
        if (chain_.count(mid, hi_) == 1)
            lo_ = std::move(mid);
        else
            hi_ = std::move(mid);
    }

    void refine_below(const Rat& width) {
        while (hi_ - lo_ > width) refine();
    }

    // Exact sign of R at this number; may refine the isolating interval.
    int sign_of(const Poly& R) {
        if (R.zero()) return 0;
        Poly rs = squarefree_part(R);
        Poly g = poly_gcd(p_, rs);
        if (g.degree() >= 1 && SturmChain(g).count(lo_, hi_) == 1) return 0;
        SturmChain rc(rs);
        for (;;) {
            int sa = sgn(R.eval(lo_)), sb = sgn(R.eval(hi_));
            if (sa != 0 && sa == sb && rc.count(lo_, hi_) == 0) return sa;
            refine();
        }
    }

private:
    Poly p_;
    SturmChain chain_;
    Rat lo_, hi_;
};

// Interval isolating the largest real root of p; the boolean is true (with the
// exact value in `rational_root`) when that root is rational.
struct LargestRootIsolation {
    bool is_rational = false;
    Rat rational_root = 0;
    Rat lo = 0, hi = 0;
};

inline LargestRootIsolation isolate_largest_real_root(const Poly& p) {
    Poly sf = squarefree_part(p);
    SturmChain chain(sf);
    Rat lo = 0, hi = root_bound(sf);
    if (chain.count(lo, hi) < 1) throw Error("no positive real root");
    while (chain.count(lo, hi) > 1 || hi - lo > Rat(1, 4)) {
        Rat mid = (lo + hi) / 2;
        if (chain.count(mid, hi) >= 1)
            lo = mid;
        else
            hi = mid;
    }
    LargestRootIsolation out;
    // a rational root of a monic integer polynomial is an integer
    BigInt ilo = static_cast<BigInt>(numerator(lo) / denominator(lo));
    for (BigInt i = ilo; i <= ilo + 2; ++i) {
        Rat cand(i);
        if (cand > lo && cand <= hi && sf.eval(cand) == 0) {
            out.is_rational = true;
            out.rational_root = cand;
            return out;
        }
    }
    out.lo = lo;
    out.hi = hi;
    return out;
}

} // namespace substwords
