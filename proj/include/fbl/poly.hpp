#pragma once

#include <algorithm>
#include <cassert>
#include <string>
#include <utility>
#include <vector>

#include "fbl/rational.hpp"

namespace fbl {

// Univariate polynomial in the spectral variable s with exact rational
// coefficients, stored in ascending powers with trailing zeros trimmed.
// s stands for |alpha| in 2-D and sqrt(alpha^2+beta^2) in 3-D.
class Poly {
  public:
    Poly() = default;
    explicit Poly(Rational constant) {
        if (constant != 0) c_.push_back(std::move(constant));
    }
    explicit Poly(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(Rational(1)); }
    // The monomial c*s^k.
    static Poly monomial(Rational coeff, int k) {
        Poly p;
        if (coeff != 0) {
            p.c_.assign(static_cast<size_t>(k) + 1, Rational(0));
            p.c_.back() = std::move(coeff);
        }
        return p;
    }
    static Poly s() { return monomial(Rational(1), 1); }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1 by convention
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const Rational& coeff(int k) const {
        static const Rational kZero(0);
        if (k < 0 || k >= static_cast<int>(c_.size())) return kZero;
        return c_[static_cast<size_t>(k)];
    }
    const std::vector<Rational>& coeffs() const { return c_; }

    const Rational& leading() const {
        assert(!c_.empty());
        return c_.back();
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<Rational> d(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<long>(k));
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
        for (size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
        for (size_t k = 0; k < b.c_.size(); ++k) r[k] -= b.c_[k];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a) { return Poly() - a; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Rational& k, const Poly& p) {
        if (k == 0) return Poly();
        std::vector<Rational> r = p.c_;
        for (auto& c : r) c *= k;
        return Poly(std::move(r));
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Quotient/remainder over the rationals; b must be nonzero.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        assert(!b.is_zero());
        Poly rem = a;
        Poly quot;
        const int db = b.degree();
        const Rational& lb = b.leading();
        while (!rem.is_zero() && rem.degree() >= db) {
            int k = rem.degree() - db;
            Rational f = rem.leading() / lb;
            quot += monomial(f, k);
            rem -= monomial(f, k) * b;
        }
        return {quot, rem};
    }

    // Division that must be exact (used by fraction-free elimination).
    static Poly divide_exact(const Poly& a, const Poly& b) {
        auto [q, r] = divmod(a, b);
        assert(r.is_zero());
        return q;
    }

    Poly monic() const {
        if (is_zero()) return Poly();
        return (Rational(1) / leading()) * (*this);
    }

    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly r = divmod(a, b).second.monic();  // normalize to tame coefficient growth
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // p with repeated roots stripped: p / gcd(p, p').
    Poly squarefree() const {
        if (is_zero() || degree() == 0) return monic();
        Poly g = gcd(*this, derivative());
        if (g.degree() == 0) return monic();
        return divide_exact(*this, g).monic();
    }

    // Multiplicity of the root at s = 0.
    int valuation() const {
        if (is_zero()) return 0;
        int v = 0;
        while (c_[static_cast<size_t>(v)] == 0) ++v;
        return v;
    }

    // Strips the s^k factor.
    Poly shifted_down(int k) const {
        if (is_zero()) return Poly();
        assert(valuation() >= k);
        return Poly(std::vector<Rational>(c_.begin() + k, c_.end()));
    }

    std::string str(const std::string& var = "s") const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            const Rational& c = coeff(k);
            if (c == 0) continue;
            Rational a = fbl::abs(c);
            if (out.empty())
                out += (c < 0) ? "-" : "";
            else
                out += (c < 0) ? " - " : " + ";
            bool unit = (a == 1) && k > 0;
            if (!unit) out += to_string(a);
            if (k > 0) {
                if (!unit) out += "*";
                out += var;
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

namespace detail {

inline int sign_changes(const std::vector<int>& signs) {
    int changes = 0;
    int prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

}  // namespace detail

// Number of distinct roots of p in the open interval (0, +inf), by Sturm's
// theorem on the squarefree part with the s^k factor stripped first.
inline int count_positive_roots(const Poly& p) {
    if (p.is_zero()) return 0;
    Poly q = p.shifted_down(p.valuation()).squarefree();
    if (q.degree() <= 0) return 0;

    std::vector<Poly> chain{q, q.derivative()};
    while (!chain.back().is_zero()) {
        const Poly& a = chain[chain.size() - 2];
        const Poly& b = chain.back();
        Poly r = -Poly::divmod(a, b).second;
        chain.push_back(std::move(r));
    }
    chain.pop_back();

    std::vector<int> at_zero, at_inf;
    at_zero.reserve(chain.size());
    at_inf.reserve(chain.size());
    for (const Poly& c : chain) {
        at_zero.push_back(c.is_zero() ? 0 : sign(c.coeff(c.valuation())));  // limit s -> 0+
        at_inf.push_back(c.is_zero() ? 0 : sign(c.leading()));
    }
    return detail::sign_changes(at_zero) - detail::sign_changes(at_inf);
}

// Sign of p on all of (0, inf); 0 means the sign is not constant there
// (or p is identically zero).
inline int constant_sign_on_positive_axis(const Poly& p) {
    if (p.is_zero()) return 0;
    if (count_positive_roots(p) > 0) return 0;
    return sign(p.eval(Rational(1)));
}

}  // namespace fbl
