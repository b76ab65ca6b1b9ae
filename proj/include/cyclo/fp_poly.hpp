#pragma once

// Dense polynomials over F_p, lowest degree first. Degrees stay below p-1 in
// every use here, so the dense representation is the simple and fast choice.

#include <algorithm>
#include <span>
#include <vector>

#include "cyclo/fp.hpp"

namespace cyclo {

struct FpPoly {
    u64 p = 0;
    std::vector<u64> c;  // coefficients, c[i] of X^i, no trailing zeros

    static FpPoly zero(u64 p) { return FpPoly{p, {}}; }

    static FpPoly one(u64 p) { return FpPoly{p, {1}}; }

    static FpPoly make(u64 p, std::vector<u64> coeffs) {
        for (auto& x : coeffs) x %= p;
        FpPoly f{p, std::move(coeffs)};
        f.trim();
        return f;
    }

    /// Monic product of (X - r) over the given pairwise-distinct roots in [1, p).
    static FpPoly from_roots(u64 p, std::span<const u64> roots) {
        auto sorted = std::vector<u64>(roots.begin(), roots.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] == 0 || sorted[i] >= p)
                throw std::invalid_argument("from_roots: root out of range [1, p)");
            if (i > 0 && sorted[i] == sorted[i - 1])
                throw std::invalid_argument("from_roots: duplicate root");
        }
        FpPoly f = one(p);
        for (u64 r : sorted) {
            // f *= (X - r)
            f.c.push_back(0);
            for (std::size_t i = f.c.size(); i-- > 0;) {
                u64 lower = i > 0 ? f.c[i - 1] : 0;
                f.c[i] = sub_mod(lower, mul_mod(f.c[i], r, p), p);
            }
        }
        return f;
    }

    bool is_zero() const { return c.empty(); }
    i64 degree() const { return static_cast<i64>(c.size()) - 1; }  // -1 for zero
    u64 leading() const { return c.back(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }

    u64 coeff(std::size_t i) const { return i < c.size() ? c[i] : 0; }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    u64 eval(u64 x) const {
        u64 r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = add_mod(mul_mod(r, x, p), c[i], p);
        return r;
    }

    friend bool operator==(const FpPoly& a, const FpPoly& b) {
        return a.p == b.p && a.c == b.c;
    }
};

inline void require_same_modulus(const FpPoly& a, const FpPoly& b) {
    if (a.p != b.p) throw std::invalid_argument("FpPoly: modulus mismatch");
}

inline FpPoly operator+(const FpPoly& a, const FpPoly& b) {
    require_same_modulus(a, b);
    FpPoly r{a.p, std::vector<u64>(std::max(a.c.size(), b.c.size()), 0)};
    for (std::size_t i = 0; i < r.c.size(); ++i)
        r.c[i] = add_mod(a.coeff(i), b.coeff(i), a.p);
    r.trim();
    return r;
}

inline FpPoly operator-(const FpPoly& a, const FpPoly& b) {
    require_same_modulus(a, b);
    FpPoly r{a.p, std::vector<u64>(std::max(a.c.size(), b.c.size()), 0)};
    for (std::size_t i = 0; i < r.c.size(); ++i)
        r.c[i] = sub_mod(a.coeff(i), b.coeff(i), a.p);
    r.trim();
    return r;
}

inline FpPoly operator*(const FpPoly& a, const FpPoly& b) {
    require_same_modulus(a, b);
    if (a.is_zero() || b.is_zero()) return FpPoly::zero(a.p);
    std::vector<u128> acc(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            acc[i + j] += static_cast<u128>(a.c[i]) * b.c[j];
    }
    FpPoly r{a.p, std::vector<u64>(acc.size())};
    for (std::size_t i = 0; i < acc.size(); ++i)
        r.c[i] = static_cast<u64>(acc[i] % a.p);
    r.trim();
    return r;
}

/// Euclidean division: A = B*Q + R with deg R < deg B.
inline std::pair<FpPoly, FpPoly> poly_divrem(const FpPoly& a, const FpPoly& b) {
    require_same_modulus(a, b);
    if (b.is_zero()) throw std::domain_error("poly_divrem: division by zero polynomial");
    FpPoly rem = a;
    rem.trim();
    if (rem.degree() < b.degree()) return {FpPoly::zero(a.p), rem};
    const u64 p = a.p;
    const u64 lead_inv = inv_mod(b.leading(), p);
    std::vector<u64> q(rem.c.size() - b.c.size() + 1, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
        u64 top = rem.coeff(k + b.c.size() - 1);
        if (top == 0) continue;
        u64 f = mul_mod(top, lead_inv, p);
        q[k] = f;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            rem.c[k + j] = sub_mod(rem.c[k + j], mul_mod(f, b.c[j], p), p);
    }
    rem.trim();
    FpPoly quot{p, std::move(q)};
    quot.trim();
    return {quot, rem};
}

inline bool divides(const FpPoly& d, const FpPoly& a) {
    return poly_divrem(a, d).second.is_zero();
}

}  // namespace cyclo
