#pragma once

// Exact, precision-tracked arithmetic in Z[zeta_p] modulo powers of the prime
// pi = (zeta - 1), using the lambda = zeta - 1 power basis.
//
// An element known modulo p^a coefficient-wise is known modulo pi^{a(p-1)}
// and conversely, since Z[zeta] = Z[lambda] and p Z[zeta] = pi^{p-1}. The
// basis never contains lambda^{p-1}: it reduces through
//   lambda^{p-1} = -sum_{j=1}^{p-1} C(p,j) lambda^{j-1},
// every C(p,j) being divisible by p (from Phi_p(1 + lambda) = 0).
//
// The pi-adic valuation of sum b_k lambda^k is min_k (k + (p-1) v_p(b_k));
// the minimum is exact because candidate term valuations are pairwise
// distinct mod p-1. A representative that is zero at working precision gets
// the sentinel "at least a(p-1)", never a number.

#include <bit>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cyclo/fp.hpp"

namespace cyclo {

struct NotInvertible : std::domain_error {
    using std::domain_error::domain_error;
};
struct InexactDivision : std::domain_error {
    using std::domain_error::domain_error;
};
struct InsufficientPrecision : std::logic_error {
    using std::logic_error::logic_error;
};

/// Element of Z[zeta]/pi^{a(p-1)}: p-1 coefficients of 1, lambda, ...,
/// lambda^{p-2}, each reduced mod p^a.
struct CycloElem {
    u64 p = 0;
    u32 a = 0;
    std::vector<u64> c;

    friend bool operator==(const CycloElem& x, const CycloElem& y) {
        return x.p == y.p && x.a == y.a && x.c == y.c;
    }
};

/// Textual form: header line "p a", then the p-1 coefficients base-10.
inline std::string to_text(const CycloElem& x) {
    std::ostringstream os;
    os << x.p << ' ' << x.a << '\n';
    for (std::size_t i = 0; i < x.c.size(); ++i) os << (i ? " " : "") << x.c[i];
    os << '\n';
    return os.str();
}

inline CycloElem cyclo_elem_from_text(std::istream& in) {
    CycloElem x;
    if (!(in >> x.p >> x.a)) throw std::invalid_argument("CycloElem: bad header");
    if (x.p < 3) throw std::invalid_argument("CycloElem: bad modulus");
    x.c.resize(x.p - 1);
    for (auto& v : x.c)
        if (!(in >> v)) throw std::invalid_argument("CycloElem: truncated coefficients");
    return x;
}

inline CycloElem cyclo_elem_from_text(const std::string& s) {
    std::istringstream is(s);
    return cyclo_elem_from_text(is);
}

/// Arithmetic context for one (p, precision cap) pair. Construction
/// precomputes the lambda^{p-1+t} reduction rows; everything else is pure and
/// safe to share across threads.
class LambdaRing {
public:
    LambdaRing(u64 p, u32 a_cap) : p_(p), acap_(a_cap) {
        if (p < 3 || !is_prime(p))
            throw std::invalid_argument("LambdaRing: p must be an odd prime");
        if (a_cap < 1) throw std::invalid_argument("LambdaRing: precision cap must be >= 1");
        pj_.assign(acap_ + 1, 1);
        for (u32 j = 1; j <= acap_; ++j) {
            if (pj_[j - 1] > (u64(1) << 62) / p)
                throw std::invalid_argument("LambdaRing: p^a exceeds 2^62");
            pj_[j] = pj_[j - 1] * p;
        }
        build_tables();
    }

    u64 prime() const { return p_; }
    u32 precision_cap() const { return acap_; }
    u64 coeff_modulus(u32 a) const { return pj_.at(a); }
    u64 valuation_cap(u32 a) const { return static_cast<u64>(a) * (p_ - 1); }

    // --- element factories ---

    CycloElem zero(u32 a) const { return CycloElem{p_, check_a(a), std::vector<u64>(p_ - 1, 0)}; }

    CycloElem one(u32 a) const { return from_integer(1, a); }

    CycloElem from_integer(i64 v, u32 a) const {
        CycloElem x = zero(a);
        const u64 pa = pj_[a];
        i64 r = v % static_cast<i64>(pa);
        if (r < 0) r += static_cast<i64>(pa);
        x.c[0] = static_cast<u64>(r);
        return x;
    }

    CycloElem lambda_power(u64 k, u32 a) const {
        if (k >= p_ - 1) return pow(lambda_power(1, a), k);  // reduces via fold rows
        CycloElem x = zero(a);
        x.c[k] = 1;
        return x;
    }

    CycloElem zeta(u32 a) const {
        CycloElem x = zero(a);
        x.c[0] = 1;
        x.c[1] = 1;  // zeta = 1 + lambda
        return x;
    }

    /// zeta^b in the lambda basis, b taken mod p.
    CycloElem zeta_power(i64 b, u32 a) const {
        i64 r = b % static_cast<i64>(p_);
        if (r < 0) r += static_cast<i64>(p_);
        return pow(zeta(a), static_cast<u64>(r));
    }

    /// sum c_k zeta^k re-expressed in the lambda basis (Horner in zeta).
    CycloElem encode_zeta_poly(std::span<const i64> zc, u32 a) const {
        if (zc.size() != p_ - 1)
            throw std::invalid_argument("encode_zeta_poly: need p-1 coefficients");
        CycloElem r = zero(a);
        for (std::size_t k = p_ - 1; k-- > 0;) {
            r = mul_by_zeta(r);
            r = add(r, from_integer(zc[k], a));
        }
        return r;
    }

    /// Inverse basis conversion: coefficients of 1, zeta, ..., zeta^{p-2}.
    std::vector<u64> zeta_coeffs(const CycloElem& x) const {
        check(x);
        const u64 pa = pj_[x.a];
        const u64 n = p_ - 1;
        std::vector<u64> d(n, 0);
        // d_j = sum_k (-1)^{k-j} C(k,j) b_k; row of C(k, .) maintained in place
        std::vector<u64> row(n, 0);
        row[0] = 1;
        for (u64 k = 0; k < n; ++k) {
            if (k > 0) {
                for (u64 j = k; j >= 1; --j) row[j] = add_mod(row[j], row[j - 1], pa);
            }
            const u64 bk = x.c[k] % pa;
            if (bk == 0) continue;
            for (u64 j = 0; j <= k; ++j) {
                const u64 t = mul_mod(row[j], bk, pa);
                d[j] = ((k - j) % 2 == 0) ? add_mod(d[j], t, pa) : sub_mod(d[j], t, pa);
            }
        }
        return d;
    }

    // --- ring operations; result precision is the minimum of the operands ---

    CycloElem add(const CycloElem& x, const CycloElem& y) const {
        auto [a, pa] = common(x, y);
        CycloElem r = zero(a);
        for (u64 i = 0; i < p_ - 1; ++i) r.c[i] = add_mod(x.c[i] % pa, y.c[i] % pa, pa);
        return r;
    }

    CycloElem sub(const CycloElem& x, const CycloElem& y) const {
        auto [a, pa] = common(x, y);
        CycloElem r = zero(a);
        for (u64 i = 0; i < p_ - 1; ++i) r.c[i] = sub_mod(x.c[i] % pa, y.c[i] % pa, pa);
        return r;
    }

    CycloElem neg(const CycloElem& x) const {
        check(x);
        const u64 pa = pj_[x.a];
        CycloElem r = zero(x.a);
        for (u64 i = 0; i < p_ - 1; ++i) r.c[i] = neg_mod(x.c[i] % pa, pa);
        return r;
    }

    CycloElem mul_scalar(const CycloElem& x, u64 s) const {
        check(x);
        const u64 pa = pj_[x.a];
        s %= pa;
        CycloElem r = zero(x.a);
        for (u64 i = 0; i < p_ - 1; ++i) r.c[i] = mul_mod(x.c[i] % pa, s, pa);
        return r;
    }

    CycloElem mul(const CycloElem& x, const CycloElem& y) const {
        auto [a, pa] = common(x, y);
        const u64 n = p_ - 1;
        const bool lazy = std::bit_width(pa) <= 56;  // u128 accumulators cannot overflow
        std::vector<u128> acc(2 * n - 1, 0);
        std::vector<u64> yr(n);
        for (u64 j = 0; j < n; ++j) yr[j] = y.c[j] % pa;
        for (u64 i = 0; i < n; ++i) {
            const u64 xi = x.c[i] % pa;
            if (xi == 0) continue;
            u128* row = acc.data() + i;
            if (lazy) {
                for (u64 j = 0; j < n; ++j) row[j] += static_cast<u128>(xi) * yr[j];
            } else {
                for (u64 j = 0; j < n; ++j)
                    row[j] = (row[j] + static_cast<u128>(xi) * yr[j]) % pa;
            }
        }
        // fold lambda^{p-1+t} back into the basis, top down
        const bool at_cap = (a == acap_);  // fold rows already reduced mod pa
        std::vector<u64> scratch;
        for (u64 t = 2 * n - 2; t >= n; --t) {
            const u64 v = static_cast<u64>(acc[t] % pa);
            if (v == 0) continue;
            const u64* fr;
            if (at_cap) {
                fr = fold_[t - n].data();
            } else {
                scratch.assign(fold_[t - n].begin(), fold_[t - n].end());
                for (auto& e : scratch) e %= pa;
                fr = scratch.data();
            }
            if (lazy) {
                for (u64 j = 0; j < n; ++j) acc[j] += static_cast<u128>(v) * fr[j];
            } else {
                for (u64 j = 0; j < n; ++j)
                    acc[j] = (acc[j] + static_cast<u128>(v) * fr[j]) % pa;
            }
        }
        CycloElem r = zero(a);
        for (u64 j = 0; j < n; ++j) r.c[j] = static_cast<u64>(acc[j] % pa);
        return r;
    }

    CycloElem pow(CycloElem x, u64 e) const {
        check(x);
        CycloElem r = one(x.a);
        while (e) {
            if (e & 1) r = mul(r, x);
            e >>= 1;
            if (e) x = mul(x, x);
        }
        return r;
    }

    /// Inverse of a unit (v_pi = 0), by Newton lifting of the mod-p inverse.
    CycloElem invert(const CycloElem& x) const {
        check(x);
        if (x.c[0] % p_ == 0) throw NotInvertible("invert: element has positive valuation");
        CycloElem y = from_integer(static_cast<i64>(inv_mod(x.c[0] % p_, p_)), x.a);
        const CycloElem two = from_integer(2, x.a);
        // error valuation doubles per step from >= 1
        u32 steps = 1;
        while ((u64(1) << steps) < valuation_cap(x.a)) ++steps;
        for (u32 i = 0; i <= steps; ++i) y = mul(y, sub(two, mul(x, y)));
        if (!(mul(x, y) == one(x.a))) throw std::logic_error("invert: lift failed");
        return y;
    }

    /// x^{p-1}; the result is congruent to 1 mod pi.
    CycloElem normalize(const CycloElem& x) const {
        check(x);
        if (x.c[0] % p_ == 0) throw NotInvertible("normalize: element has positive valuation");
        return pow(x, p_ - 1);
    }

    // --- valuation and congruences ---

    /// v_pi, exact below the cap; nullopt means ">= a(p-1)".
    std::optional<u64> pi_valuation(const CycloElem& x) const {
        check(x);
        const u64 pa = pj_[x.a];
        std::optional<u64> best;
        for (u64 k = 0; k < p_ - 1; ++k) {
            u64 v = x.c[k] % pa;
            if (v == 0) continue;
            u64 vp = 0;
            while (v % p_ == 0) { v /= p_; ++vp; }
            const u64 val = k + (p_ - 1) * vp;
            if (!best || val < *best) best = val;
        }
        return best;
    }

    /// True iff v_pi(x - y) >= k. Refuses to answer beyond the joint
    /// precision instead of returning a silent false.
    bool congruent_mod_pi(const CycloElem& x, const CycloElem& y, u64 k) const {
        const u32 a = std::min(x.a, y.a);
        if (k > valuation_cap(a))
            throw InsufficientPrecision("congruent_mod_pi: k exceeds working precision");
        const auto v = pi_valuation(sub(x, y));
        return !v.has_value() || *v >= k;
    }

    /// y with y lambda^k = x; costs ceil(k / (p-1)) coefficient p-levels.
    CycloElem divide_by_lambda(const CycloElem& x, u64 k) const {
        check(x);
        if (k == 0) return x;
        const auto vx = pi_valuation(x);
        if (vx.has_value() && *vx < k)
            throw InexactDivision("divide_by_lambda: valuation below divisor");
        const u64 q = k / (p_ - 1);
        const u64 r = k % (p_ - 1);
        const u64 levels = q + (r ? 1 : 0);
        if (x.a <= levels)
            throw InsufficientPrecision("divide_by_lambda: no precision left for result");
        CycloElem y = x;
        u64 blocks = q;
        if (r) {
            y = mul(y, lambda_power(p_ - 1 - r, y.a));
            ++blocks;
        }
        for (u64 i = 0; i < blocks; ++i) y = divide_by_lambda_block(y);
        return y;
    }

    // --- Galois action ---

    /// sigma^j with sigma(zeta) = zeta^u: substitutes lambda -> zeta^{u_j}-1.
    CycloElem sigma(const CycloElem& x, const PowerTable& t, i64 j = 1) const {
        check(x);
        if (t.p != p_) throw std::invalid_argument("sigma: power table prime mismatch");
        i64 n = static_cast<i64>(p_) - 1;
        i64 jr = j % n;
        if (jr < 0) jr += n;
        if (jr == 0) return x;
        const CycloElem img = sub(zeta_power(static_cast<i64>(t.pw[jr]), x.a), one(x.a));
        CycloElem r = zero(x.a);
        for (std::size_t k = p_ - 1; k-- > 0;) {
            r = mul(r, img);
            r.c[0] = add_mod(r.c[0], x.c[k] % pj_[x.a], pj_[x.a]);
        }
        return r;
    }

    CycloElem conjugate(const CycloElem& x, const PowerTable& t) const {
        return sigma(x, t, static_cast<i64>((p_ - 1) / 2));
    }

    CycloElem reduce_precision(const CycloElem& x, u32 a) const {
        check(x);
        if (a > x.a)
            throw InsufficientPrecision("reduce_precision: cannot raise precision");
        CycloElem r = zero(a);
        for (u64 i = 0; i < p_ - 1; ++i) r.c[i] = x.c[i] % pj_[a];
        return r;
    }

private:
    u32 check_a(u32 a) const {
        if (a < 1 || a > acap_)
            throw std::invalid_argument("LambdaRing: precision out of ring range");
        return a;
    }

    void check(const CycloElem& x) const {
        if (x.p != p_) throw std::invalid_argument("LambdaRing: element prime mismatch");
        if (x.c.size() != p_ - 1) throw std::invalid_argument("LambdaRing: bad coefficient count");
        check_a(x.a);
    }

    std::pair<u32, u64> common(const CycloElem& x, const CycloElem& y) const {
        check(x);
        check(y);
        const u32 a = std::min(x.a, y.a);
        return {a, pj_[a]};
    }

    CycloElem mul_by_zeta(const CycloElem& x) const {
        // x * (1 + lambda): shift-add, folding the lambda^{p-1} overflow
        const u64 pa = pj_[x.a];
        CycloElem r = zero(x.a);
        const u64 top = x.c[p_ - 2] % pa;
        r.c[0] = x.c[0] % pa;
        for (u64 i = 1; i < p_ - 1; ++i)
            r.c[i] = add_mod(x.c[i] % pa, x.c[i - 1] % pa, pa);
        if (top) {
            for (u64 j = 0; j < p_ - 1; ++j)
                r.c[j] = add_mod(r.c[j], mul_mod(top, fold_[0][j] % pa, pa), pa);
        }
        return r;
    }

    /// Exact division by lambda^{p-1} = -p w: multiply by -w^{-1}, then strip
    /// one p from every coefficient. Drops one precision level.
    CycloElem divide_by_lambda_block(const CycloElem& x) const {
        CycloElem t = neg(mul(x, w_inv_at(x.a)));
        CycloElem r = zero(x.a - 1);
        const u64 pa1 = pj_[x.a - 1];
        for (u64 i = 0; i < p_ - 1; ++i) {
            if (t.c[i] % p_ != 0)
                throw std::logic_error("divide_by_lambda: inexact p-division");
            r.c[i] = (t.c[i] / p_) % pa1;
        }
        return r;
    }

    CycloElem w_inv_at(u32 a) const {
        CycloElem w{p_, a, std::vector<u64>(p_ - 1)};
        const u64 pa = pj_[a];
        for (u64 i = 0; i < p_ - 1; ++i) w.c[i] = w_[i] % pa;
        return invert(w);
    }

    void build_tables() {
        const u64 n = p_ - 1;
        const u64 pa = pj_[acap_];
        // binom[j] = C(p, j+1) mod p^acap and w_[j] = C(p, j+1)/p mod p^acap,
        // via C(p,j)/p = C(p-1, j-1) / j
        const auto inv = inverse_table(n, pa);
        w_.assign(n, 0);
        std::vector<u64> fold0(n, 0);
        u64 cpm1 = 1;  // C(p-1, j-1), starts at j = 1
        for (u64 j = 1; j <= n; ++j) {
            w_[j - 1] = mul_mod(cpm1, inv[j], pa);
            const u64 cpj = mul_mod(w_[j - 1], p_ % pa, pa);  // C(p, j)
            fold0[j - 1] = neg_mod(cpj, pa);
            cpm1 = mul_mod(mul_mod(cpm1, (p_ - j) % pa, pa), inv[j], pa);
        }
        fold_.clear();
        fold_.reserve(n - 1);
        fold_.push_back(std::move(fold0));
        for (u64 t = 1; t + 1 < n; ++t) {
            const auto& prev = fold_.back();
            std::vector<u64> row(n, 0);
            const u64 top = prev[n - 1];
            for (u64 j = 1; j < n; ++j) row[j] = prev[j - 1];
            if (top) {
                for (u64 j = 0; j < n; ++j)
                    row[j] = add_mod(row[j], mul_mod(top, fold_[0][j], pa), pa);
            }
            fold_.push_back(std::move(row));
        }
    }

    u64 p_;
    u32 acap_;
    std::vector<u64> pj_;                 // p^0 .. p^acap
    std::vector<std::vector<u64>> fold_;  // lambda^{p-1+t}, t = 0..p-3
    std::vector<u64> w_;                  // w with lambda^{p-1} = -p w
};

struct FrobeniusWitness {
    bool passed = false;
    std::optional<u64> valuation;  // nullopt: at or above the precision cap
    u64 required = 0;
};

/// Measures v_pi(alpha^p - beta^p) for a unit alpha congruent to beta mod pi;
/// the valuation is always at least p+1.
inline FrobeniusWitness frobenius_power_check(const LambdaRing& R, const CycloElem& alpha,
                                              const CycloElem& beta) {
    if (R.pi_valuation(alpha).value_or(1) != 0)
        throw std::invalid_argument("frobenius_power_check: alpha must be a unit");
    if (!R.congruent_mod_pi(alpha, beta, 1))
        throw std::invalid_argument("frobenius_power_check: alpha != beta mod pi");
    const u64 p = R.prime();
    const u32 a = std::min(alpha.a, beta.a);
    if (R.valuation_cap(a) < p + 1)
        throw std::invalid_argument("frobenius_power_check: need precision >= p+1 pi-levels");
    const CycloElem d = R.sub(R.pow(alpha, p), R.pow(beta, p));
    FrobeniusWitness w;
    w.required = p + 1;
    w.valuation = R.pi_valuation(d);
    w.passed = !w.valuation.has_value() || *w.valuation >= p + 1;
    return w;
}

}  // namespace cyclo
