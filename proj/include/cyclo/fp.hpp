#pragma once

// Scalar arithmetic mod small primes and prime powers, primality testing,
// primitive roots, and discrete-log power tables for (Z/p)^*.
//
// Target range is p < 2^14; everything here is exact 64-bit arithmetic with
// 128-bit intermediates where products may overflow.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclo {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

inline u64 add_mod(u64 a, u64 b, u64 m) {
    u64 r = a + b;            // a,b < m <= 2^63, no overflow
    return r >= m ? r - m : r;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 neg_mod(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

inline u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse mod arbitrary modulus via extended Euclid; throws if not coprime.
inline u64 inv_mod(u64 a, u64 m) {
    i128 t = 0, new_t = 1;
    i128 r = m, new_r = a % m;
    while (new_r != 0) {
        i128 q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (r != 1) throw std::domain_error("inv_mod: element not invertible");
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

// Batch inversion of 1..n mod m (m a prime power, n < smallest prime factor).
// One inv_mod plus O(n) multiplications.
inline std::vector<u64> inverse_table(u64 n, u64 m) {
    std::vector<u64> pre(n + 1);
    pre[0] = 1;
    for (u64 i = 1; i <= n; ++i) pre[i] = mul_mod(pre[i - 1], i, m);
    std::vector<u64> inv(n + 1);
    u64 acc = inv_mod(pre[n], m);
    for (u64 i = n; i >= 1; --i) {
        inv[i] = mul_mod(acc, pre[i - 1], m);
        acc = mul_mod(acc, i, m);
    }
    inv[0] = 0;
    return inv;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d : {2ull, 3ull, 5ull, 7ull}) {
        if (n % d == 0) return n == d;
    }
    for (u64 d = 11; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> fs;
    for (u64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

// Smallest positive primitive root mod an odd prime p.
inline u64 primitive_root(u64 p) {
    if (p < 3 || !is_prime(p))
        throw std::invalid_argument("primitive_root: p must be an odd prime");
    const auto qs = prime_factors(p - 1);
    for (u64 u = 2; u < p; ++u) {
        bool ok = true;
        for (u64 q : qs) {
            if (pow_mod(u, (p - 1) / q, p) == 1) { ok = false; break; }
        }
        if (ok) return u;
    }
    throw std::logic_error("primitive_root: none found");  // unreachable for prime p
}

/// Power table u_i = u^i mod p for i = 0..p-2, with the inverse (discrete log)
/// lookup. Negative indices resolve through u_{-i} u_i = 1, i.e. mod p-1.
struct PowerTable {
    u64 p = 0;
    u64 u = 0;
    std::vector<u64> pw;    // pw[i] = u^i mod p, i in [0, p-1)
    std::vector<u64> dlog;  // dlog[x] = i with u^i = x; dlog[0] unused

    static PowerTable make(u64 p, u64 u) {
        if (p < 3 || !is_prime(p))
            throw std::invalid_argument("PowerTable: p must be an odd prime");
        if (u == 0 || u >= p)
            throw std::invalid_argument("PowerTable: u out of range");
        PowerTable t;
        t.p = p;
        t.u = u;
        t.pw.resize(p - 1);
        t.dlog.assign(p, 0);
        u64 x = 1;
        for (u64 i = 0; i + 1 < p; ++i) {
            t.pw[i] = x;
            if (i > 0 && x == 1)
                throw std::invalid_argument("PowerTable: u is not a primitive root");
            t.dlog[x] = i;
            x = mul_mod(x, u, p);
        }
        if (x != 1) throw std::invalid_argument("PowerTable: u is not a primitive root");
        return t;
    }

    // u^i with i any integer, reduced mod p-1.
    u64 at(i64 i) const {
        i64 n = static_cast<i64>(p) - 1;
        i64 r = i % n;
        if (r < 0) r += n;
        return pw[static_cast<u64>(r)];
    }

    u64 log(u64 x) const {
        if (x == 0 || x >= p) throw std::invalid_argument("PowerTable::log: x out of range");
        return dlog[x];
    }
};

}  // namespace cyclo
