#pragma once

// Bernoulli numbers modulo p, irregular indices, and the bridge from
// irregular indices to minus-part eigenvalues u^{2m+1}.
//
// The whole computation runs in F_p. This is sound for indices 2k <= p-3:
// by von Staudt-Clausen the denominator of B_{2k} is the product of q+1... of
// primes q with (q-1) | 2k, and (p-1) | 2k is impossible below p-1, so p
// never divides a denominator in range and every residue is well defined.

#include <map>
#include <vector>

#include "cyclo/eigen_set.hpp"
#include "cyclo/fp.hpp"

namespace cyclo {

/// Residues of B_2, B_4, ..., B_{p-3} mod p via the binomial convolution
/// recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0, entirely mod p. O(p^2).
inline std::map<u64, u64> bernoulli_even_mod_p(u64 p) {
    if (p < 3 || !is_prime(p))
        throw std::invalid_argument("bernoulli_even_mod_p: p must be an odd prime");
    std::map<u64, u64> out;
    if (p == 3) return out;  // no indices in [2, p-3]

    const u64 n = p - 3;
    const auto inv = inverse_table(p - 1, p);
    std::vector<u64> b(n + 1, 0);
    b[0] = 1;
    b[1] = p - inv[2];  // B_1 = -1/2

    // crow holds the Pascal row C(m, 0..m) mod p at the top of iteration m;
    // one in-place lift inside the loop produces C(m+1, .).
    std::vector<u64> crow(n + 2, 0);
    crow[0] = 1;
    crow[1] = 2;
    crow[2] = 1;  // row m = 2
    for (u64 m = 2; m <= n; ++m) {
        // lift C(m, .) to C(m+1, .): descending update, then the new diagonal
        for (u64 k = m; k >= 1; --k) crow[k] = add_mod(crow[k], crow[k - 1], p);
        crow[m + 1] = 1;
        if (m % 2 == 1) { b[m] = 0; continue; }  // odd B_m vanish for m >= 3
        u64 acc = 0;
        // only j = 0, 1 and even j contribute
        acc = add_mod(acc, crow[0], p);                       // j = 0, B_0 = 1
        acc = add_mod(acc, mul_mod(crow[1], b[1], p), p);     // j = 1
        for (u64 j = 2; j < m; j += 2)
            acc = add_mod(acc, mul_mod(crow[j], b[j], p), p);
        b[m] = mul_mod(neg_mod(acc, p), inv[m + 1], p);
    }
    for (u64 k = 2; k <= n; k += 2) out[k] = b[k];
    return out;
}

/// Sorted indices 2k in [2, p-3] with B_{2k} = 0 mod p.
inline std::vector<u64> irregular_indices(u64 p) {
    std::vector<u64> idx;
    for (const auto& [k, r] : bernoulli_even_mod_p(p))
        if (r == 0) idx.push_back(k);
    return idx;
}

inline u64 irregularity_index(u64 p) { return irregular_indices(p).size(); }

/// For each irregular index 2k, the minus-part eigenvalue mu = u^{2m+1} with
/// 2m = p-1-2k. Cardinality equals the irregularity index i_p.
inline EigenSet minus_eigenvalues_from_bernoulli(const PowerTable& t) {
    EigenSet s{t.p, t.u, {}};
    for (u64 two_k : irregular_indices(t.p)) {
        const u64 m2 = t.p - 1 - two_k;        // 2m
        const u64 e = m2 + 1;                  // odd exponent 2m+1
        s.members.push_back({t.pw[e], e, 1});
    }
    std::sort(s.members.begin(), s.members.end(),
              [](const EigenMember& a, const EigenMember& b) { return a.mu < b.mu; });
    return s;
}

struct IrregularityReport {
    u64 p = 0;
    u64 u = 0;
    std::map<u64, u64> bernoulli_residues;  // 2k -> B_{2k} mod p
    std::vector<u64> irregular;             // sorted irregular indices
    u64 i_p = 0;
    std::vector<u64> minus_eigenvalues;     // sorted residues u^{2m+1}
};

inline IrregularityReport irregularity_report(const PowerTable& t) {
    IrregularityReport r;
    r.p = t.p;
    r.u = t.u;
    r.bernoulli_residues = bernoulli_even_mod_p(t.p);
    for (const auto& [k, v] : r.bernoulli_residues)
        if (v == 0) r.irregular.push_back(k);
    r.i_p = r.irregular.size();
    for (const auto& e : minus_eigenvalues_from_bernoulli(t).members)
        r.minus_eigenvalues.push_back(e.mu);
    return r;
}

}  // namespace cyclo
