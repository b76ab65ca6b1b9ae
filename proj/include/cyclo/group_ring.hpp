#pragma once

// Elements of the group ring F_p[G] for G = Gal(Q(zeta_p)/Q) cyclic of order
// p-1, stored as the p-1 coefficients of sigma^0 .. sigma^{p-2}.

#include <vector>

#include "cyclo/fp.hpp"

namespace cyclo {

struct GroupRingElem {
    u64 p = 0;
    u64 u = 0;  // primitive root defining sigma
    std::vector<u64> c;  // c[j] = coefficient of sigma^j, j in [0, p-1)

    static GroupRingElem zero(const PowerTable& t) {
        return GroupRingElem{t.p, t.u, std::vector<u64>(t.p - 1, 0)};
    }

    // Coefficient of sigma^j with j any integer (sigma^{p-1} = identity).
    u64& at(i64 j) {
        i64 n = static_cast<i64>(p) - 1;
        i64 r = j % n;
        if (r < 0) r += n;
        return c[static_cast<u64>(r)];
    }
    u64 at(i64 j) const { return const_cast<GroupRingElem*>(this)->at(j); }

    /// Ring morphism sigma -> s: returns sum_j c[j] s^j mod p.
    u64 eval_scalar(u64 s) const {
        if (s % p == 0) throw std::invalid_argument("eval_scalar: s must be nonzero mod p");
        s %= p;
        u64 r = 0;
        for (std::size_t j = c.size(); j-- > 0;) r = add_mod(mul_mod(r, s, p), c[j], p);
        return r;
    }
};

/// p*theta = sum_{m=0}^{p-2} u^m sigma^{-m}, the integral Stickelberger
/// element. The coefficient multiset is exactly {1, ..., p-1}.
inline GroupRingElem stickelberger_element(const PowerTable& t) {
    GroupRingElem e = GroupRingElem::zero(t);
    for (u64 m = 0; m + 1 < t.p; ++m) e.at(-static_cast<i64>(m)) = t.pw[m];
    return e;
}

}  // namespace cyclo
