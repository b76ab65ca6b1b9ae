#pragma once

// Validated sets of sigma-eigenvalues mu in F_p^* with their discrete logs,
// the minimal annihilator polynomials they induce over subgroup towers, and
// the rank inequalities those polynomials satisfy.

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclo/fp.hpp"
#include "cyclo/fp_poly.hpp"

namespace cyclo {

struct EigenMember {
    u64 mu = 0;  // eigenvalue in [1, p)
    u64 m = 0;   // discrete log: mu = u^m
    u64 multiplicity = 1;

    friend bool operator==(const EigenMember& a, const EigenMember& b) {
        return a.mu == b.mu && a.m == b.m;
    }
};

struct EigenSet {
    u64 p = 0;
    u64 u = 0;
    std::vector<EigenMember> members;  // sorted by mu, pairwise distinct

    u64 r1() const { return members.size(); }
    bool empty() const { return members.empty(); }

    bool contains(u64 mu) const {
        return std::any_of(members.begin(), members.end(),
                           [&](const EigenMember& e) { return e.mu == mu; });
    }

    std::vector<u64> mus() const {
        std::vector<u64> v;
        v.reserve(members.size());
        for (const auto& e : members) v.push_back(e.mu);
        return v;
    }
};

// Exclusion rules for eigenvalue validation. mu != u is unconditional
// (Stickelberger annihilation); mu != 1 rests on h(Q) = 1; mu != -1 rests on
// p not dividing h(K_2), classical in the working range; the Vandiver-style
// rule mu^{(p-1)/2} != 1 assumes p does not divide h^+ and is off by default.
struct ExclusionOptions {
    bool forbid_u = true;
    bool forbid_one = true;
    bool forbid_minus_one = true;
    bool vandiver = false;
};

struct Rejection {
    std::string rule;  // identifier of the violated rule
    u64 mu = 0;
};

struct ValidationResult {
    std::optional<EigenSet> set;  // engaged iff no rejections
    std::vector<Rejection> rejections;

    bool ok() const { return set.has_value(); }
};

/// Builds the deduplicated EigenSet from candidate residues, applying the
/// enabled exclusion rules. Rejections carry rule identifiers; values outside
/// [1, p) are a precondition violation and throw.
inline ValidationResult validate_eigenvalue_set(const PowerTable& t,
                                                std::span<const u64> candidates,
                                                ExclusionOptions opts = {}) {
    const u64 p = t.p;
    ValidationResult res;
    for (u64 mu : candidates) {
        if (mu == 0 || mu >= p)
            throw std::invalid_argument("validate_eigenvalue_set: mu out of range [1, p)");
        if (opts.forbid_u && mu == t.u) res.rejections.push_back({"mu-equals-u", mu});
        else if (opts.forbid_one && mu == 1) res.rejections.push_back({"mu-equals-one", mu});
        else if (opts.forbid_minus_one && mu == p - 1)
            res.rejections.push_back({"mu-equals-minus-one", mu});
        else if (opts.vandiver && pow_mod(mu, (p - 1) / 2, p) == 1)
            res.rejections.push_back({"vandiver", mu});
    }
    if (!res.rejections.empty()) return res;

    EigenSet s{p, t.u, {}};
    std::vector<u64> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end());
    for (u64 mu : sorted) {
        if (!s.members.empty() && s.members.back().mu == mu) {
            ++s.members.back().multiplicity;  // multiset input collapses to a set
            continue;
        }
        s.members.push_back({mu, t.log(mu), 1});
    }
    res.set = std::move(s);
    return res;
}

inline void require_divisor(u64 p, u64 d) {
    if (d == 0 || (p - 1) % d != 0)
        throw std::invalid_argument("expected d dividing p-1");
}

/// {mu^d : mu in M} with duplicates collapsed; its cardinality is r_d.
inline std::vector<u64> induced_eigenvalues(const EigenSet& m, u64 d) {
    require_divisor(m.p, d);
    std::vector<u64> v;
    v.reserve(m.members.size());
    for (const auto& e : m.members) v.push_back(pow_mod(e.mu, d, m.p));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Elementary symmetric functions S_0..S_{r_d} of the distinct values mu^d.
inline std::vector<u64> symmetric_coefficients(const EigenSet& m, u64 d) {
    const auto vals = induced_eigenvalues(m, d);
    std::vector<u64> s(vals.size() + 1, 0);
    s[0] = 1;
    std::size_t used = 0;
    for (u64 v : vals) {
        ++used;
        for (std::size_t k = used; k >= 1; --k)
            s[k] = add_mod(s[k], mul_mod(v, s[k - 1], m.p), m.p);
    }
    return s;
}

/// prod over distinct mu^d of (U^d - mu^d), expanded in U; degree d*r_d.
/// Self-checks that prod (U - mu) divides the result.
inline FpPoly induced_min_poly(const EigenSet& m, u64 d) {
    require_divisor(m.p, d);
    const auto vals = induced_eigenvalues(m, d);
    FpPoly f = FpPoly::one(m.p);
    for (u64 v : vals) {
        std::vector<u64> factor(d + 1, 0);  // U^d - v
        factor[0] = neg_mod(v, m.p);
        factor[d] = 1;
        f = f * FpPoly{m.p, std::move(factor)};
    }
    if (!m.empty()) {
        const FpPoly base = FpPoly::from_roots(m.p, m.mus());
        if (!divides(base, f))
            throw std::logic_error("induced_min_poly: divisibility self-check failed");
    }
    return f;
}

/// m odd goes to the minus part, m even to the plus part.
inline std::pair<EigenSet, EigenSet> minus_plus_split(const EigenSet& m) {
    EigenSet minus{m.p, m.u, {}}, plus{m.p, m.u, {}};
    for (const auto& e : m.members) (e.m % 2 == 1 ? minus : plus).members.push_back(e);
    return {minus, plus};
}

struct RankProfile {
    u64 p = 0, d = 0, g = 0;
    u64 r1 = 0, rd = 0, rg = 0;
    bool sandwich_d = false;  // r_d <= r_1 <= d * r_d
    bool sandwich_g = false;  // r_g <= r_1 <= g * r_g
    bool product = false;     // r_d * r_g >= r_1
    bool collapse = false;    // r_d = 1 => r_g = r_1, and symmetrically

    bool all() const { return sandwich_d && sandwich_g && product && collapse; }
};

/// Computes r_1, r_d, r_g and checks every inequality they must satisfy for a
/// coprime splitting d*g = p-1. Never reports pass on a violated inequality.
inline RankProfile rank_inequality_report(const EigenSet& m, u64 d, u64 g) {
    require_divisor(m.p, d);
    require_divisor(m.p, g);
    if (d * g != m.p - 1) throw std::invalid_argument("rank_inequality_report: d*g != p-1");
    if (std::gcd(d, g) != 1)
        throw std::invalid_argument("rank_inequality_report: d, g must be coprime");
    if (m.empty())
        throw std::invalid_argument("rank_inequality_report: need r_d, r_g >= 1");

    RankProfile r;
    r.p = m.p;
    r.d = d;
    r.g = g;
    r.r1 = m.r1();
    r.rd = induced_eigenvalues(m, d).size();
    r.rg = induced_eigenvalues(m, g).size();
    r.sandwich_d = r.rd <= r.r1 && r.r1 <= r.rd * d;
    r.sandwich_g = r.rg <= r.r1 && r.r1 <= r.rg * g;
    r.product = r.rd * r.rg >= r.r1;
    r.collapse = (r.rd != 1 || r.rg == r.r1) && (r.rg != 1 || r.rd == r.r1);
    return r;
}

struct BoundsReport {
    // chain r_p^- - r_p^+ <= i_p = r_1^- <= r_p^-
    bool gap_le_ip = false;
    bool ip_eq_r1minus = false;
    bool r1minus_le_rpminus = false;
    // chain r_p^- - r_p^+ <= rho_1 <= r_p^-
    bool gap_le_rho1 = false;
    bool rho1_le_rpminus = false;

    bool all() const {
        return gap_le_ip && ip_eq_r1minus && r1minus_le_rpminus && gap_le_rho1 &&
               rho1_le_rpminus;
    }
};

/// Pure predicate over the structural rank bounds; each comparison reported
/// separately.
inline BoundsReport structure_bounds_check(u64 rp_minus, u64 rp_plus, u64 r1_minus,
                                           u64 i_p, u64 rho_1) {
    const u64 gap = rp_minus > rp_plus ? rp_minus - rp_plus : 0;
    BoundsReport b;
    b.gap_le_ip = gap <= i_p;
    b.ip_eq_r1minus = i_p == r1_minus;
    b.r1minus_le_rpminus = r1_minus <= rp_minus;
    b.gap_le_rho1 = gap <= rho_1;
    b.rho1_le_rpminus = rho_1 <= rp_minus;
    return b;
}

}  // namespace cyclo
