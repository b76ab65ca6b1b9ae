#pragma once

// Synthesis and classification of singular-number congruences: solutions of
// the sigma-eigenvector congruence sigma(V) = mu V mod pi^K, the explicit
// closed-form candidate and its gamma-recurrence twin, pi-adic valuation
// analysis, and the product/quotient primariness laws.
//
// Class-group constructions are out of scope here; candidates are synthetic
// elements satisfying the same congruences, which is what every law below is
// actually a statement about.

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cyclo/cyclo_elem.hpp"
#include "cyclo/fp.hpp"

namespace cyclo {

namespace detail {

inline u32 p_valuation(u64 x, u64 p, u32 cap) {
    if (x == 0) return cap;
    u32 v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
}

/// Generators of { x in (Z/p^a)^n : A x = 0 mod p^a }. Column reduction with
/// valuation pivoting; retiring a pivot of valuation v > 0 re-inserts the
/// column scaled by p^{a-v}, which keeps the span complete (Howell form).
inline std::vector<std::vector<u64>> kernel_mod_prime_power(
    const std::vector<std::vector<u64>>& A, u64 p, u32 a, u64 pa) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    struct Col {
        std::vector<u64> av;  // image under A
        std::vector<u64> uv;  // combination of unit vectors producing it
    };
    std::vector<Col> pool;
    pool.reserve(n + m);
    for (std::size_t c = 0; c < n; ++c) {
        Col col;
        col.av.resize(m);
        for (std::size_t r = 0; r < m; ++r) col.av[r] = A[r][c] % pa;
        col.uv.assign(n, 0);
        col.uv[c] = 1;
        pool.push_back(std::move(col));
    }
    std::vector<std::size_t> active(n);
    for (std::size_t c = 0; c < n; ++c) active[c] = c;

    for (std::size_t r = 0; r < m; ++r) {
        // pivot: minimal p-valuation entry in this row among active columns
        u32 best_v = a;
        std::size_t best = active.size();
        for (std::size_t idx = 0; idx < active.size(); ++idx) {
            const u32 v = p_valuation(pool[active[idx]].av[r], p, a);
            if (v < best_v) { best_v = v; best = idx; }
        }
        if (best == active.size()) continue;  // row already null mod p^a

        const std::size_t pc = active[best];
        active.erase(active.begin() + best);
        // scale pivot column so its row-r entry is exactly p^{best_v}
        u64 pv = 1;
        for (u32 i = 0; i < best_v; ++i) pv *= p;
        const u64 unit = (pool[pc].av[r] / pv) % pa;
        if (unit % p == 0) throw std::logic_error("kernel: pivot normalization failed");
        const u64 unit_inv = inv_mod(unit, pa);
        for (auto& x : pool[pc].av) x = mul_mod(x, unit_inv, pa);
        for (auto& x : pool[pc].uv) x = mul_mod(x, unit_inv, pa);

        for (std::size_t idx : active) {
            const u64 e = pool[idx].av[r];
            if (e == 0) continue;
            const u64 q = (e / pv) % pa;  // exact: val(e) >= best_v
            for (std::size_t i = 0; i < m; ++i)
                pool[idx].av[i] = sub_mod(pool[idx].av[i], mul_mod(q, pool[pc].av[i], pa), pa);
            for (std::size_t i = 0; i < n; ++i)
                pool[idx].uv[i] = sub_mod(pool[idx].uv[i], mul_mod(q, pool[pc].uv[i], pa), pa);
        }
        if (best_v > 0) {
            // torsion continuation of the retired pivot
            u64 scale = 1;
            for (u32 i = 0; i < a - best_v; ++i) scale *= p;
            Col cont;
            cont.av.resize(m);
            cont.uv.resize(n);
            for (std::size_t i = 0; i < m; ++i) cont.av[i] = mul_mod(pool[pc].av[i], scale, pa);
            for (std::size_t i = 0; i < n; ++i) cont.uv[i] = mul_mod(pool[pc].uv[i], scale, pa);
            pool.push_back(std::move(cont));
            active.push_back(pool.size() - 1);
        }
    }

    std::vector<std::vector<u64>> gens;
    for (std::size_t idx : active) {
        for (u64 x : pool[idx].av)
            if (x != 0) throw std::logic_error("kernel: residual image on free column");
        bool nonzero = false;
        for (u64 x : pool[idx].uv) nonzero |= (x != 0);
        if (nonzero) gens.push_back(pool[idx].uv);
    }
    return gens;
}

}  // namespace detail

struct EigenSpaceResult {
    u64 mu = 0;
    u64 k = 0;                      // congruence depth pi^K
    u32 precision = 0;              // coefficient precision of the basis
    std::vector<CycloElem> basis;   // each verifies sigma(V) = mu V mod pi^K, v_pi >= 1
};

/// Generating set of { V : sigma(V) = mu V mod pi^K, v_pi(V) >= 1 } at
/// coefficient precision a. Every returned element is re-verified by
/// substitution; an empty basis is a valid answer.
inline EigenSpaceResult eigen_space(const LambdaRing& R, const PowerTable& t, u64 mu, u64 k,
                                    u32 a) {
    const u64 p = R.prime();
    if (mu == 0 || mu >= p) throw std::invalid_argument("eigen_space: mu out of range");
    if (k > R.valuation_cap(a))
        throw std::invalid_argument("eigen_space: K exceeds working precision");
    const u64 n = p - 1;
    const u64 pa = R.coeff_modulus(a);

    // columns: (sigma - mu)(lambda^c) in the lambda basis
    const CycloElem slambda = R.sigma(R.lambda_power(1, a), t);
    std::vector<std::vector<u64>> A(n + 1, std::vector<u64>(n, 0));
    CycloElem cur = R.one(a);  // (sigma lambda)^c
    for (u64 c = 0; c < n; ++c) {
        CycloElem col = R.sub(cur, R.mul_scalar(R.lambda_power(c, a), mu));
        // row j enforced mod p^{e_j} with e_j = ceil((K-j)/(p-1)); scale by p^{a-e_j}
        for (u64 j = 0; j < n; ++j) {
            u64 e = k > j ? (k - j + (p - 2)) / (p - 1) : 0;
            if (e > a) e = a;
            u64 scale = 1;
            for (u64 i = 0; i < a - e; ++i) scale *= p;
            A[j][c] = mul_mod(col.c[j] % pa, scale, pa);
        }
        cur = R.mul(cur, slambda);
    }
    // v_pi(V) >= 1: constant coefficient divisible by p
    A[n][0] = pa / p;

    EigenSpaceResult res;
    res.mu = mu;
    res.k = k;
    res.precision = a;
    for (auto& g : detail::kernel_mod_prime_power(A, p, a, pa)) {
        CycloElem v{p, a, std::move(g)};
        if (R.pi_valuation(v).value_or(R.valuation_cap(a)) < 1)
            throw std::logic_error("eigen_space: solution violates v_pi >= 1");
        if (!R.congruent_mod_pi(R.sigma(v, t), R.mul_scalar(v, mu), k))
            throw std::logic_error("eigen_space: solution fails substitution re-check");
        res.basis.push_back(std::move(v));
    }
    return res;
}

enum class Provenance { formula, recurrence, eigen_solver };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::formula: return "formula";
        case Provenance::recurrence: return "recurrence";
        case Provenance::eigen_solver: return "eigen-solver";
    }
    return "?";
}

/// Synthetic singular-number candidate: a normalized element C = 1 mod pi
/// together with the eigenvalue mu = u^m it satisfies sigma(C) = C^mu
/// against, and the pi-depth K that congruence has been verified to.
struct SingularCandidate {
    u64 p = 0;
    u64 u = 0;
    u64 mu = 0;
    u64 m = 0;          // exponent with mu = u^m; odd (2m'+1) for minus-part candidates
    u64 gamma_p3 = 0;   // free scalar of the explicit construction, 0 if n/a
    Provenance provenance = Provenance::formula;
    u64 verified_k = 0;
    CycloElem element;
};

namespace detail {

// Adds c * zeta^e (exponent mod p) to a zeta-basis accumulator over indices
// 0..p-2, spreading zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2}).
inline void add_zeta_term(std::vector<i64>& zc, u64 p, u64 e, u64 c) {
    e %= p;
    if (e <= p - 2) {
        zc[e] += static_cast<i64>(c);
    } else {
        for (auto& x : zc) x -= static_cast<i64>(c);
    }
}

}  // namespace detail

/// The explicit candidate for mu = u^{2m+1}, 2m+1 > (p-1)/2:
///   C = 1 + gamma * mu^{-1}/(mu-1) * sum_{j=0}^{p-2} mu^{-j} zeta^{u_j},
/// the sign and unit factor fixed so that gamma is literally the
/// zeta^{u_{p-3}} coefficient of C in the basis 1, zeta^{u_0}, ...,
/// zeta^{u_{p-3}} -- the same convention the gamma recurrence uses.
/// Verifies sigma(C) = C^mu mod pi^{p-1} and v_pi(C-1) = 2m+1 before
/// returning.
inline SingularCandidate synthesize_closed_form(const LambdaRing& R, const PowerTable& t,
                                                u64 m, u64 gamma_p3, u32 a = 2) {
    const u64 p = R.prime();
    const u64 e = 2 * m + 1;
    if (!(e > (p - 1) / 2 && e <= p - 2))
        throw std::out_of_range("synthesize_closed_form: need p-2 >= 2m+1 > (p-1)/2");
    if (gamma_p3 >= p) throw std::invalid_argument("synthesize_closed_form: gamma out of range");
    if (a < 2) throw std::invalid_argument("synthesize_closed_form: need precision >= 2");
    const u64 mu = t.pw[e];

    SingularCandidate cand;
    cand.p = p;
    cand.u = t.u;
    cand.mu = mu;
    cand.m = e;
    cand.gamma_p3 = gamma_p3;
    cand.provenance = Provenance::formula;
    cand.verified_k = p - 1;

    if (gamma_p3 == 0) {
        cand.element = R.one(a);
        return cand;
    }

    const u64 mu_inv = inv_mod(mu, p);
    const u64 f = mul_mod(mul_mod(gamma_p3, inv_mod(sub_mod(mu, 1, p), p), p), mu_inv, p);
    std::vector<i64> zc(p - 1, 0);
    zc[0] += 1;
    u64 muj = 1;  // mu^{-j}
    for (u64 j = 0; j + 1 < p; ++j) {
        detail::add_zeta_term(zc, p, t.pw[j], mul_mod(f, muj, p));
        muj = mul_mod(muj, mu_inv, p);
    }
    cand.element = R.encode_zeta_poly(zc, a);

    if (!R.congruent_mod_pi(R.sigma(cand.element, t), R.pow(cand.element, mu), p - 1))
        throw std::logic_error("synthesize_closed_form: eigen congruence failed");
    const auto v = R.pi_valuation(R.sub(cand.element, R.one(a)));
    if (!v || *v != e)
        throw std::logic_error("synthesize_closed_form: valuation is not 2m+1");
    return cand;
}

/// Coefficient record of the gamma recurrence: gamma = -gamma_{p-3}/(mu-1),
/// gamma_j = -(mu^{-(j+1)} + ... + mu^{-1}) gamma_{p-3}.
struct GammaRecord {
    u64 p = 0, u = 0, mu = 0, m = 0;  // m = odd exponent 2m'+1
    u64 gamma = 0;                    // rational-part coefficient
    std::vector<u64> gamma_j;         // gamma_0 .. gamma_{p-4}
    u64 gamma_p3 = 0;
    bool self_consistent = false;     // the lemma's closing gamma_{p-3} congruence
};

inline GammaRecord gamma_recurrence(const PowerTable& t, u64 m, u64 gamma_p3) {
    const u64 p = t.p;
    const u64 e = 2 * m + 1;
    if (!(e > (p - 1) / 2 && e <= p - 2))
        throw std::out_of_range("gamma_recurrence: need p-2 >= 2m+1 > (p-1)/2");
    if (gamma_p3 >= p) throw std::invalid_argument("gamma_recurrence: gamma out of range");
    GammaRecord rec;
    rec.p = p;
    rec.u = t.u;
    rec.mu = t.pw[e];
    rec.m = e;
    rec.gamma_p3 = gamma_p3;
    rec.gamma = neg_mod(mul_mod(gamma_p3, inv_mod(sub_mod(rec.mu, 1, p), p), p), p);
    const u64 mu_inv = inv_mod(rec.mu, p);
    u64 s = 0, pw = 1;
    rec.gamma_j.resize(p - 3);
    for (u64 j = 0; j + 3 < p; ++j) {
        pw = mul_mod(pw, mu_inv, p);  // mu^{-(j+1)}
        s = add_mod(s, pw, p);
        rec.gamma_j[j] = neg_mod(mul_mod(s, gamma_p3, p), p);
    }
    // closing line: gamma_{p-3} = -(mu^{-(p-2)} + ... + mu^{-1}) gamma_{p-3}
    pw = mul_mod(pw, mu_inv, p);
    s = add_mod(s, pw, p);
    rec.self_consistent = neg_mod(mul_mod(s, gamma_p3, p), p) == gamma_p3;
    return rec;
}

/// 1 + gamma + sum_j gamma_j zeta^{u_j}, the recurrence's candidate.
inline CycloElem assemble_from_gammas(const LambdaRing& R, const PowerTable& t,
                                      const GammaRecord& rec, u32 a = 2) {
    const u64 p = R.prime();
    std::vector<i64> zc(p - 1, 0);
    zc[0] += static_cast<i64>(1 + rec.gamma);
    for (u64 j = 0; j + 3 < p; ++j) detail::add_zeta_term(zc, p, t.pw[j], rec.gamma_j[j]);
    detail::add_zeta_term(zc, p, t.pw[p - 3], rec.gamma_p3);
    return R.encode_zeta_poly(zc, a);
}

/// Replaces C by C^n with n c_0 = 1 mod p, forcing the leading lambda
/// coefficient of C - 1 to 1. Identity elements pass through.
inline CycloElem normalize_leading_coeff(const LambdaRing& R, const CycloElem& x) {
    const u64 p = R.prime();
    const CycloElem d = R.sub(x, R.one(x.a));
    const auto v = R.pi_valuation(d);
    if (!v) return x;
    const u64 k = *v % (p - 1);
    u64 c = d.c[k];
    while (c % p == 0) c /= p;
    return R.pow(x, inv_mod(c % p, p));
}

struct ValuationAnalysis {
    std::optional<u64> nu;          // v_pi(C - 1); nullopt = at sentinel
    bool primary_at_p = false;      // singular-number threshold pi^p
    bool primary_at_p1 = false;     // unit threshold pi^{p+1}
    bool residue_law_ok = false;    // nu < p implies u^nu = mu
    bool meets_lower_bound = false; // nu >= m
};

/// Measures v_pi(C-1) and classifies. The eigen congruence is re-checked at
/// the candidate's recorded depth; a residue-law violation is reported in the
/// result, never silently dropped.
inline ValuationAnalysis analyze_valuation(const LambdaRing& R, const PowerTable& t,
                                           const SingularCandidate& c) {
    const u64 p = R.prime();
    if (!R.congruent_mod_pi(R.sigma(c.element, t), R.pow(c.element, c.mu), c.verified_k))
        throw std::invalid_argument("analyze_valuation: eigen congruence re-check failed");
    ValuationAnalysis out;
    out.nu = R.pi_valuation(R.sub(c.element, R.one(c.element.a)));
    if (!out.nu) {
        out.primary_at_p = R.valuation_cap(c.element.a) >= p;
        out.primary_at_p1 = R.valuation_cap(c.element.a) >= p + 1;
        out.residue_law_ok = true;
        out.meets_lower_bound = true;
        return out;
    }
    out.primary_at_p = *out.nu >= p;
    out.primary_at_p1 = *out.nu >= p + 1;
    out.residue_law_ok = *out.nu >= p || t.pw[*out.nu % (p - 1)] == c.mu;
    out.meets_lower_bound = *out.nu >= c.m;
    return out;
}

/// v_pi(x - 1) >= threshold for normalized x; threshold p for singular
/// numbers, p+1 for units. The "congruent to an integer p-th power" test
/// collapses to this valuation test: any witness c = 1 mod p has
/// c^p = 1 mod pi^{p+1}.
inline bool is_primary(const LambdaRing& R, const CycloElem& x, u64 threshold) {
    const u64 p = R.prime();
    if (threshold != p && threshold != p + 1)
        throw std::invalid_argument("is_primary: threshold must be p or p+1");
    if (R.valuation_cap(x.a) < threshold)
        throw InsufficientPrecision("is_primary: threshold beyond working precision");
    if (R.pi_valuation(x).value_or(1) != 0 || !R.congruent_mod_pi(x, R.one(x.a), 1))
        throw std::invalid_argument("is_primary: element must be normalized (= 1 mod pi)");
    const auto v = R.pi_valuation(R.sub(x, R.one(x.a)));
    return !v || *v >= threshold;
}

struct ProductClassification {
    bool primary = false;             // measured on the product, threshold p
    std::optional<u64> valuation;     // v_pi(product - 1)
    bool matches_factor_rule = false; // primary iff all factors primary
    bool min_law_ok = false;          // finite case: valuation = min over factors
};

/// Forms prod C_i^{alpha_i} over candidates with pairwise distinct
/// eigenvalues and checks the primary-iff-all-primary law plus the
/// min-valuation law for the not-primary case.
inline ProductClassification product_classification(
    const LambdaRing& R, std::span<const std::pair<SingularCandidate, u64>> factors) {
    const u64 p = R.prime();
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& [c, alpha] = factors[i];
        if (alpha == 0 || alpha >= p)
            throw std::invalid_argument("product_classification: exponent out of [1, p)");
        for (std::size_t j = i + 1; j < factors.size(); ++j)
            if (factors[j].first.mu == c.mu)
                throw std::invalid_argument("product_classification: eigenvalues must be pairwise distinct");
    }
    u32 a = 0;
    for (const auto& [c, alpha] : factors) a = a ? std::min(a, c.element.a) : c.element.a;
    if (a == 0) a = 2;
    if (R.valuation_cap(a) < p + 1)
        throw InsufficientPrecision("product_classification: need cap >= p+1");
    CycloElem prod = R.one(a);
    bool all_primary = true;
    std::optional<u64> min_nu;
    for (const auto& [c, alpha] : factors) {
        prod = R.mul(prod, R.pow(c.element, alpha));
        const auto nu = R.pi_valuation(R.sub(c.element, R.one(c.element.a)));
        const bool prim = !nu || *nu >= p;
        all_primary = all_primary && prim;
        if (!prim && (!min_nu || *nu < *min_nu)) min_nu = nu;
    }
    ProductClassification out;
    out.valuation = R.pi_valuation(R.sub(prod, R.one(a)));
    out.primary = !out.valuation || *out.valuation >= p;
    out.matches_factor_rule = (out.primary == all_primary);
    out.min_law_ok = all_primary || (out.valuation && min_nu && *out.valuation == *min_nu);
    return out;
}

struct QuotientCheck {
    u64 required = 0;             // p
    std::optional<u64> measured;  // v_pi(C1 C2^{-1} - 1)
    bool passed = false;
};

/// Same-mu candidates with eigen congruences verified mod pi^{p+1} have a
/// singular primary quotient: v_pi(C1 C2^{-1} - 1) >= p.
inline QuotientCheck quotient_primary_check(const LambdaRing& R, const PowerTable& t,
                                            const SingularCandidate& c1,
                                            const SingularCandidate& c2) {
    const u64 p = R.prime();
    if (c1.mu != c2.mu)
        throw std::invalid_argument("quotient_primary_check: candidates must share mu");
    if (c1.verified_k < p + 1 || c2.verified_k < p + 1)
        throw std::invalid_argument(
            "quotient_primary_check: eigen congruence must be known mod pi^{p+1}");
    for (const auto* c : {&c1, &c2})
        if (!R.congruent_mod_pi(R.sigma(c->element, t), R.pow(c->element, c->mu), p + 1))
            throw std::invalid_argument("quotient_primary_check: eigen congruence re-check failed");
    const CycloElem n1 = normalize_leading_coeff(R, c1.element);
    const CycloElem n2 = normalize_leading_coeff(R, c2.element);
    const CycloElem q = R.mul(n1, R.invert(n2));
    QuotientCheck out;
    out.required = p;
    out.measured = R.pi_valuation(R.sub(q, R.one(q.a)));
    out.passed = !out.measured || *out.measured >= p;
    return out;
}

/// Metadata header line followed by the element's textual format.
inline std::string to_text(const SingularCandidate& c) {
    std::ostringstream os;
    os << "candidate mu=" << c.mu << " m=" << c.m << " gamma=" << c.gamma_p3
       << " provenance=" << provenance_name(c.provenance) << " verified-k=" << c.verified_k
       << '\n'
       << to_text(c.element);
    return os.str();
}

/// Harvests same-mu candidates C = 1 + V from the eigen-space solver at
/// congruence depth pi^{p+1}, filtered to v_pi(V) exactly m; deterministic in
/// the seed. Requires 2m >= p+1 so the cross term of (1+V)^mu stays below the
/// verification depth.
inline std::vector<SingularCandidate> eigen_solver_candidates(const LambdaRing& R,
                                                              const PowerTable& t, u64 m,
                                                              std::size_t count, u64 seed) {
    const u64 p = R.prime();
    if (m % 2 == 0 || m > p - 2) throw std::invalid_argument("eigen_solver_candidates: m must be odd, <= p-2");
    if (2 * m < p + 1)
        throw std::invalid_argument("eigen_solver_candidates: need 2m >= p+1");
    const u64 mu = t.pw[m];
    const u32 a = 2;
    const auto space = eigen_space(R, t, mu, p + 1, a);
    std::vector<SingularCandidate> out;
    std::mt19937_64 rng(seed);
    const u64 pa = R.coeff_modulus(a);
    auto try_add = [&](const CycloElem& v) {
        if (out.size() >= count) return;
        if (R.pi_valuation(v).value_or(0) != m) return;
        SingularCandidate c;
        c.p = p;
        c.u = t.u;
        c.mu = mu;
        c.m = m;
        c.provenance = Provenance::eigen_solver;
        c.verified_k = p + 1;
        c.element = R.add(R.one(a), v);
        if (!R.congruent_mod_pi(R.sigma(c.element, t), R.pow(c.element, mu), p + 1)) return;
        for (const auto& prev : out)
            if (prev.element == c.element) return;
        out.push_back(std::move(c));
    };
    for (const auto& g : space.basis) try_add(g);
    for (std::size_t it = 0; it < 64 * count && out.size() < count; ++it) {
        CycloElem v = R.zero(a);
        for (const auto& g : space.basis)
            v = R.add(v, R.mul_scalar(g, rng() % pa));
        try_add(v);
    }
    return out;
}

}  // namespace cyclo
