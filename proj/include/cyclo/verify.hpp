#pragma once

// Invariant suites run by the `verify` command: each suite sweeps a prime
// range, counts checks, and serializes the first counterexample it finds.
//
// The Bernoulli oracle here is a second, algorithmically independent
// implementation (Akiyama-Tanigawa run at the doubled internal modulus p^2);
// it exists so the library's convolution recurrence is never trusted as its
// own witness. The lambda suite likewise cross-checks ring multiplication
// against a local textbook convolution with independently derived reduction
// constants; `inject_fault` corrupts one of those constants to demonstrate
// that the harness actually detects a broken reduction.

#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cyclo/bernoulli.hpp"
#include "cyclo/cyclo_elem.hpp"
#include "cyclo/eigen_set.hpp"
#include "cyclo/fp_poly.hpp"
#include "cyclo/group_ring.hpp"
#include "cyclo/singular.hpp"
#include "cyclo/units.hpp"

namespace cyclo::verify {

inline std::vector<u64> primes_in(u64 lo, u64 hi) {
    std::vector<u64> ps;
    for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n)
        if (is_prime(n)) ps.push_back(n);
    return ps;
}

/// Ordered map over inputs with a worker pool; output order is input order,
/// so results are deterministic regardless of scheduling.
template <class T, class F>
auto parallel_map_ordered(const std::vector<T>& inputs, unsigned jobs, F f) {
    using R = std::invoke_result_t<F, const T&>;
    std::vector<R> out(inputs.size());
    if (jobs <= 1 || inputs.size() <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = f(inputs[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
        std::size_t i;
        while ((i = next.fetch_add(1)) < inputs.size()) {
            try {
                out[i] = f(inputs[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(inputs.size()));
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

/// Akiyama-Tanigawa transform over Z/p^2 (doubled internal modulus), reduced
/// mod p at the end. Independent of the convolution recurrence in
/// bernoulli.hpp; even indices are convention-free.
inline std::map<u64, u64> bernoulli_even_oracle(u64 p) {
    std::map<u64, u64> out;
    if (p < 5) return out;
    const u64 p2 = p * p;
    const u64 n = p - 3;
    std::vector<u64> a(n + 1);
    for (u64 j = 0; j <= n; ++j) a[j] = inv_mod(j + 1, p2);
    for (u64 i = 1; i <= n; ++i) {
        for (u64 j = 0; j + i <= n; ++j)
            a[j] = mul_mod(j + 1, sub_mod(a[j], a[j + 1], p2), p2);
        if (i % 2 == 0) out[i] = a[0] % p;
    }
    return out;
}

inline std::vector<u64> irregular_indices_oracle(u64 p) {
    std::vector<u64> idx;
    for (const auto& [k, r] : bernoulli_even_oracle(p))
        if (r == 0) idx.push_back(k);
    return idx;
}

struct SuiteResult {
    std::string suite;
    u64 checks = 0;
    u64 failures = 0;
    std::string first_counterexample;

    bool passed() const { return failures == 0; }

    void merge(const SuiteResult& other) {
        checks += other.checks;
        failures += other.failures;
        if (first_counterexample.empty()) first_counterexample = other.first_counterexample;
    }
};

struct Options {
    u64 lo = 5;
    u64 hi = 31;
    u32 precision = 0;  // 0 = suite default
    u64 seed = 1;
    unsigned jobs = 1;
    bool inject_fault = false;  // corrupt the reference lambda-reduction constant
};

namespace detail {

struct Checker {
    SuiteResult res;

    void check(bool ok, const std::function<std::string()>& describe) {
        ++res.checks;
        if (!ok) {
            ++res.failures;
            if (res.first_counterexample.empty()) res.first_counterexample = describe();
        }
    }
    void check(bool ok, const std::string& describe) {
        check(ok, [&] { return describe; });
    }
};

template <class F>
SuiteResult per_prime(const char* name, const Options& opt, F body) {
    const auto ps = primes_in(std::max<u64>(opt.lo, 3), opt.hi);
    auto results = parallel_map_ordered(ps, opt.jobs, [&](const u64& p) {
        Checker c;
        body(p, c);
        return c.res;
    });
    SuiteResult total;
    total.suite = name;
    for (const auto& r : results) total.merge(r);
    return total;
}

}  // namespace detail

/// Stickelberger collapse, the X^{p-1}-1 factorization base fact, and rank
/// inequalities over seeded random eigenvalue sets with every coprime
/// splitting of p-1.
inline SuiteResult run_annihilator(const Options& opt) {
    return detail::per_prime("annihilator", opt, [&](u64 p, detail::Checker& c) {
        const u64 u = primitive_root(p);
        const auto t = PowerTable::make(p, u);

        c.check(stickelberger_element(t).eval_scalar(u) == p - 1,
                "p=" + std::to_string(p) + ": stickelberger collapse != p-1");

        std::vector<u64> all(p - 1);
        for (u64 i = 1; i < p; ++i) all[i - 1] = i;
        FpPoly full = FpPoly::from_roots(p, all);
        FpPoly expect = FpPoly::zero(p);
        expect.c.assign(p, 0);
        expect.c[0] = p - 1;
        expect.c[p - 1] = 1;
        c.check(full == expect, "p=" + std::to_string(p) + ": prod (X-i) != X^{p-1}-1");

        std::vector<std::pair<u64, u64>> splits;
        for (u64 d = 1; d < p; ++d)
            if ((p - 1) % d == 0 && std::gcd(d, (p - 1) / d) == 1)
                splits.emplace_back(d, (p - 1) / d);

        std::mt19937_64 rng(opt.seed ^ (p * 0x9e3779b97f4a7c15ull));
        for (int iter = 0; iter < 20; ++iter) {
            const u64 size = 1 + rng() % std::min<u64>(3, p - 1);
            std::vector<u64> mus;
            while (mus.size() < size) {
                u64 mu = 1 + rng() % (p - 1);
                if (std::find(mus.begin(), mus.end(), mu) == mus.end()) mus.push_back(mu);
            }
            const auto vr = validate_eigenvalue_set(t, mus, ExclusionOptions{false, false, false, false});
            const EigenSet& m = *vr.set;
            auto describe = [&] {
                std::ostringstream os;
                os << "p=" << p << " M={";
                for (u64 x : mus) os << x << ",";
                os << "}";
                return os.str();
            };
            for (auto [d, g] : splits) {
                const auto rp = rank_inequality_report(m, d, g);
                c.check(rp.all(), [&] { return describe() + " d=" + std::to_string(d) +
                                               " g=" + std::to_string(g) +
                                               ": rank inequality violated"; });
            }
            for (u64 d = 1; d < p; ++d) {
                if ((p - 1) % d != 0) continue;
                const FpPoly ind = induced_min_poly(m, d);  // self-checks divisibility
                c.check(ind.is_monic() && static_cast<u64>(ind.degree()) ==
                                              d * induced_eigenvalues(m, d).size(),
                        [&] { return describe() + ": induced polynomial shape"; });
            }
        }
    });
}

/// Convolution recurrence vs the doubled-modulus oracle, plus the
/// irregularity-index / minus-eigenvalue cardinality bridge.
inline SuiteResult run_bernoulli(const Options& opt) {
    return detail::per_prime("bernoulli", opt, [&](u64 p, detail::Checker& c) {
        const auto lib = bernoulli_even_mod_p(p);
        const auto orc = bernoulli_even_oracle(p);
        c.check(lib == orc, "p=" + std::to_string(p) + ": Bernoulli residues disagree with oracle");
        const auto t = PowerTable::make(p, primitive_root(p));
        const auto minus = minus_eigenvalues_from_bernoulli(t);
        c.check(minus.members.size() == irregularity_index(p),
                "p=" + std::to_string(p) + ": |minus eigenvalues| != i_p");
        for (const auto& e : minus.members)
            c.check(e.m % 2 == 1, "p=" + std::to_string(p) + ": minus eigenvalue with even exponent");
        if (!minus.members.empty()) {
            const auto vr = validate_eigenvalue_set(t, minus.mus(),
                                                    ExclusionOptions{true, true, true, true});
            c.check(vr.ok(), "p=" + std::to_string(p) + ": minus eigenvalues fail validation");
        }
    });
}

namespace detail {

/// Textbook reference multiplication: full convolution, then fold degrees
/// >= p-1 with locally derived rows. `fault` bumps one reduction constant.
inline CycloElem reference_mul(u64 p, u32 a, u64 pa, const CycloElem& x, const CycloElem& y,
                               bool fault) {
    const u64 n = p - 1;
    std::vector<u64> acc(2 * n - 1, 0);
    for (u64 i = 0; i < n; ++i)
        for (u64 j = 0; j < n; ++j)
            acc[i + j] = add_mod(acc[i + j], mul_mod(x.c[i], y.c[j], pa), pa);
    // lambda^{p-1} = -sum C(p,j) lambda^{j-1}
    std::vector<u64> red(n, 0);
    u64 binom = 1;  // C(p, j)
    for (u64 j = 1; j <= n; ++j) {
        binom = static_cast<u64>((static_cast<u128>(binom) * ((p - j + 1) % pa)) % pa);
        binom = mul_mod(binom, inv_mod(j, pa), pa);
        red[j - 1] = neg_mod(binom, pa);
    }
    if (fault) red[n / 2] = add_mod(red[n / 2], 1, pa);
    for (u64 d = 2 * n - 2; d >= n; --d) {
        const u64 v = acc[d];
        if (v == 0) continue;
        acc[d] = 0;
        for (u64 j = 0; j < n; ++j) {
            const u64 tgt = d - n + j;  // lambda^{d-(p-1)} * lambda^j
            acc[tgt] = add_mod(acc[tgt], mul_mod(v, red[j], pa), pa);
        }
    }
    CycloElem r{p, a, std::vector<u64>(acc.begin(), acc.begin() + n)};
    return r;
}

}  // namespace detail

/// Basis round-trips, the eigen-monomial law, valuation multiplicativity,
/// the sigma ring morphism, Frobenius p-power congruences, and the
/// independent multiplication cross-check.
inline SuiteResult run_lambda(const Options& opt) {
    return detail::per_prime("lambda-adic", opt, [&](u64 p, detail::Checker& c) {
        const u32 a = opt.precision ? opt.precision : 2;
        const LambdaRing R(p, a);
        const u64 pa = R.coeff_modulus(a);
        const auto t = PowerTable::make(p, primitive_root(p));
        std::mt19937_64 rng(opt.seed ^ (p * 0xa0761d6478bd642full));
        auto random_elem = [&] {
            CycloElem x = R.zero(a);
            for (auto& v : x.c) v = rng() % pa;
            return x;
        };

        // eigen-monomial law: sigma(lambda^nu) = u^nu lambda^nu mod pi^{nu+1}
        const CycloElem sl = R.sigma(R.lambda_power(1, a), t);
        CycloElem cur = R.one(a);
        for (u64 nu = 1; nu <= p - 2; ++nu) {
            cur = R.mul(cur, sl);
            c.check(R.congruent_mod_pi(cur, R.mul_scalar(R.lambda_power(nu, a), t.pw[nu % (p - 1)]),
                                       nu + 1),
                    "p=" + std::to_string(p) + " nu=" + std::to_string(nu) +
                        ": eigen-monomial law");
        }

        for (int iter = 0; iter < 10; ++iter) {
            // basis round-trip
            std::vector<i64> zc(p - 1);
            for (auto& v : zc) v = static_cast<i64>(rng() % pa);
            const CycloElem enc = R.encode_zeta_poly(zc, a);
            const auto dec = R.zeta_coeffs(enc);
            bool same = true;
            for (u64 i = 0; i + 1 < p; ++i) same &= dec[i] == static_cast<u64>(zc[i]) % pa;
            c.check(same, "p=" + std::to_string(p) + ": zeta/lambda round-trip");

            // sigma is a ring morphism
            const CycloElem x = random_elem(), y = random_elem();
            const i64 j = static_cast<i64>(rng() % (p - 1));
            c.check(R.sigma(R.mul(x, y), t, j) == R.mul(R.sigma(x, t, j), R.sigma(y, t, j)),
                    "p=" + std::to_string(p) + ": sigma not multiplicative");
            c.check(R.sigma(R.add(x, y), t, j) == R.add(R.sigma(x, t, j), R.sigma(y, t, j)),
                    "p=" + std::to_string(p) + ": sigma not additive");

            // valuation multiplicativity below the cap
            const auto vx = R.pi_valuation(x), vy = R.pi_valuation(y);
            if (vx && vy && *vx + *vy < R.valuation_cap(a)) {
                const auto vxy = R.pi_valuation(R.mul(x, y));
                c.check(vxy && *vxy == *vx + *vy,
                        "p=" + std::to_string(p) + ": v(xy) != v(x)+v(y)");
            }

            // independent multiplication cross-check (fault-injection hook)
            const CycloElem ref = detail::reference_mul(p, a, pa, x, y, opt.inject_fault);
            c.check(ref == R.mul(x, y), [&] {
                return "p=" + std::to_string(p) +
                       ": lambda-reduction mismatch against reference product\n" + to_text(x) +
                       to_text(y);
            });

            // Frobenius congruence on random unit pairs
            CycloElem alpha = random_elem();
            alpha.c[0] = 1 + rng() % (p - 1);  // force a unit
            CycloElem d = random_elem();
            d.c[0] = 0;  // v_pi >= 1
            const CycloElem beta = R.add(alpha, d);
            const auto w = frobenius_power_check(R, alpha, beta);
            c.check(w.passed, "p=" + std::to_string(p) + ": Frobenius p-power congruence");
        }
    });
}

/// Closed form vs gamma recurrence, exact valuations, and the
/// product/quotient primariness laws on synthetic candidates.
inline SuiteResult run_singular(const Options& opt) {
    return detail::per_prime("singular", opt, [&](u64 p, detail::Checker& c) {
        const u32 a = opt.precision ? opt.precision : 2;
        const LambdaRing R(p, a);
        const auto t = PowerTable::make(p, primitive_root(p));
        std::vector<SingularCandidate> sweep;
        for (u64 m = 1; 2 * m + 1 <= p - 2; ++m) {
            if (2 * m + 1 <= (p - 1) / 2) continue;
            for (u64 gamma : {1ull, 2ull}) {
                if (gamma >= p) continue;
                const auto cand = synthesize_closed_form(R, t, m, gamma, a);
                const auto rec = gamma_recurrence(t, m, gamma);
                c.check(rec.self_consistent,
                        "p=" + std::to_string(p) + " m=" + std::to_string(m) +
                            ": gamma recurrence self-consistency");
                const CycloElem assembled = assemble_from_gammas(R, t, rec, a);
                c.check(R.reduce_precision(assembled, 1) == R.reduce_precision(cand.element, 1),
                        "p=" + std::to_string(p) + " m=" + std::to_string(m) +
                            ": closed form and recurrence disagree mod p");
                const auto an = analyze_valuation(R, t, cand);
                c.check(an.nu && *an.nu == 2 * m + 1 && !an.primary_at_p && an.residue_law_ok,
                        "p=" + std::to_string(p) + " m=" + std::to_string(m) +
                            ": valuation law v = 2m+1");
                if (gamma == 1) sweep.push_back(cand);
            }
        }
        // product law over pairs with distinct valuations
        for (std::size_t i = 0; i < sweep.size(); ++i)
            for (std::size_t j = i + 1; j < sweep.size(); ++j) {
                std::vector<std::pair<SingularCandidate, u64>> fs{{sweep[i], 1}, {sweep[j], 2}};
                const auto pc = product_classification(R, fs);
                c.check(pc.min_law_ok && pc.matches_factor_rule,
                        "p=" + std::to_string(p) + ": product valuation law");
            }
        // quotient law on same-mu eigen-solver pairs
        u64 m0 = (p + 1) / 2;
        if (m0 % 2 == 0) ++m0;
        for (u64 m = m0; m <= p - 2; m += 2) {
            const auto cands = eigen_solver_candidates(R, t, m, 2, opt.seed ^ m);
            if (cands.size() < 2) continue;
            const auto q = quotient_primary_check(R, t, cands[0], cands[1]);
            c.check(q.passed, "p=" + std::to_string(p) + " m=" + std::to_string(m) +
                                  ": quotient not primary");
        }
    });
}

/// Full per-prime unit survey: eigen congruences, residue laws, bounds.
inline SuiteResult run_units(const Options& opt) {
    return detail::per_prime("units", opt, [&](u64 p, detail::Checker& c) {
        if (p < 5) return;  // no eigencomponents below p = 5
        SurveyConfig cfg;
        cfg.precision = opt.precision ? opt.precision : 4;
        const auto rep = unit_survey(p, cfg);
        c.check(rep.ok, [&] {
            std::string s = "p=" + std::to_string(p) + ": survey anomalies:";
            for (const auto& x : rep.anomalies) s += " [" + x + "]";
            return s;
        });
        c.check(rep.rho1_local == rep.i_p,
                "p=" + std::to_string(p) + ": rho1 != i_p under r_p^+ = 0");
        for (const auto& comp : rep.components) {
            if (rep.i_p == 0)
                c.check(comp.v && *comp.v == 2 * comp.n,
                        "p=" + std::to_string(p) + " 2n=" + std::to_string(2 * comp.n) +
                            ": regular prime component with v != 2n");
            if (!comp.v) continue;
            if (comp.primary)
                // past the threshold only v >= p+1 and evenness are intrinsic
                c.check(*comp.v >= p + 1 && *comp.v % 2 == 0,
                        "p=" + std::to_string(p) + " 2n=" + std::to_string(2 * comp.n) +
                            ": primary component valuation law");
            else
                c.check((*comp.v) % (p - 1) == (2 * comp.n) % (p - 1),
                        "p=" + std::to_string(p) + " 2n=" + std::to_string(2 * comp.n) +
                            ": residue law");
        }
    });
}

inline std::vector<SuiteResult> run_suites(const std::vector<std::string>& names,
                                           const Options& opt) {
    std::vector<SuiteResult> out;
    for (const auto& n : names) {
        if (n == "annihilator") out.push_back(run_annihilator(opt));
        else if (n == "bernoulli") out.push_back(run_bernoulli(opt));
        else if (n == "lambda" || n == "lambda-adic") out.push_back(run_lambda(opt));
        else if (n == "singular") out.push_back(run_singular(opt));
        else if (n == "units") out.push_back(run_units(opt));
        else throw std::invalid_argument("unknown suite: " + n);
    }
    return out;
}

}  // namespace cyclo::verify
