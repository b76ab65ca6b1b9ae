#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "cyclo/units.hpp"

using namespace cyclo;

TEST_CASE("cyclotomic units") {
    const LambdaRing R5(5, 2);
    const auto t5 = PowerTable::make(5, 2);
    CHECK(cyclotomic_unit(R5, 1) == R5.one(2));

    // delta_2 = (1+zeta)(1+zeta^{-1}) = 2 + zeta + zeta^{-1}
    const auto d2 = cyclotomic_unit(R5, 2);
    auto expect = R5.add(R5.from_integer(2, 2), R5.add(R5.zeta(2), R5.zeta_power(-1, 2)));
    CHECK(d2 == expect);
    CHECK(R5.pi_valuation(d2) == 0);
    CHECK(R5.conjugate(d2, t5) == d2);

    CHECK_THROWS_AS(cyclotomic_unit(R5, 5), std::invalid_argument);
    CHECK_THROWS_AS(cyclotomic_unit(R5, 0), std::invalid_argument);
}

TEST_CASE("delta symmetry delta_{p-a} = delta_a for p <= 31") {
    for (u64 p : {5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        const LambdaRing R(p, 2);
        for (u64 a = 1; a < p; ++a) CHECK(cyclotomic_unit(R, p - a) == cyclotomic_unit(R, a));
    }
}

TEST_CASE("orbit matches the Galois action") {
    for (u64 p : {5ull, 7ull, 11ull}) {
        const LambdaRing R(p, 2);
        const auto t = PowerTable::make(p, primitive_root(p));
        const auto orbit = UnitOrbit::build(R, t, 2);
        const auto delta = cyclotomic_unit(R, t.u);
        CHECK(orbit.conj[0] == delta);
        for (u64 j = 1; j + 1 < p; ++j)
            CHECK(orbit.conj[j] == R.sigma(delta, t, static_cast<i64>(j)));
    }
}

TEST_CASE("eigencomponent weights and congruence") {
    const LambdaRing R7(7, 4);
    const auto t7 = PowerTable::make(7, 3);
    const auto c = eigencomponent(R7, t7, 1);
    CHECK(c.weights == std::vector<u64>{1, 4, 2, 1, 4, 2});  // u^{-2} = 4 mod 7
    CHECK(c.mu == 2);  // 3^2 mod 7
    CHECK(c.real_ok);
    CHECK(c.eigen_ok);

    // p = 5, n = 1: sigma(eps') = (eps')^4 mod pi^{p+1}, v = 2, not primary
    const LambdaRing R5(5, 4);
    const auto t5 = PowerTable::make(5, 2);
    const auto c5 = eigencomponent(R5, t5, 1);
    CHECK(c5.mu == 4);
    CHECK(R5.congruent_mod_pi(R5.sigma(c5.eps_norm, t5), R5.pow(c5.eps_norm, 4), 6));
    CHECK(c5.v == 2);
    CHECK(c5.a_level == 0);
    CHECK_FALSE(c5.primary);

    CHECK_THROWS_AS(eigencomponent(R5, t5, 2), std::invalid_argument);  // n > (p-3)/2
    CHECK_THROWS_AS(eigencomponent(R5, t5, 0), std::invalid_argument);
}

TEST_CASE("regular prime surveys: v = 2n exactly, nothing primary") {
    for (u64 p : {5ull, 7ull, 11ull, 13ull}) {
        const auto rep = unit_survey(p);
        CHECK(rep.ok);
        CHECK(rep.i_p == 0);
        CHECK(rep.rho1_local == 0);
        CHECK(rep.primary_index_set.empty());
        CHECK(rep.bounds.all());
        for (const auto& c : rep.components) {
            CHECK(c.v == 2 * c.n);
            CHECK(c.a_level == 0);
            CHECK_FALSE(c.primary);
            CHECK(c.residue_ok);
        }
    }
}

TEST_CASE("p = 37: one primary component at the irregular index") {
    const auto rep = unit_survey(37);
    CHECK(rep.ok);
    CHECK(rep.u == 2);
    CHECK(rep.i_p == 1);
    CHECK(rep.irregular == std::vector<u64>{32});
    CHECK(rep.rho1_local == 1);
    CHECK(rep.primary_index_set == std::vector<u64>{32});
    CHECK(rep.bounds.all());
    for (const auto& c : rep.components) {
        CHECK(c.v.value_or(999) >= 2 * c.n);  // every component is = 1 mod pi^{2n}
        if (2 * c.n == 32) {
            CHECK(c.primary);
            CHECK(c.v.value_or(0) >= 38);  // at least p+1
        } else {
            CHECK(c.v == 2 * c.n);
            CHECK_FALSE(c.primary);
        }
    }
}

TEST_CASE("survey classification is invariant under the primitive root") {
    // per-index classification must agree between primitive roots
    for (u64 p : {13ull, 37ull}) {
        SurveyConfig cfg;
        const auto a = unit_survey(p, cfg);
        cfg.primitive_root = 0;
        // find another primitive root
        u64 u2 = 0;
        for (u64 cand = a.u + 1; cand < p; ++cand) {
            try {
                PowerTable::make(p, cand);
                u2 = cand;
                break;
            } catch (const std::invalid_argument&) {}
        }
        REQUIRE(u2 != 0);
        cfg.primitive_root = u2;
        const auto b = unit_survey(p, cfg);
        CHECK(b.u == u2);
        CHECK(a.primary_index_set == b.primary_index_set);
        CHECK(a.rho1_local == b.rho1_local);
        for (std::size_t i = 0; i < a.components.size(); ++i) {
            CHECK(a.components[i].primary == b.components[i].primary);
            if (!a.components[i].primary) CHECK(a.components[i].v == b.components[i].v);
        }
    }
}

TEST_CASE("classify marks a trivial normalized component as locally trivial") {
    const LambdaRing R(7, 4);
    const auto t = PowerTable::make(7, 3);
    auto c = eigencomponent(R, t, 1);
    c.eps_norm = R.one(4);  // synthetic eps' = 1
    classify_eigencomponent(R, c);
    CHECK(c.locally_trivial);
    CHECK_FALSE(c.v.has_value());
    CHECK(c.primary);
}

TEST_CASE("survey rejects bad inputs") {
    CHECK_THROWS_AS(unit_survey(9), std::invalid_argument);
    CHECK_THROWS_AS(unit_survey(3), std::invalid_argument);
    SurveyConfig cfg;
    cfg.precision = 1;
    CHECK_THROWS_AS(unit_survey(7, cfg), std::invalid_argument);
}
