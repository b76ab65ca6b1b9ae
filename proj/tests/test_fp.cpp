#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cyclo/fp.hpp"
#include "oracles.hpp"

using namespace cyclo;

TEST_CASE("modular scalar arithmetic") {
    CHECK(add_mod(3, 4, 5) == 2);
    CHECK(sub_mod(1, 3, 7) == 5);
    CHECK(neg_mod(0, 11) == 0);
    CHECK(mul_mod(6, 6, 7) == 1);
    CHECK(pow_mod(3, 6, 7) == 1);
    CHECK(inv_mod(2, 5) == 3);
    CHECK(inv_mod(7, 121) * 7 % 121 == 1);
    CHECK_THROWS_AS(inv_mod(5, 25), std::domain_error);
}

TEST_CASE("inverse_table matches inv_mod over prime powers") {
    for (u64 m : {7ull, 49ull, 121ull, 2197ull}) {
        const auto inv = inverse_table(6, m);
        for (u64 i = 1; i <= 6; ++i) CHECK(inv[i] == inv_mod(i, m));
    }
}

TEST_CASE("primality") {
    CHECK(is_prime(2));
    CHECK(is_prime(16381));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(16383));
}

TEST_CASE("primitive_root smallest positive") {
    CHECK(primitive_root(5) == 2);
    CHECK(primitive_root(7) == 3);  // 2 has order 3
    CHECK_THROWS_AS(primitive_root(9), std::invalid_argument);
    CHECK_THROWS_AS(primitive_root(2), std::invalid_argument);

    // exhaustive multiplicative-order oracle
    CHECK(primitive_root(37) == 2);
    for (u64 p : {5ull, 7ull, 11ull, 13ull, 37ull, 101ull, 157ull}) {
        const u64 u = primitive_root(p);
        CHECK(oracle::multiplicative_order(u, p) == p - 1);
        CHECK(u == oracle::smallest_primitive_root(p));
        CHECK(pow_mod(u, (p - 1) / 2, p) == p - 1);  // u^{(p-1)/2} = -1
    }
}

TEST_CASE("power table") {
    const auto t5 = PowerTable::make(5, 2);
    CHECK(t5.pw == std::vector<u64>{1, 2, 4, 3});

    const auto t7 = PowerTable::make(7, 3);
    CHECK(t7.pw == std::vector<u64>{1, 3, 2, 6, 4, 5});
    CHECK(t7.at(-1) == 5);  // 3 * 5 = 1 mod 7
    CHECK(t7.at(6) == 1);
    CHECK(t7.at(-6) == 1);
    CHECK(t7.log(6) == 3);

    CHECK_THROWS_AS(PowerTable::make(7, 2), std::invalid_argument);  // order 3
    CHECK_THROWS_AS(PowerTable::make(9, 2), std::invalid_argument);
}
