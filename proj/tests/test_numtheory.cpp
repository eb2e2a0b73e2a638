#include <catch2/catch_amalgamated.hpp>

#include "hmenc/numtheory.hpp"

using namespace hmenc;

TEST_CASE("hex round trips are strict and lowercase", "[bigint]") {
    CHECK(to_hex(BigInt(0)) == "0");
    CHECK(to_hex(BigInt(255)) == "ff");
    CHECK(to_hex(BigInt("1000036000099")) == "e8d6ca6163");
    CHECK(from_hex("e8d6ca6163") == BigInt("1000036000099"));
    CHECK(from_hex("FF") == 255); // uppercase accepted on input
    CHECK_THROWS_AS(from_hex("12g4"), BadInput);
    CHECK_THROWS_AS(from_hex(""), BadInput);
    CHECK_THROWS_AS(to_hex(BigInt(-5)), BadInput);

    Rng rng(0x51);
    for (int i = 0; i < 200; ++i) {
        BigInt v = rng.below(BigInt(1) << 200);
        CHECK(from_hex(to_hex(v)) == v);
    }
}

TEST_CASE("fnv1a64 matches the published test vectors", "[bigint]") {
    // offset basis and the classic single-byte vector
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(hex16(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("mod_inverse and mod_pow on hand-checked values", "[numtheory]") {
    CHECK(mod_inverse(7, 31) == 9); // 7 * 9 = 63 = 2 * 31 + 1
    CHECK(mod_inverse(3, 7) == 5);  // 3 * 5 = 15 = 2 * 7 + 1
    CHECK_THROWS_AS(mod_inverse(6, 9), NotInvertible);
    CHECK(mod_pow(2, 14, 15) == 4); // 2^4 = 1 (mod 15), 14 = 4 * 3 + 2
    CHECK(mod_pow(3, 90, 91) == 1); // 3 has order 6 mod 91 and 6 | 90

    Rng rng(0x52);
    for (int i = 0; i < 100; ++i) {
        BigInt m = 2 * rng.below(1000) + 3;
        BigInt a = 1 + rng.below(m - 1);
        if (gcd(a, m) != 1) continue;
        CHECK(a * mod_inverse(a, m) % m == 1);
    }
}

TEST_CASE("crt_combine on hand-checked congruences", "[numtheory]") {
    CHECK(crt_combine({{2, 7}, {3, 11}}) == 58);
    CHECK(crt_combine({{1, 4}, {2, 9}}) == 29);
    CHECK(crt_combine({{5, 13}}) == 5);
    CHECK_THROWS_AS(crt_combine({{1, 6}, {2, 9}}), ModuliNotCoprime);
    CHECK_THROWS_AS(crt_combine({}), BadInput);

    Rng rng(0x53);
    for (int i = 0; i < 100; ++i) {
        BigInt m1 = 2 * rng.below(500) + 3, m2 = 2 * rng.below(500) + 3;
        if (gcd(m1, m2) != 1) continue;
        BigInt a = rng.below(m1), b = rng.below(m2);
        BigInt x = crt_combine({{a, m1}, {b, m2}});
        CHECK(x % m1 == a);
        CHECK(x % m2 == b);
        CHECK(x < m1 * m2);
    }
}

TEST_CASE("is_probable_prime against a sieve", "[numtheory]") {
    // simple trial-division oracle, written here, not shared with the library
    auto is_prime = [](std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    for (std::uint64_t n = 0; n < 3000; ++n) CHECK(is_probable_prime(n) == is_prime(n));
    // Carmichael numbers fool the Fermat test but not Miller-Rabin
    for (std::uint64_t c : {561ull, 1105ull, 1729ull, 41041ull, 825265ull})
        CHECK_FALSE(is_probable_prime(c));
    CHECK(is_probable_prime(BigInt("1000033")));
    CHECK_FALSE(is_probable_prime(BigInt("1000036000099"))); // 1000003 * 1000033
}

TEST_CASE("factor_integer recovers known factorizations", "[numtheory]") {
    Factorization one = factor_integer(1);
    CHECK(one.empty());
    CHECK(one.value() == 1);

    Factorization f = factor_integer(720720); // 2^4 * 3^2 * 5 * 7 * 11 * 13
    CHECK(f.value() == 720720);
    CHECK(f.prime_powers() ==
          std::vector<Factorization::PrimePower>{
              {2, 4}, {3, 2}, {5, 1}, {7, 1}, {11, 1}, {13, 1}});

    CHECK(factor_integer(561).prime_powers() ==
          std::vector<Factorization::PrimePower>{{3, 1}, {11, 1}, {17, 1}});

    // needs the rho stage: both factors exceed the trial-division bound
    Factorization semi = factor_integer(BigInt("1000036000099"));
    CHECK(semi.prime_powers() ==
          std::vector<Factorization::PrimePower>{{BigInt("1000003"), 1}, {BigInt("1000033"), 1}});

    // 2^64 + 1 = 274177 * 67280421310721
    Factorization f6 = factor_integer((BigInt(1) << 64) + 1);
    CHECK(f6.prime_powers() ==
          std::vector<Factorization::PrimePower>{{274177, 1}, {BigInt("67280421310721"), 1}});

    Rng rng(0x54);
    for (int i = 0; i < 60; ++i) {
        BigInt n = 2 + rng.below(BigInt(1) << 40);
        Factorization r = factor_integer(n);
        CHECK(r.value() == n);
        for (const auto& [p, e] : r.prime_powers()) {
            CHECK(is_probable_prime(p));
            CHECK(e >= 1);
        }
    }
}

TEST_CASE("Factorization::checked rejects lies", "[numtheory]") {
    CHECK_THROWS_AS(Factorization::checked(12, {{2, 1}, {3, 1}}), BadInput); // value is 6
    CHECK_THROWS_AS(Factorization::checked(12, {{4, 1}, {3, 1}}), BadInput); // 4 not prime
    CHECK_THROWS_AS(Factorization::checked(12, {{3, 1}, {2, 2}}), BadInput); // out of order
    Factorization ok = Factorization::checked(12, {{2, 2}, {3, 1}});
    CHECK(ok.value() == 12);
}

TEST_CASE("group elements normalize and reject non-units", "[group]") {
    GroupElement g(3, 7);
    CHECK(g.pow(5).value() == 5); // 243 = 34 * 7 + 5
    CHECK((g * g.inverse()).is_identity());
    CHECK(GroupElement(-1, 7).value() == 6);
    CHECK(GroupElement(10, 7).value() == 3);
    CHECK_THROWS_AS(GroupElement(7, 7), BadInput);  // not a unit
    CHECK_THROWS_AS(GroupElement(33, 77), BadInput);
    CHECK_THROWS_AS(GroupElement(1, 2), BadInput);  // modulus too small

    Rng rng(0x55);
    GroupElement a(2, 101), b(5, 101);
    CHECK((a * b).value() == 10);
    for (int i = 0; i < 50; ++i) {
        BigInt e1 = rng.below(1000), e2 = rng.below(1000);
        CHECK(a.pow(e1) * a.pow(e2) == a.pow(e1 + e2));
    }
}

TEST_CASE("element orders, brute and factored, agree", "[group]") {
    CHECK(element_order_brute(GroupElement(2, 101)) == 100); // 2 generates F_101^*
    CHECK(element_order_brute(GroupElement(58, 77)) == 15);
    CHECK(element_order_brute(GroupElement(3, 7)) == 6);
    CHECK(element_order_brute(GroupElement(12, 31)) == 30);

    Factorization f100 = factor_integer(100);
    Factorization f30 = factor_integer(30);
    Rng rng(0x56);
    for (int i = 0; i < 60; ++i) {
        GroupElement g(1 + rng.below(100), 101);
        BigInt ord = element_order_factored(g, 100, f100);
        CHECK(ord == element_order_brute(g));
        CHECK(g.pow(ord).is_identity());
    }
    for (BigInt v = 1; v < 31; ++v)
        CHECK(element_order_factored(GroupElement(v, 31), 30, f30) ==
              element_order_brute(GroupElement(v, 31)));

    // the brute-force search refuses moduli beyond its budget (odd modulus so
    // the element itself is a perfectly good unit)
    CHECK_THROWS_AS(element_order_brute(GroupElement(2, BigInt("100000000001"))),
                    ModulusTooLarge);
}
