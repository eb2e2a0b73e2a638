#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "hmenc/paramgen.hpp"

using namespace hmenc;

namespace {

// trial-division primality, the test's own yardstick
bool tiny_prime(const BigInt& n) {
    if (n < 2) return false;
    for (BigInt d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

TEST_CASE("certificates on hand-worked instances", "[prop1]") {
    // b = 7 = 1 + 2*3: every base passes Fermat; only a = 6 (order 2) has
    // a^2 = 1 and trips the gcd condition
    for (std::uint64_t a = 2; a <= 5; ++a)
        CHECK(prop1_certify(Prop1Instance{7, 3, 2, BigInt(a)}) == Prop1Result::Certified);
    CHECK(prop1_certify(Prop1Instance{7, 3, 2, 6}) == Prop1Result::BaseFails);

    // b = 13 = 1 + 4*3: prime, so Fermat holds everywhere and a base fails
    // exactly when its order divides r = 4; within [2, 11] that is {5, 8}
    std::set<std::uint64_t> failed;
    for (std::uint64_t a = 2; a <= 11; ++a) {
        Prop1Result res = prop1_certify(Prop1Instance{13, 3, 4, BigInt(a)});
        if (res == Prop1Result::BaseFails)
            failed.insert(a);
        else
            CHECK(res == Prop1Result::Certified);
    }
    CHECK(failed == std::set<std::uint64_t>{5, 8});

    // b = 91 = 7*13 with q = 5, r = 18: a = 3 is a Fermat liar (order 6
    // divides 90) but 6 also divides 18, so the gcd condition catches it;
    // a = 2 is not a liar in the first place. Both are mere base failures.
    CHECK(prop1_certify(Prop1Instance{91, 5, 18, 3}) == Prop1Result::BaseFails);
    CHECK(prop1_certify(Prop1Instance{91, 5, 18, 2}) == Prop1Result::BaseFails);

    // 2^4 = 1 (mod 15), so 2^14 = 4 and Fermat fails
    CHECK(prop1_certify(Prop1Instance{15, 7, 2, 2}) == Prop1Result::BaseFails);

    // r beyond 4q + 2 is outside the proposition, whatever the base does
    CHECK(prop1_certify(Prop1Instance{79, 3, 26, 2}) == Prop1Result::NotApplicable);
}

TEST_CASE("certified implies prime on a random sweep", "[prop1]") {
    Rng rng(0x61);
    unsigned certified = 0;
    for (int i = 0; i < 4000; ++i) {
        std::uint64_t q = 3 + 2 * (rng.next_u64() % 60);
        if (!tiny_prime(q)) continue;
        std::uint64_t r = 2 + 2 * (rng.next_u64() % (2 * q));
        BigInt b = 1 + BigInt(r) * q;
        BigInt a = rng.in_range(2, b - 2);
        if (prop1_certify(Prop1Instance{b, BigInt(q), BigInt(r), a}) ==
            Prop1Result::Certified) {
            ++certified;
            CHECK(tiny_prime(b));
        }
    }
    CHECK(certified > 500); // the sweep actually exercised the certified path
}

TEST_CASE("instance validation rejects malformed inputs", "[prop1]") {
    CHECK_NOTHROW(Prop1Instance::checked(7, 3, 2, 2));
    CHECK_THROWS_AS(Prop1Instance::checked(7, 9, 2, 2), BadInput);  // q composite
    CHECK_THROWS_AS(Prop1Instance::checked(10, 3, 3, 2), BadInput); // r odd
    CHECK_THROWS_AS(Prop1Instance::checked(7, 3, 2, 1), BadInput);  // base too small
    CHECK_THROWS_AS(Prop1Instance::checked(7, 3, 2, 6), BadInput);  // base is b-1
    CHECK_THROWS_AS(Prop1Instance::checked(8, 3, 2, 2), BadInput);  // b != 1 + rq
}

TEST_CASE("prime chains grow, certify, and replay", "[chain]") {
    Rng rng(0x62);
    std::vector<Prop1Instance> chain = prime_chain(3, 80, rng);
    REQUIRE(!chain.empty());
    BigInt q_prev = 3;
    for (const Prop1Instance& inst : chain) {
        CHECK(inst.q == q_prev);
        CHECK(inst.b > inst.q * inst.q);           // r > q forces squaring growth
        CHECK(inst.r >= inst.q + 1);
        CHECK(inst.r <= 4 * inst.q + 2);
        CHECK(inst.r % 2 == 0);
        CHECK(prop1_certify(inst) == Prop1Result::Certified);
        q_prev = inst.b;
    }
    CHECK(bit_length(q_prev) >= 80);

    // the first link leaves 3: b = 1 + 3r with r even in [4, 14], so b is one
    // of {13, 19, 31, 37, 43} (25 is composite and cannot certify)
    std::set<BigInt> first_bs;
    for (std::uint64_t s = 0; s < 40; ++s) {
        Rng r2(0x63 + s);
        first_bs.insert(prime_chain(3, 10, r2).front().b);
    }
    for (const BigInt& b : first_bs)
        CHECK((b == 13 || b == 19 || b == 31 || b == 37 || b == 43));

    // same seed, same chain
    Rng ra(0x64), rb(0x64);
    std::vector<Prop1Instance> ca = prime_chain(3, 60, ra), cb = prime_chain(3, 60, rb);
    REQUIRE(ca.size() == cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) CHECK(ca[i].b == cb[i].b);

    // already at target: nothing to do
    CHECK(prime_chain(1000003, 10, rng).empty());
}

TEST_CASE("with_restarts retries derived seeds", "[chain]") {
    Rng rng(0x65);
    unsigned calls = 0;
    int got = with_restarts(rng, 5, [&](Rng&) {
        if (++calls < 3) throw SearchExhausted("forced");
        return 42;
    });
    CHECK(got == 42);
    CHECK(calls == 3);
    CHECK_THROWS_AS(with_restarts(rng, 2, [](Rng&) -> int { throw SearchExhausted("always"); }),
                    SearchExhausted);
}

TEST_CASE("find_prime_with_divisor prescribes the divisor", "[divisor]") {
    Rng rng(0x66);
    // ascending scan from M = 210 lands on 211 = 210 * 1 + 1
    PrimeWithDivisor pwd = find_prime_with_divisor(factor_integer(210), 0, rng);
    CHECK(pwd.p == 211);
    CHECK(pwd.r_prime == 1);
    CHECK(pwd.p_minus_1.value() == 210);

    // with a sized cofactor the divisor still divides p - 1 and the
    // factorization of p - 1 re-verifies
    PrimeWithDivisor big = find_prime_with_divisor(factor_integer(30), 24, rng);
    CHECK(big.p % 30 == 1);
    CHECK((big.p - 1) % big.r_prime == 0);
    CHECK(big.p_minus_1.value() == big.p - 1);
    CHECK(is_probable_prime(big.p));
    CHECK(bit_length(big.p) >= 24);
}

TEST_CASE("field platforms carry exact subgroup orders", "[platform]") {
    Rng rng(0x67);
    // smallest p = 1 (mod 2*3*5) is 31
    FieldSetup fs = build_field_platform({3, 5}, 2, 0, rng);
    CHECK(fs.platform.p == 31);
    CHECK(fs.subgroups.size() == 2);
    CHECK(element_order_brute(fs.subgroups[0].generator) == 3);
    CHECK(element_order_brute(fs.subgroups[1].generator) == 5);
    CHECK(element_order_brute(fs.msg_subgroup.generator) == 2);
    CHECK(fs.msg_subgroup.generator.value() == 30); // the only order-2 element is -1

    // sized build: subgroup orders stay exact when p grows
    FieldSetup sized = build_field_platform({3, 5}, 2, 40, rng);
    CHECK(bit_length(sized.platform.p) >= 40);
    CHECK(is_probable_prime(sized.platform.p));
    CHECK(sized.platform.order_factorization.value() == sized.platform.p - 1);
    for (const SubgroupSpec& sg : sized.subgroups)
        CHECK(sg.generator.pow(sg.order).is_identity());

    CHECK_THROWS_AS(build_field_platform({3, 6}, 5, 0, rng), BadInput);  // 6 not coprime to 3
    // no hidden orders is legal: the ring builder leans on it for sides
    // whose pairs are all degenerate
    FieldSetup bare = build_field_platform({}, 2, 0, rng);
    CHECK(bare.subgroups.empty());
    CHECK(bare.msg_subgroup.order == 2);

    // certified build: the certificate chain re-verifies down to 3
    FieldSetup cert = build_field_platform({3}, 2, 0, rng, true);
    REQUIRE(!cert.platform.certificate_chain.empty());
    for (const Prop1Instance& inst : cert.platform.certificate_chain)
        CHECK(prop1_certify(inst) == Prop1Result::Certified);
    CHECK(cert.platform.certificate_chain.back().b == cert.platform.p);
}

TEST_CASE("ring platforms put orders on both CRT sides", "[platform]") {
    Rng rng(0x68);
    // minimal ascending primes: p = 7 covers t = 3 and d_p = 2, q = 11 covers s = 5
    RingSetup rs = build_ring_platform({{3, 5}}, {2, 1}, 0, rng);
    CHECK(rs.platform.n == 77);
    CHECK(rs.platform.p == 7);
    CHECK(rs.platform.q_ring == 11);
    CHECK(rs.subgroups.size() == 1);
    CHECK(rs.subgroups[0].order == 15);
    CHECK(element_order_brute(rs.subgroups[0].generator) == 15);
    CHECK(element_order_brute(rs.msg_subgroup.generator) == 2);

    // incompatible orders are refused before any search runs
    CHECK_THROWS_AS(build_ring_platform({{3, 6}}, {2, 1}, 0, rng), BadInput);
    CHECK_THROWS_AS(build_ring_platform({{3, 5}}, {4, 3}, 0, rng), BadInput); // d=12 vs 15
}

TEST_CASE("platform generation is seed-deterministic", "[platform]") {
    Rng ra(0x69), rb(0x69);
    FieldSetup fa = build_field_platform({3, 5, 7}, 4, 30, ra);
    FieldSetup fb = build_field_platform({3, 5, 7}, 4, 30, rb);
    CHECK(fa.platform.p == fb.platform.p);
    CHECK(fa.platform.generator_g == fb.platform.generator_g);
    for (std::size_t i = 0; i < fa.subgroups.size(); ++i)
        CHECK(fa.subgroups[i].generator == fb.subgroups[i].generator);
}

TEST_CASE("SubgroupSpec::checked re-proves order exactness", "[platform]") {
    // 2 has order 15 in Z_31^*? No: 2^5 = 32 = 1, so claiming 15 must fail.
    Factorization f15 = factor_integer(15);
    CHECK_THROWS_AS(SubgroupSpec::checked(GroupElement(2, 31), f15), BadGroupOrder);
    // 12 is a generator of the full group F_31^*, order 30
    Factorization f30 = factor_integer(30);
    CHECK_NOTHROW(SubgroupSpec::checked(GroupElement(12, 31), f30));
}
