#include <catch2/catch_amalgamated.hpp>

#include "hmenc/analysis.hpp"
#include "hmenc/scheme.hpp"

using namespace hmenc;

TEST_CASE("an order oracle inverts toy RSA", "[attack]") {
    // n = 77, e = 13: for any unit m, the order t of c = m^e divides
    // lambda(77) = 30 and gcd(e, t) = 1, so m = c^(e^-1 mod t)
    OrderOracle oracle = brute_force_oracle();
    BigInt n = 77, e = 13;
    for (BigInt m = 2; m < 77; ++m) {
        if (gcd(m, n) != 1) continue;
        GroupElement c = GroupElement(m, n).pow(e);
        BigInt t = oracle.order_of(c); // t = ord(m) because gcd(e, lambda) = 1
        CHECK(c.pow(mod_inverse(e, t)).value() == m);
    }
    CHECK(oracle.calls() > 0);
}

TEST_CASE("the packaged rsa attack always wins at desk scale", "[attack]") {
    Rng rng(0xb1);
    auto rows = run_rsa_attack_sweep(30, rng);
    REQUIRE(rows.size() == 30);
    for (const RsaAttackRow& r : rows) {
        CHECK(r.success);
        CHECK(r.recovered == r.m);
        CHECK(r.oracle_calls >= 1);
        CHECK(mod_pow(r.m, r.e, r.n) == r.c);
    }
}

TEST_CASE("oracles are a capability, not a default", "[attack]") {
    CHECK_THROWS_AS(OrderOracle(OrderOracle::Fn{}), OracleUnavailable);
    // and the brute-force one respects its modulus budget
    OrderOracle big = brute_force_oracle(100);
    CHECK_THROWS_AS(big.order_of(GroupElement(2, 101)), ModulusTooLarge);
}

TEST_CASE("factored and brute oracles agree on platform groups", "[attack]") {
    Rng rng(0xb2);
    FieldSetup fs = build_field_platform({3, 5, 7}, 2, 0, rng);
    const BigInt order = fs.platform.p - 1;
    OrderOracle fact = factored_oracle(order, fs.platform.order_factorization);
    OrderOracle brute = brute_force_oracle();
    for (int i = 0; i < 40; ++i) {
        GroupElement g(1 + rng.below(fs.platform.p - 1), fs.platform.p);
        CHECK(fact.order_of(g) == brute.order_of(g));
    }
}

TEST_CASE("the semantic distinguisher reads orders off ciphertexts", "[distinguish]") {
    Rng rng(0xb3);
    SetupOptions opts;
    auto [dealer, keys] = setup_dealer(2, 0, Variant::V2, opts, rng);
    OrderOracle oracle = brute_force_oracle();

    GroupElement m0 = encode_message(0, dealer.msg_subgroup);
    GroupElement m1 = encode_message(1, dealer.msg_subgroup);
    Rng enc(0xb4);
    for (int trial = 0; trial < 20; ++trial) {
        bool pick1 = trial % 2 == 1;
        Ciphertext ct = v2_encrypt(dealer, pick1 ? m1 : m0, {1, 2}, enc);
        Distinguished v = semantic_distinguisher(ct.value, m0, m1, oracle);
        CHECK(v == (pick1 ? Distinguished::Second : Distinguished::First));
    }

    // equal candidates cannot be told apart, and the verdict says so
    Ciphertext ct = v2_encrypt(dealer, m1, {1}, enc);
    CHECK(semantic_distinguisher(ct.value, m1, m1, oracle) == Distinguished::Inconclusive);
}

TEST_CASE("the distinguisher sweep is v2-only and deterministic", "[distinguish]") {
    Rng rng(0xb5);
    SetupOptions opts;
    auto [dealer, keys] = setup_dealer(2, 0, Variant::V2, opts, rng);
    Rng sa(0xb6), sb(0xb6);
    auto ra = run_distinguisher_sweep(dealer, 0, 1, 15, sa);
    auto rb = run_distinguisher_sweep(dealer, 0, 1, 15, sb);
    REQUIRE(ra.size() == 15);
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].success);
        CHECK(ra[i].true_index == rb[i].true_index);
        CHECK(ra[i].verdict == rb[i].verdict);
    }

    Rng rv1(0xb7);
    auto [v1d, v1k] = setup_dealer(2, 0, Variant::V1_minus, opts, rv1);
    Rng sweep_rng(0xb8);
    CHECK_THROWS_AS(run_distinguisher_sweep(v1d, 0, 1, 3, sweep_rng), WrongVariant);
}
