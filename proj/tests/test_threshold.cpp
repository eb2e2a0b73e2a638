#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "hmenc/threshold.hpp"

using namespace hmenc;

TEST_CASE("the s = 3 set system matches the hand construction", "[setsystem]") {
    // level 1 gives everyone index 1; level 2 hands a fresh index to the two
    // parties outside each singleton {1}, {2}, {3} in turn; level 3 does the
    // same per 2-subset. Worked out on paper:
    ThresholdSetSystem sys = build_set_system(3);
    CHECK(sys.size_at(1) == 1);
    CHECK(sys.size_at(2) == 4);
    CHECK(sys.size_at(3) == 7);
    CHECK(sys.subset(1, 1) == std::set<std::size_t>{1});
    CHECK(sys.subset(1, 2) == std::set<std::size_t>{1});
    CHECK(sys.subset(1, 3) == std::set<std::size_t>{1});
    CHECK(sys.subset(2, 1) == std::set<std::size_t>{1, 3, 4});
    CHECK(sys.subset(2, 2) == std::set<std::size_t>{1, 2, 4});
    CHECK(sys.subset(2, 3) == std::set<std::size_t>{1, 2, 3});
    CHECK(sys.subset(3, 1) == std::set<std::size_t>{1, 3, 4, 7});
    CHECK(sys.subset(3, 2) == std::set<std::size_t>{1, 2, 4, 6});
    CHECK(sys.subset(3, 3) == std::set<std::size_t>{1, 2, 3, 5});
}

TEST_CASE("set system cover exactly at the threshold", "[setsystem]") {
    for (std::size_t s = 1; s <= 5; ++s) {
        ThresholdSetSystem sys = build_set_system(s);
        CHECK(sys.size_at(s) == (std::size_t(1) << s) - 1);
        for (std::size_t k = 1; k <= s; ++k) {
            std::size_t prefix = sys.size_at(k);
            for (unsigned mask = 0; mask < (1u << s); ++mask) {
                std::set<std::size_t> uni;
                std::size_t members = 0;
                for (std::size_t j = 1; j <= s; ++j)
                    if (mask & (1u << (j - 1))) {
                        ++members;
                        const auto& tj = sys.subset(k, j);
                        uni.insert(tj.begin(), tj.end());
                    }
                // k or more members cover the whole prefix 1..l_k; fewer
                // always leave a hole
                CHECK((uni.size() == prefix) == (members >= k));
            }
        }
    }
    CHECK_THROWS_AS(build_set_system(0), PoolTooLarge);
    CHECK_THROWS_AS(build_set_system(17), PoolTooLarge);
}

TEST_CASE("threshold keys satisfy the two congruence families", "[threshold]") {
    Rng rng(0x91);
    ThresholdOptions opts; // d = 2
    auto [dealer, keys] = threshold_setup(3, opts, rng);
    CHECK(dealer.pool_size() == 3);
    CHECK(dealer.w_subgroups.size() == 7); // 2^3 - 1 hidden subgroups
    CHECK(keys.size() == 3);
    for (const auto& [id, key] : keys) {
        CHECK(threshold_key_valid(dealer, key));
        CHECK(key.key % dealer.d == 1);
        // the key annihilates exactly the subgroups listed in T_j(s)
        for (std::size_t i = 1; i <= dealer.w_subgroups.size(); ++i) {
            bool listed = dealer.system.subset(3, id).count(i) != 0;
            CHECK((key.key % dealer.w_subgroups[i - 1].order == 0) == listed);
        }
    }
    // a corrupted key fails validation
    ThresholdKey broken = keys.at(1);
    broken.key += 1;
    CHECK_FALSE(threshold_key_valid(dealer, broken));
}

TEST_CASE("recovery succeeds exactly at the threshold", "[threshold]") {
    Rng rng(0x92);
    ThresholdOptions opts;
    auto [dealer, keys] = threshold_setup(3, opts, rng);
    for (std::size_t m = 1; m <= 3; ++m) {
        for (BigInt msg = 0; msg < dealer.d; ++msg) {
            GroupElement f = encode_message(msg, dealer.msg_subgroup);
            ThresholdCiphertext ct = threshold_encrypt(dealer, f, m, rng);
            CHECK(ct.m == m);
            for (unsigned mask = 1; mask < 8; ++mask) {
                GroupElement acc = ct.value;
                std::size_t members = 0;
                for (PartyId id = 1; id <= 3; ++id)
                    if (mask & (1u << (id - 1))) {
                        acc = threshold_party_step(acc, keys.at(id));
                        ++members;
                    }
                CHECK((acc == f) == (members >= m));
                if (members >= m)
                    CHECK(decode_message(acc, dealer.msg_subgroup) == msg);
            }
        }
    }
}

TEST_CASE("party order never matters", "[threshold]") {
    Rng rng(0x93);
    ThresholdOptions opts;
    auto [dealer, keys] = threshold_setup(3, opts, rng);
    GroupElement f = encode_message(1, dealer.msg_subgroup);
    ThresholdCiphertext ct = threshold_encrypt(dealer, f, 2, rng);
    GroupElement ab = threshold_party_step(threshold_party_step(ct.value, keys.at(1)), keys.at(3));
    GroupElement ba = threshold_party_step(threshold_party_step(ct.value, keys.at(3)), keys.at(1));
    CHECK(ab == ba);
}

TEST_CASE("thresholds outside [1, s] are refused", "[threshold]") {
    Rng rng(0x94);
    ThresholdOptions opts;
    auto [dealer, keys] = threshold_setup(2, opts, rng);
    GroupElement f = encode_message(0, dealer.msg_subgroup);
    CHECK_THROWS_AS(threshold_encrypt(dealer, f, 0, rng), ThresholdOutOfRange);
    CHECK_THROWS_AS(threshold_encrypt(dealer, f, 3, rng), ThresholdOutOfRange);
}

TEST_CASE("nontrivial d and determinism", "[threshold]") {
    ThresholdOptions opts;
    opts.d = 4;
    Rng ra(0x95), rb(0x95);
    auto [da, ka] = threshold_setup(2, opts, ra);
    auto [db, kb] = threshold_setup(2, opts, rb);
    CHECK(da.modulus == db.modulus);
    for (const auto& [id, key] : ka) CHECK(key.key == kb.at(id).key);

    Rng rng(0x96);
    for (BigInt msg = 0; msg < 4; ++msg) {
        GroupElement f = encode_message(msg, da.msg_subgroup);
        ThresholdCiphertext ct = threshold_encrypt(da, f, 2, rng);
        GroupElement acc = ct.value;
        for (PartyId id = 1; id <= 2; ++id) acc = threshold_party_step(acc, ka.at(id));
        CHECK(decode_message(acc, da.msg_subgroup) == msg);
    }
}

TEST_CASE("pool sizes beyond the desk cap are refused", "[threshold]") {
    Rng rng(0x97);
    ThresholdOptions opts;
    CHECK_THROWS_AS(threshold_setup(13, opts, rng), PoolTooLarge);
}
