#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "hmenc/scheme.hpp"

using namespace hmenc;

namespace {

std::vector<PartyId> ids_of(unsigned mask, PartyId top) {
    std::vector<PartyId> out;
    for (PartyId id = 1; id <= top; ++id)
        if (mask & (1u << (id - 1))) out.push_back(id);
    return out;
}

GroupElement run_steps(const GroupElement& c, const std::vector<PartyId>& coalition,
                       const std::map<PartyId, PartyDecryptKey>& keys) {
    GroupElement acc = c;
    for (PartyId id : coalition) acc = party_step(acc, keys.at(id));
    return acc;
}

} // namespace

TEST_CASE("message encoding is injective and bounded", "[encode]") {
    Rng rng(0x71);
    FieldSetup fs = build_field_platform({3, 5}, 7, 0, rng);
    for (BigInt m = 0; m < 7; ++m)
        CHECK(decode_message(encode_message(m, fs.msg_subgroup), fs.msg_subgroup) == m);
    CHECK_THROWS_AS(encode_message(7, fs.msg_subgroup), MessageOutOfRange);
    CHECK_THROWS_AS(encode_message(-1, fs.msg_subgroup), MessageOutOfRange);
    // an element outside <f_0> cannot decode
    CHECK_THROWS_AS(decode_message(fs.subgroups[0].generator, fs.msg_subgroup),
                    NotInSubgroup);
}

TEST_CASE("v2 round trips over every coalition", "[v2]") {
    Rng rng(0x72);
    SetupOptions opts; // d = 2: the smallest admissible orders are 3 and 5, p = 31
    auto [dealer, keys] = setup_dealer(2, 0, Variant::V2, opts, rng);
    CHECK(dealer.modulus == 31);
    CHECK(dealer.d == 2);
    CHECK(dealer.t_product == 15);

    Rng enc(0x73);
    for (unsigned mask = 1; mask < 4; ++mask) {
        std::vector<PartyId> coalition = ids_of(mask, 2);
        for (BigInt m = 0; m < 2; ++m) {
            GroupElement f = encode_message(m, dealer.msg_subgroup);
            Ciphertext ct = v2_encrypt(dealer, f, coalition, enc);
            CHECK(ct.variant == Variant::V2);
            CHECK(ct.platform_hash == dealer.platform_hash);
            CHECK(decode_message(run_steps(ct.value, coalition, keys), dealer.msg_subgroup) ==
                  m);
        }
    }
}

TEST_CASE("v2 with nontrivial d follows the construction's congruence", "[v2]") {
    Rng rng(0x74);
    SetupOptions opts;
    opts.v2_d = 4; // hidden orders must then satisfy t_i = 1 (mod 4): 5, 13, 17
    auto [dealer, keys] = setup_dealer(3, 0, Variant::V2, opts, rng);
    for (const auto& [id, key] : keys) {
        CHECK(key.exponent % 4 == 1);
        CHECK(dealer.subgroup_of(id).order == key.exponent);
    }
    Rng enc(0x75);
    std::vector<PartyId> all{1, 2, 3};
    for (BigInt m = 0; m < 4; ++m) {
        Ciphertext ct = v2_encrypt(dealer, encode_message(m, dealer.msg_subgroup), all, enc);
        CHECK(decode_message(run_steps(ct.value, all, keys), dealer.msg_subgroup) == m);
    }
}

TEST_CASE("v1 exposes exactly the predicted superset behavior", "[v1]") {
    Rng rng(0x76);
    SetupOptions opts;
    // s_max = 2 with orders {3, 5}: t = 15, so V1- pins d = 14 and V1+ d = 16
    auto [dealer, keys] = setup_dealer(2, 0, Variant::V1_minus, opts, rng);
    CHECK(dealer.d == 14);
    CHECK(dealer.t_product == 15);

    Rng enc(0x77);
    for (unsigned mask = 1; mask < 4; ++mask) {
        std::vector<PartyId> S = ids_of(mask, 2);
        for (BigInt m = 0; m < 14; ++m) {
            Ciphertext ct = v1_encrypt(dealer, encode_message(m, dealer.msg_subgroup), S, enc);
            for (unsigned sup = mask; sup < 4; ++sup) {
                if ((sup & mask) != mask) continue;
                // after the superset T steps and the finalize, the residue is
                // m times the product of the extra parties' orders, mod d
                BigInt extra = 1;
                for (PartyId id : ids_of(sup & ~mask, 2))
                    extra *= keys.at(id).exponent;
                GroupElement fin =
                    v1_finalize(run_steps(ct.value, ids_of(sup, 2), keys), dealer.variant);
                CHECK(decode_message(fin, dealer.msg_subgroup) == m * extra % 14);
            }
        }
    }

    // the same arithmetic pins the existential failure: m = 1 with one extra
    // party of order 3 decodes to 3, never 1; m = 7 survives because
    // 7 * 3 = 7 and 7 * 5 = 7 (mod 14)
    CHECK((1 * 3) % 14 != 1);
    CHECK((7 * 3) % 14 == 7);
    CHECK((7 * 5) % 14 == 7);
}

TEST_CASE("v1 plus variant inverts at the finalize", "[v1]") {
    Rng rng(0x78);
    SetupOptions opts;
    auto [dealer, keys] = setup_dealer(2, 0, Variant::V1_plus, opts, rng);
    CHECK(dealer.d == 16);
    Rng enc(0x79);
    std::vector<PartyId> all{1, 2};
    for (BigInt m : {BigInt(0), BigInt(1), BigInt(9), BigInt(15)}) {
        Ciphertext ct = v1_encrypt(dealer, encode_message(m, dealer.msg_subgroup), all, enc);
        CHECK(decode_message(v1_finalize(run_steps(ct.value, all, keys), dealer.variant),
                             dealer.msg_subgroup) == m);
    }
}

TEST_CASE("encrypting for strangers or the empty set fails early", "[scheme]") {
    Rng rng(0x7a);
    SetupOptions opts;
    auto [dealer, keys] = setup_dealer(2, 1, Variant::V2, opts, rng);
    GroupElement f = encode_message(1, dealer.msg_subgroup);
    CHECK_THROWS_AS(v2_encrypt(dealer, f, {1, 5}, rng), UnknownParty);
    CHECK_THROWS_AS(v2_encrypt(dealer, f, {}, rng), BadInput);
    CHECK_THROWS_AS(v2_encrypt(dealer, f, {1, 1}, rng), BadInput); // duplicate
    CHECK_THROWS_AS(v1_encrypt(dealer, f, {1}, rng), WrongVariant);
}

TEST_CASE("join assigns reserve subgroups and leave retires them", "[pool]") {
    Rng rng(0x7b);
    SetupOptions opts;
    auto [dealer, keys] = setup_dealer(2, 2, Variant::V2, opts, rng);
    CHECK(dealer.pool_capacity() == 4);
    CHECK(dealer.free_indices.size() == 2);

    PartyDecryptKey k9 = join_party(dealer, 9);
    CHECK(dealer.assignment.count(9) == 1);
    CHECK(k9.exponent == dealer.subgroup_of(9).order);
    keys.emplace(9, k9);

    // the newcomer decrypts alongside the founders
    Rng enc(0x7c);
    Ciphertext ct = v2_encrypt(dealer, encode_message(1, dealer.msg_subgroup), {1, 9}, enc);
    CHECK(decode_message(run_steps(ct.value, {1, 9}, keys), dealer.msg_subgroup) == 1);

    CHECK_THROWS_AS(join_party(dealer, 9), BadInput); // already present
    join_party(dealer, 10);
    CHECK_THROWS_AS(join_party(dealer, 11), PoolExhausted);

    leave_party(dealer, 10);
    CHECK(dealer.retired.size() == 1);
    CHECK_THROWS_AS(leave_party(dealer, 10), UnknownParty);
    // the retired subgroup is gone for good, not recycled
    CHECK_THROWS_AS(join_party(dealer, 11), PoolExhausted);
    CHECK_THROWS_AS(v2_encrypt(dealer, encode_message(0, dealer.msg_subgroup), {10}, rng),
                    UnknownParty);

    // V1 pools are welded shut at setup
    Rng rv1(0x7d);
    auto [v1dealer, v1keys] = setup_dealer(2, 0, Variant::V1_minus, opts, rv1);
    CHECK_THROWS_AS(join_party(v1dealer, 3), UnsupportedForV1);
}

TEST_CASE("coalition signatures verify and tampers are caught", "[sign]") {
    Rng rng(0x7e);
    SetupOptions opts;
    opts.v2_d = 4;
    auto [dealer, keys] = setup_dealer(3, 0, Variant::V2, opts, rng);

    Rng srng(0x7f);
    GroupElement doc = encode_message(3, dealer.msg_subgroup);
    std::vector<PartyId> coalition{1, 3};
    GroupElement sig = doc;
    for (PartyId id : coalition) sig = sign_step(sig, sign_key_for(dealer, id), srng);
    SignedDocument sd{doc, sig, coalition};

    std::map<PartyId, BigInt> orders;
    for (PartyId id : coalition) orders[id] = dealer.subgroup_of(id).order;
    CHECK(verify_signature(sd, orders, dealer.d) == SignatureCheck::Accept);

    // multiplying in a message-subgroup factor breaks it: gcd(t, d) = 1
    SignedDocument bad1 = sd;
    bad1.signed_value = sd.signed_value * dealer.msg_subgroup.generator;
    CHECK(verify_signature(bad1, orders, dealer.d) == SignatureCheck::Reject);

    // so does a factor from a subgroup the coalition does not hold
    SignedDocument bad2 = sd;
    bad2.signed_value = sd.signed_value * sample_nontrivial(dealer.subgroup_of(2), srng);
    CHECK(verify_signature(bad2, orders, dealer.d) == SignatureCheck::Reject);

    // and swapping the document without re-signing
    SignedDocument bad3 = sd;
    bad3.document = encode_message(1, dealer.msg_subgroup);
    CHECK(verify_signature(bad3, orders, dealer.d) == SignatureCheck::Reject);

    // verification needs every signer's order
    std::map<PartyId, BigInt> partial{{1, orders[1]}};
    CHECK_THROWS_AS(verify_signature(sd, partial, dealer.d), UnknownParty);
}

TEST_CASE("verification refuses non-v2 parameters", "[sign]") {
    Rng rng(0x80);
    SetupOptions opts;
    auto [dealer, keys] = setup_dealer(2, 0, Variant::V1_minus, opts, rng);
    // V1 orders are not 1 (mod d), so f is not a fixed point of f -> f^t and
    // the verification equation is unsound; the verifier must bail out
    Rng srng(0x85);
    GroupElement doc = encode_message(2, dealer.msg_subgroup);
    GroupElement sig = sign_step(doc, sign_key_for(dealer, 1), srng);
    std::map<PartyId, BigInt> orders{{1, dealer.subgroup_of(1).order}};
    CHECK_THROWS_AS(verify_signature(SignedDocument{doc, sig, {1}}, orders, dealer.d),
                    WrongVariant);
}

TEST_CASE("setup is deterministic per seed and rejects bad shapes", "[setup]") {
    SetupOptions opts;
    Rng ra(0x81), rb(0x81);
    auto [da, ka] = setup_dealer(3, 1, Variant::V2, opts, ra);
    auto [db, kb] = setup_dealer(3, 1, Variant::V2, opts, rb);
    CHECK(da.modulus == db.modulus);
    CHECK(da.assignment == db.assignment);
    for (const auto& [id, key] : ka) CHECK(key.exponent == kb.at(id).exponent);

    Rng rc(0x82);
    CHECK_THROWS_AS(setup_dealer(0, 0, Variant::V2, opts, rc), BadInput);
    SetupOptions odd;
    odd.v2_d = 1;
    CHECK_THROWS_AS(setup_dealer(2, 0, Variant::V2, odd, rc), BadInput);
}

TEST_CASE("ring-backed dealers run the same protocol", "[ring]") {
    Rng rng(0x83);
    SetupOptions opts;
    opts.ring = true;
    auto [dealer, keys] = setup_dealer(2, 0, Variant::V2, opts, rng);
    CHECK(std::holds_alternative<RingPlatform>(dealer.platform));
    Rng enc(0x84);
    for (BigInt m = 0; m < 2; ++m) {
        Ciphertext ct = v2_encrypt(dealer, encode_message(m, dealer.msg_subgroup), {1, 2}, enc);
        CHECK(decode_message(run_steps(ct.value, {1, 2}, keys), dealer.msg_subgroup) == m);
    }
}
