#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "hmenc/io.hpp"
#include "hmenc/protocol.hpp"

using namespace hmenc;

namespace {

struct Fixture {
    DealerSecret dealer;
    std::map<PartyId, PartyDecryptKey> keys;
};

Fixture make_v2(std::uint64_t seed, std::size_t s = 3, std::size_t reserve = 1) {
    Rng rng(seed);
    SetupOptions opts;
    auto [dealer, keys] = setup_dealer(s, reserve, Variant::V2, opts, rng);
    return Fixture{std::move(dealer), std::move(keys)};
}

std::vector<PartyId> stepped_parties(const Transcript& t) {
    std::vector<PartyId> out;
    for (const TranscriptEvent& e : t.events)
        if (e.kind == "step")
            out.push_back(static_cast<PartyId>(
                std::stoul(e.public_detail.substr(std::string("party ").size()))));
    return out;
}

} // namespace

TEST_CASE("decrypt sessions complete and recover the message", "[session]") {
    Fixture fx = make_v2(0xa1);
    SessionOptions opts;
    Transcript t = run_decrypt_session(fx.dealer, fx.keys, {1, 2, 3}, 1, opts, 5);
    CHECK(t.status == SessionStatus::Complete);
    REQUIRE(t.recovered_message.has_value());
    CHECK(*t.recovered_message == 1);
    CHECK(t.events.front().kind == "invite");
    CHECK(t.events.back().kind == "result");
    CHECK(stepped_parties(t) == std::vector<PartyId>{1, 2, 3});
}

TEST_CASE("transcripts replay byte-identically per seed", "[session]") {
    Fixture fx = make_v2(0xa2);
    SessionOptions opts;
    opts.order = OrderPolicy::Shuffled;
    Transcript a = run_decrypt_session(fx.dealer, fx.keys, {1, 2, 3}, 1, opts, 17);
    Transcript b = run_decrypt_session(fx.dealer, fx.keys, {1, 2, 3}, 1, opts, 17);
    CHECK(io::save_transcript(a) == io::save_transcript(b));
    Transcript c = run_decrypt_session(fx.dealer, fx.keys, {1, 2, 3}, 1, opts, 18);
    CHECK(a.session_id != c.session_id);
}

TEST_CASE("the shuffle policy actually permutes somewhere", "[session]") {
    Fixture fx = make_v2(0xa3);
    SessionOptions seq, shuf;
    shuf.order = OrderPolicy::Shuffled;
    bool permuted = false;
    for (std::uint64_t seed = 1; seed <= 10 && !permuted; ++seed) {
        Transcript a = run_decrypt_session(fx.dealer, fx.keys, {1, 2, 3}, 0, seq, seed);
        Transcript b = run_decrypt_session(fx.dealer, fx.keys, {1, 2, 3}, 0, shuf, seed);
        CHECK(a.status == SessionStatus::Complete);
        CHECK(b.status == SessionStatus::Complete);
        CHECK(stepped_parties(a) == std::vector<PartyId>{1, 2, 3});
        permuted = stepped_parties(b) != stepped_parties(a);
    }
    CHECK(permuted);
}

TEST_CASE("step values are public in broadcast mode only", "[session]") {
    Fixture fx = make_v2(0xa4);
    for (SessionMode mode :
         {SessionMode::Broadcast, SessionMode::PrivateRoom, SessionMode::TrustedServer}) {
        SessionOptions opts;
        opts.mode = mode;
        Transcript t = run_decrypt_session(fx.dealer, fx.keys, {1, 2}, 1, opts, 23);
        CHECK(t.status == SessionStatus::Complete);
        for (const TranscriptEvent& e : t.events) {
            if (e.kind != "step") continue;
            bool value_public = e.public_detail.find("value") != std::string::npos;
            CHECK(value_public == (mode == SessionMode::Broadcast));
            if (mode != SessionMode::Broadcast)
                CHECK(e.private_detail.find("value") != std::string::npos);
        }
    }
}

TEST_CASE("gated modes turn intruders away at the door", "[session]") {
    Fixture fx = make_v2(0xa5);
    SessionOptions opts;
    opts.mode = SessionMode::PrivateRoom;
    opts.intruders = {4}; // 4 holds a key (reserve slot) but was not invited
    PartyDecryptKey k4 = join_party(fx.dealer, 4);
    fx.keys.emplace(4, k4);
    Transcript t = run_decrypt_session(fx.dealer, fx.keys, {1, 2, 3}, 1, opts, 31);
    CHECK(t.status == SessionStatus::Complete);
    CHECK(*t.recovered_message == 1);
    bool denied = false;
    for (const TranscriptEvent& e : t.events)
        denied = denied || (e.kind == "deny" && e.public_detail.find("party 4") == 0);
    CHECK(denied);

    // on a broadcast channel the same keyed intruder walks right in, but V2
    // is monotone: one more exponent still fixes f, so nothing breaks
    SessionOptions open;
    open.mode = SessionMode::Broadcast;
    open.intruders = {4};
    Transcript t2 = run_decrypt_session(fx.dealer, fx.keys, {1, 2, 3}, 1, open, 31);
    CHECK(t2.status == SessionStatus::Complete);
    CHECK(*t2.recovered_message == 1);
}

TEST_CASE("broadcast intruders do corrupt v1 sessions", "[session]") {
    // V1 is non-monotone, so an assigned party outside the coalition really
    // can wreck the decryption by stepping: the residue picks up its t_i
    Rng rng(0xab);
    SetupOptions so;
    auto [dealer, keys] = setup_dealer(3, 0, Variant::V1_minus, so, rng);
    SessionOptions open;
    open.mode = SessionMode::Broadcast;
    open.intruders = {3};
    Transcript t = run_decrypt_session(dealer, keys, {1, 2}, 1, open, 53);
    CHECK(t.status == SessionStatus::Failed);
    CHECK_FALSE(t.recovered_message.has_value());

    // gated, the same actor is refused and the coalition decrypts in peace
    SessionOptions room;
    room.mode = SessionMode::PrivateRoom;
    room.intruders = {3};
    Transcript t2 = run_decrypt_session(dealer, keys, {1, 2}, 1, room, 53);
    CHECK(t2.status == SessionStatus::Complete);
    CHECK(*t2.recovered_message == 1);
}

TEST_CASE("scheme failures become failed transcripts, not exceptions", "[session]") {
    Fixture fx = make_v2(0xa6);
    SessionOptions opts;
    // party 9 exists nowhere: encryption refuses, transcript says so
    Transcript t = run_decrypt_session(fx.dealer, fx.keys, {1, 9}, 1, opts, 37);
    CHECK(t.status == SessionStatus::Failed);
    bool error_logged = false;
    for (const TranscriptEvent& e : t.events) error_logged |= e.kind == "error";
    CHECK(error_logged);

    // out-of-range message, same story
    Transcript t2 = run_decrypt_session(fx.dealer, fx.keys, {1}, 99, opts, 38);
    CHECK(t2.status == SessionStatus::Failed);
}

TEST_CASE("virtual parties pad v2 sessions invisibly", "[session]") {
    Fixture fx = make_v2(0xa7, 2, 2);
    PartyDecryptKey k7 = join_party(fx.dealer, 7);
    fx.keys.emplace(7, k7);
    SessionOptions opts;
    opts.mode = SessionMode::TrustedServer;
    opts.virtual_parties = {7};
    Transcript t = run_decrypt_session(fx.dealer, fx.keys, {1, 2}, 1, opts, 41);
    CHECK(t.status == SessionStatus::Complete);
    CHECK(*t.recovered_message == 1);
    // the padding party is invited and steps like anyone else
    bool invited = false;
    for (const TranscriptEvent& e : t.events)
        invited = invited || (e.kind == "invite" && e.public_detail == "party 7");
    CHECK(invited);
    CHECK(stepped_parties(t).size() == 3);

    // V1 cannot pad: the transcript fails instead of throwing
    Rng rv1(0xa8);
    SetupOptions so;
    auto [v1d, v1k] = setup_dealer(2, 0, Variant::V1_minus, so, rv1);
    Transcript tv1 = run_decrypt_session(v1d, v1k, {1, 2}, 1, opts, 42);
    CHECK(tv1.status == SessionStatus::Failed);
}

TEST_CASE("sign sessions produce verifiable documents", "[session]") {
    Rng rng(0xa9);
    SetupOptions so;
    so.v2_d = 4;
    auto [dealer, dkeys] = setup_dealer(3, 0, Variant::V2, so, rng);
    std::map<PartyId, PartySignKey> skeys;
    for (PartyId id = 1; id <= 3; ++id) skeys.emplace(id, sign_key_for(dealer, id));

    GroupElement doc = encode_message(2, dealer.msg_subgroup);
    SessionOptions opts;
    auto [sd, t] = run_sign_session(skeys, {1, 3}, doc, opts, 43);
    CHECK(t.status == SessionStatus::Complete);
    CHECK(sd.coalition == std::vector<PartyId>{1, 3});
    std::map<PartyId, BigInt> orders{{1, skeys.at(1).order}, {3, skeys.at(3).order}};
    CHECK(verify_signature(sd, orders, dealer.d) == SignatureCheck::Accept);

    // a missing key fails the session, and the document stays unsigned
    auto [sd2, t2] = run_sign_session(skeys, {1, 9}, doc, opts, 44);
    CHECK(t2.status == SessionStatus::Failed);
}

TEST_CASE("threshold sessions gate on coalition size", "[session]") {
    Rng rng(0xaa);
    ThresholdOptions topts;
    auto [dealer, keys] = threshold_setup(3, topts, rng);
    SessionOptions opts;
    Transcript ok = run_threshold_session(dealer, keys, {1, 2}, 1, 2, opts, 45);
    CHECK(ok.status == SessionStatus::Complete);
    CHECK(*ok.recovered_message == 1);
    Transcript low = run_threshold_session(dealer, keys, {2}, 1, 2, opts, 46);
    CHECK(low.status == SessionStatus::Failed);
    CHECK_FALSE(low.recovered_message.has_value());
    Transcript bad = run_threshold_session(dealer, keys, {1, 2}, 1, 9, opts, 47);
    CHECK(bad.status == SessionStatus::Failed); // threshold out of range
}
