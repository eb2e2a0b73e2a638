#pragma once

/**
 * @file protocol.hpp
 * @brief Deterministic in-process orchestration of decryption, signature,
 *        and threshold sessions with replayable transcripts.
 *
 * Three visibility modes model the communication setups: Broadcast puts
 * every intermediate value on the public channel, PrivateRoom confines them
 * to the invited parties, and TrustedServer collects the coalition's keys
 * and announces only the final result. The algebra is identical across
 * modes; what changes is which side of the transcript a value lands on and
 * who is allowed to act.
 *
 * There is no wall clock and no real transport: events carry a logical
 * sequence counter, and all randomness flows from the session seed, so a
 * transcript is a pure function of (inputs, seed).
 */

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hmenc/bigint.hpp"
#include "hmenc/errors.hpp"
#include "hmenc/scheme.hpp"
#include "hmenc/threshold.hpp"

namespace hmenc {

enum class SessionMode { Broadcast, PrivateRoom, TrustedServer };
enum class OrderPolicy { Sequential, Shuffled };
enum class SessionStatus { Open, Complete, Failed };

inline const char* session_mode_name(SessionMode m) {
    switch (m) {
        case SessionMode::Broadcast: return "broadcast";
        case SessionMode::PrivateRoom: return "room";
        default: return "server";
    }
}

inline const char* session_status_name(SessionStatus s) {
    switch (s) {
        case SessionStatus::Open: return "open";
        case SessionStatus::Complete: return "complete";
        default: return "failed";
    }
}

struct TranscriptEvent {
    std::uint64_t seq;          // logical clock
    std::string kind;           // invite | join | deny | step | finalize | result | error
    std::string public_detail;  // what an outside observer sees
    std::string private_detail; // what only the room / server sees ("" if nothing)
};

struct Transcript {
    std::string session_id;
    SessionMode mode;
    std::uint64_t seed;
    SessionStatus status = SessionStatus::Open;
    std::vector<TranscriptEvent> events;
    std::optional<GroupElement> final_value;
    std::optional<BigInt> recovered_message;

    /// True when some public event detail contains the needle. Lets tests
    /// assert that gated modes never print intermediate values publicly.
    bool public_view_has(const std::string& needle) const {
        for (const auto& e : events)
            if (e.public_detail.find(needle) != std::string::npos) return true;
        return false;
    }
};

struct SessionOptions {
    SessionMode mode = SessionMode::Broadcast;
    OrderPolicy order = OrderPolicy::Sequential;
    std::vector<PartyId> intruders;       // uninvited actors trying to inject a step
    std::vector<PartyId> virtual_parties; // dealer-held padding keys (V2/threshold only)
    bool oracle_check = true;             // compare the final value to the expected f
};

// ---------------------------------------------------------------------------
// session state machine
// ---------------------------------------------------------------------------

/**
 * Tracks one session: who was invited, who joined, who stepped, and the
 * running group element. Join in PrivateRoom/TrustedServer mode requires
 * the capability token minted at invite time; Broadcast admits anyone (the
 * ciphertext is on a public channel, so anybody can exponentiate it).
 */
class Session {
public:
    Session(std::string id, SessionMode mode, std::uint64_t seed, GroupElement initial,
            const std::vector<PartyId>& invited)
        : session_id_(std::move(id)), mode_(mode), seed_(seed), current_(std::move(initial)),
          invited_(invited.begin(), invited.end()) {
        for (PartyId p : invited) log("invite", "party " + std::to_string(p), "");
    }

    std::uint64_t invite_token(PartyId id) const {
        return fnv1a64(session_id_ + "|" + std::to_string(seed_) + "|" + std::to_string(id));
    }

    bool join(PartyId id, std::uint64_t token) {
        bool gated = mode_ != SessionMode::Broadcast;
        if (gated && (!invited_.count(id) || token != invite_token(id))) {
            log("deny", "party " + std::to_string(id) + " refused entry", "");
            return false;
        }
        joined_.insert(id);
        log("join", "party " + std::to_string(id) +
                        (mode_ == SessionMode::TrustedServer ? " handed key to server" : ""),
            "");
        return true;
    }

    /// Record one party's move, replacing the running value. The transform
    /// itself (exponentiation or multiplication) happens at the scheme
    /// layer; the session only enforces one step per joined party and
    /// decides where the new value is visible.
    bool step(PartyId id, GroupElement new_value) {
        if (!joined_.count(id)) {
            log("deny", "party " + std::to_string(id) + " stepped without joining", "");
            return false;
        }
        if (!stepped_.insert(id).second) {
            log("deny", "party " + std::to_string(id) + " already stepped", "");
            return false;
        }
        current_ = std::move(new_value);
        std::string value = "value " + to_hex(current_.value());
        if (mode_ == SessionMode::Broadcast)
            log("step", "party " + std::to_string(id) + " " + value, "");
        else
            log("step", "party " + std::to_string(id), value);
        return true;
    }

    void fail(const std::string& why) {
        status_ = SessionStatus::Failed;
        log("error", why, "");
    }

    /// Close the session; the final result is announced in every mode.
    void finalize(GroupElement final_value, bool matches_expected) {
        current_ = std::move(final_value);
        log("finalize", "steps applied: " + std::to_string(stepped_.size()), "");
        log("result", "value " + to_hex(current_.value()), "");
        if (status_ != SessionStatus::Failed)
            status_ = matches_expected ? SessionStatus::Complete : SessionStatus::Failed;
    }

    const GroupElement& current() const { return current_; }
    SessionStatus status() const { return status_; }

    Transcript transcript() const {
        return Transcript{session_id_, mode_,    seed_,       status_,
                          events_,     current_, std::nullopt};
    }

private:
    void log(const std::string& kind, const std::string& pub, const std::string& priv) {
        events_.push_back(TranscriptEvent{seq_++, kind, pub, priv});
    }

    std::string session_id_;
    SessionMode mode_;
    std::uint64_t seed_;
    GroupElement current_;
    std::set<PartyId> invited_;
    std::set<PartyId> joined_;
    std::set<PartyId> stepped_;
    std::vector<TranscriptEvent> events_;
    std::uint64_t seq_ = 0;
    SessionStatus status_ = SessionStatus::Open;
};

namespace detail {

inline std::vector<PartyId> step_order(const std::vector<PartyId>& coalition,
                                       OrderPolicy policy, Rng& rng) {
    std::vector<PartyId> order = coalition;
    if (policy == OrderPolicy::Shuffled && order.size() > 1)
        for (std::size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[static_cast<std::size_t>(rng.next_u64() % (i + 1))]);
    return order;
}

inline Transcript failed_transcript(const std::string& sid, const SessionOptions& opts,
                                    std::uint64_t seed, const BigInt& modulus,
                                    const std::string& why) {
    Session s(sid, opts.mode, seed, GroupElement::identity(modulus), {});
    s.fail(why);
    s.finalize(s.current(), false);
    return s.transcript();
}

} // namespace detail

// ---------------------------------------------------------------------------
// session drivers
// ---------------------------------------------------------------------------

/**
 * Encrypt message for coalition under the dealer's variant, then drive the
 * coalition through the session and compare against the expected plaintext.
 * Scheme errors surface as Failed transcripts with an error event, not as
 * exceptions: a simulator run always yields a transcript.
 */
inline Transcript run_decrypt_session(const DealerSecret& dealer,
                                      const std::map<PartyId, PartyDecryptKey>& keys,
                                      const std::vector<PartyId>& coalition,
                                      const BigInt& message, const SessionOptions& opts,
                                      std::uint64_t seed) {
    Rng root(seed);
    Rng enc_rng = root.derive(1), order_rng = root.derive(2);
    std::string sid = "decrypt-" + hex16(fnv1a64(std::to_string(seed) + "|decrypt"));

    // the server invites virtual parties alongside the real coalition, so
    // padding is indistinguishable from real membership in the transcript
    std::vector<PartyId> invited = coalition;
    invited.insert(invited.end(), opts.virtual_parties.begin(), opts.virtual_parties.end());

    GroupElement f = GroupElement::identity(dealer.modulus);
    std::optional<Session> live;
    try {
        f = encode_message(message, dealer.msg_subgroup);
        Ciphertext ct = dealer.variant == Variant::V2
                            ? v2_encrypt(dealer, f, coalition, enc_rng)
                            : v1_encrypt(dealer, f, coalition, enc_rng);
        live.emplace(sid, opts.mode, seed, ct.value, invited);
    } catch (const Error& e) {
        return detail::failed_transcript(sid, opts, seed, dealer.modulus, e.what());
    }
    try {
        for (PartyId id : detail::step_order(coalition, opts.order, order_rng)) {
            auto it = keys.find(id);
            if (it == keys.end())
                throw UnknownParty("no decrypt key for party " + std::to_string(id));
            if (live->join(id, live->invite_token(id)))
                live->step(id, party_step(live->current(), it->second));
        }
        for (PartyId id : opts.intruders) {
            // an uninvited actor: waved away at the door in gated modes,
            // free to corrupt the running value in broadcast mode
            if (!live->join(id, 0)) continue;
            auto it = keys.find(id);
            if (it != keys.end()) live->step(id, party_step(live->current(), it->second));
        }
        for (PartyId id : opts.virtual_parties) {
            if (is_v1(dealer.variant))
                throw UnsupportedForV1("virtual participants require monotone semantics");
            // dealer-held key: the server pads the session itself
            if (live->join(id, live->invite_token(id)))
                live->step(id, live->current().pow(dealer.subgroup_of(id).order));
        }
        GroupElement final_value = is_v1(dealer.variant)
                                       ? v1_finalize(live->current(), dealer.variant)
                                       : live->current();
        live->finalize(final_value, !opts.oracle_check || final_value == f);
    } catch (const Error& e) {
        live->fail(e.what());
        live->finalize(live->current(), false);
    }
    Transcript t = live->transcript();
    if (t.status == SessionStatus::Complete && bit_length(dealer.d) <= kDecodeBsgsMaxBits)
        t.recovered_message = decode_message(*t.final_value, dealer.msg_subgroup);
    return t;
}

/// Coalition members successively multiply the document by secret subgroup
/// elements. Complete means every coalition member contributed a step.
inline std::pair<SignedDocument, Transcript>
run_sign_session(const std::map<PartyId, PartySignKey>& keys,
                 const std::vector<PartyId>& coalition, const GroupElement& document,
                 const SessionOptions& opts, std::uint64_t seed) {
    Rng root(seed);
    Rng sign_rng = root.derive(1), order_rng = root.derive(2);
    std::string sid = "sign-" + hex16(fnv1a64(std::to_string(seed) + "|sign"));
    Session live(sid, opts.mode, seed, document, coalition);
    try {
        for (PartyId id : detail::step_order(coalition, opts.order, order_rng)) {
            auto it = keys.find(id);
            if (it == keys.end())
                throw UnknownParty("no sign key for party " + std::to_string(id));
            if (live.join(id, live.invite_token(id)))
                live.step(id, sign_step(live.current(), it->second, sign_rng));
        }
        live.finalize(live.current(), true);
    } catch (const Error& e) {
        live.fail(e.what());
        live.finalize(live.current(), false);
    }
    SignedDocument sd{document, live.current(), coalition};
    return {std::move(sd), live.transcript()};
}

/// Threshold decryption session: encrypt at threshold m, let the coalition
/// step, succeed iff the final value matches the encoded message.
inline Transcript run_threshold_session(const ThresholdDealer& dealer,
                                        const std::map<PartyId, ThresholdKey>& keys,
                                        const std::vector<PartyId>& coalition,
                                        const BigInt& message, std::size_t m,
                                        const SessionOptions& opts, std::uint64_t seed) {
    Rng root(seed);
    Rng enc_rng = root.derive(1), order_rng = root.derive(2);
    std::string sid = "threshold-" + hex16(fnv1a64(std::to_string(seed) + "|threshold"));

    std::vector<PartyId> invited = coalition;
    invited.insert(invited.end(), opts.virtual_parties.begin(), opts.virtual_parties.end());

    GroupElement f = GroupElement::identity(dealer.modulus);
    std::optional<Session> live;
    try {
        f = encode_message(message, dealer.msg_subgroup);
        ThresholdCiphertext ct = threshold_encrypt(dealer, f, m, enc_rng);
        live.emplace(sid, opts.mode, seed, ct.value, invited);
    } catch (const Error& e) {
        return detail::failed_transcript(sid, opts, seed, dealer.modulus, e.what());
    }
    try {
        auto step_for = [&](PartyId id) {
            auto it = keys.find(id);
            if (it == keys.end())
                throw UnknownParty("no threshold key for party " + std::to_string(id));
            return threshold_party_step(live->current(), it->second);
        };
        for (PartyId id : detail::step_order(coalition, opts.order, order_rng))
            if (live->join(id, live->invite_token(id))) live->step(id, step_for(id));
        for (PartyId id : opts.intruders) {
            if (!live->join(id, 0)) continue;
            if (keys.count(id)) live->step(id, step_for(id));
        }
        for (PartyId id : opts.virtual_parties)
            if (live->join(id, live->invite_token(id))) live->step(id, step_for(id));
        bool match = live->current() == f;
        live->finalize(live->current(), !opts.oracle_check || match);
    } catch (const Error& e) {
        live->fail(e.what());
        live->finalize(live->current(), false);
    }
    Transcript t = live->transcript();
    if (t.status == SessionStatus::Complete && bit_length(dealer.d) <= kDecodeBsgsMaxBits)
        t.recovered_message = decode_message(*t.final_value, dealer.msg_subgroup);
    return t;
}

} // namespace hmenc
