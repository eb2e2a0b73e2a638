#pragma once

/**
 * @file scheme.hpp
 * @brief Hidden-multiplier encryption: the base scheme, multi-recipient
 *        Versions 1 and 2, coalition signatures, and the dealer's key
 *        ledger (setup, join, leave).
 *
 * All ciphertext algebra lives in the multiplicative group of F_p or Z_pq.
 * A message is a group element f of order dividing d; hiding multiplies f
 * by random nontrivial elements of the recipients' secret subgroups, and
 * decryption raises the ciphertext to the recipients' secret exponents,
 * which annihilate the multipliers while fixing (or inverting) f.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hmenc/bigint.hpp"
#include "hmenc/errors.hpp"
#include "hmenc/numtheory.hpp"
#include "hmenc/paramgen.hpp"

namespace hmenc {

using PartyId = std::uint32_t;

enum class Variant { V1_minus, V1_plus, V2 };

inline bool is_v1(Variant v) { return v != Variant::V2; }

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::V1_minus: return "v1-";
        case Variant::V1_plus: return "v1+";
        default: return "v2";
    }
}

/// Binds serialized keys and ciphertexts to one platform so they cannot be
/// replayed against another modulus.
inline std::uint64_t platform_binding_hash(const BigInt& modulus) {
    return fnv1a64("hmenc-platform:" + to_hex(modulus));
}

// ---------------------------------------------------------------------------
// keys and dealer state
// ---------------------------------------------------------------------------

struct PartyDecryptKey {
    PartyId party_id;
    BigInt exponent; // the secret subgroup order t_i
};

struct PartySignKey {
    PartyId party_id;
    GroupElement generator; // the secret subgroup generator u_i
    BigInt order;           // its exact order t_i (needed to sample multipliers)
};

struct Ciphertext {
    GroupElement value;
    std::vector<PartyId> coalition; // intended recipients, in encryption order
    Variant variant;
    std::uint64_t platform_hash;
};

struct SignedDocument {
    GroupElement document;     // f, order dividing d
    GroupElement signed_value; // f_sign = a_{i_1} ... a_{i_k} * f
    std::vector<PartyId> coalition;
};

/**
 * Everything the dealer knows. The hidden subgroup list is fixed at setup
 * (s_max entries); the assignment ledger moves indices between free,
 * assigned, and retired, and retired indices never come back.
 */
struct DealerSecret {
    Variant variant;
    BigInt modulus; // public group modulus: p (field) or n (ring)
    std::variant<FieldPlatform, RingPlatform> platform;
    SubgroupSpec msg_subgroup;        // (f_0, d)
    std::vector<SubgroupSpec> hidden; // (u_i, t_i) for i = 0..s_max-1
    BigInt d;                         // message subgroup order
    BigInt t_product;                 // prod of ALL hidden orders; V1's t
    std::map<PartyId, std::size_t> assignment;
    std::set<std::size_t> free_indices;
    std::set<std::size_t> retired;
    std::uint64_t platform_hash;

    std::size_t pool_capacity() const { return hidden.size(); }

    const SubgroupSpec& subgroup_of(PartyId id) const {
        auto it = assignment.find(id);
        if (it == assignment.end())
            throw UnknownParty("party " + std::to_string(id) + " is not assigned");
        return hidden[it->second];
    }
};

/// Random nontrivial element of a subgroup: generator^e with e uniform in
/// [1, order-1]. Orders are >= 2 for every dealer subgroup, so one exists.
inline GroupElement sample_nontrivial(const SubgroupSpec& sg, Rng& rng) {
    if (sg.order < 2) throw BadInput("sample_nontrivial: subgroup is trivial");
    return sg.generator.pow(rng.in_range(1, sg.order - 1));
}

// ---------------------------------------------------------------------------
// dealer setup
// ---------------------------------------------------------------------------

struct SetupOptions {
    BigInt v2_d = 2;            // message order for V2 (V1 derives d = t -/+ 1)
    unsigned order_bits = 0;    // 0: smallest admissible subgroup orders (desk scale)
    unsigned platform_bits = 0; // 0: smallest admissible platform prime
    bool certified = false;     // provable platform prime via a certificate chain
    bool ring = false;          // build Z_pq instead of F_p
};

namespace detail {

/// Smallest prime > after with t == 1 (mod d) (Dirichlet progression scan).
inline BigInt next_prime_in_progression(const BigInt& d, const BigInt& after) {
    for (BigInt k = (after - 1) / d + 1;; ++k) { // least k with 1 + k*d > after
        BigInt t = 1 + k * d;
        if (is_probable_prime(t)) return t;
    }
}

/// Smallest odd prime > after (plain scan; desk-scale orders).
inline BigInt next_odd_prime(const BigInt& after) {
    BigInt t = after + 1;
    if (t % 2 == 0) ++t;
    if (t < 3) t = 3;
    for (;; t += 2)
        if (is_probable_prime(t)) return t;
}

/// count distinct primes for hidden subgroup orders. V2 draws them from the
/// progression 1 + d*N so every t_i == 1 (mod d); V1 takes plain odd primes.
/// order_bits = 0 scans upward deterministically, otherwise samples at the
/// requested size.
inline std::vector<BigInt> pick_subgroup_orders(std::size_t count, Variant variant,
                                                const BigInt& d, unsigned order_bits,
                                                Rng& rng) {
    std::set<BigInt> chosen;
    const bool v2 = variant == Variant::V2;
    if (order_bits == 0) {
        BigInt last = 2;
        while (chosen.size() < count) {
            BigInt t = v2 ? next_prime_in_progression(d, last) : next_odd_prime(last);
            chosen.insert(t);
            last = t;
        }
    } else {
        BigInt lo = BigInt(1) << (order_bits - 1), hi = (BigInt(1) << order_bits) - 1;
        if (v2 && hi / d <= lo / d + 1)
            throw BadInput("pick_subgroup_orders: order_bits too small for progression 1 + d*N");
        std::uint64_t budget = 100'000;
        while (chosen.size() < count && budget-- > 0) {
            BigInt t;
            if (v2) {
                BigInt k = rng.in_range(lo / d + 1, hi / d);
                t = 1 + k * d;
            } else {
                t = rng.in_range(lo, hi) | 1;
            }
            if (t > 2 && is_probable_prime(t)) chosen.insert(t);
        }
        if (chosen.size() < count)
            throw SearchExhausted("pick_subgroup_orders: not enough primes at " +
                                  std::to_string(order_bits) + " bits");
    }
    return std::vector<BigInt>(chosen.begin(), chosen.end());
}

/// Wrap a FieldSetup or RingSetup into the dealer's common shape.
struct PlatformBundle {
    BigInt modulus;
    std::variant<FieldPlatform, RingPlatform> platform;
    std::vector<SubgroupSpec> subgroups;
    SubgroupSpec msg_subgroup;
};

inline PlatformBundle build_platform_bundle(const std::vector<BigInt>& orders, const BigInt& d,
                                            const SetupOptions& opts, Rng& rng) {
    if (!opts.ring) {
        auto fs = build_field_platform(orders, d, opts.platform_bits, rng, opts.certified);
        BigInt p = fs.platform.p;
        return PlatformBundle{std::move(p), std::move(fs.platform), std::move(fs.subgroups),
                              std::move(fs.msg_subgroup)};
    }
    // Ring route: hidden order t_i lives on the p side, the q side carries a
    // degenerate 1 so the composite order stays t_i; the message subgroup
    // also sits on the p side. Keeps V1/V2 congruence arithmetic unchanged.
    std::vector<std::pair<BigInt, BigInt>> pairs;
    pairs.reserve(orders.size());
    for (const BigInt& t : orders) pairs.emplace_back(t, 1);
    auto rs = build_ring_platform(pairs, {d, 1}, opts.platform_bits, rng, opts.certified);
    BigInt n = rs.platform.n;
    return PlatformBundle{std::move(n), std::move(rs.platform), std::move(rs.subgroups),
                          std::move(rs.msg_subgroup)};
}

} // namespace detail

/**
 * Create the dealer ledger and the initial s party keys. s_max = s + s_new
 * hidden subgroups are provisioned now so later joins reuse the platform;
 * the initial parties (ids 1..s) get a random s-subset of the indices.
 *
 * V1 fixes t = prod of all s_max orders and d = t - 1 (V1_minus) or t + 1
 * (V1_plus) at setup; V2 takes d from the options and sieves subgroup
 * orders from the progression 1 + d*N.
 */
inline std::pair<DealerSecret, std::map<PartyId, PartyDecryptKey>>
setup_dealer(std::size_t s, std::size_t s_new, Variant variant, const SetupOptions& opts,
             Rng& rng) {
    if (s < 1) throw BadInput("setup_dealer: need at least one party");
    std::size_t s_max = s + s_new;

    BigInt d;
    std::vector<BigInt> orders;
    if (variant == Variant::V2) {
        d = opts.v2_d;
        if (d < 2) throw BadInput("setup_dealer: V2 message order must be >= 2");
        orders = detail::pick_subgroup_orders(s_max, variant, d, opts.order_bits, rng);
    } else {
        orders = detail::pick_subgroup_orders(s_max, variant, 0, opts.order_bits, rng);
        BigInt t = 1;
        for (const BigInt& ti : orders) t *= ti;
        d = variant == Variant::V1_minus ? BigInt(t - 1) : BigInt(t + 1);
        if (d < 2) throw BadInput("setup_dealer: degenerate V1 message order");
    }

    auto bundle = detail::build_platform_bundle(orders, d, opts, rng);

    DealerSecret dealer{variant,
                        bundle.modulus,
                        std::move(bundle.platform),
                        std::move(bundle.msg_subgroup),
                        std::move(bundle.subgroups),
                        d,
                        1,
                        {},
                        {},
                        {},
                        platform_binding_hash(bundle.modulus)};
    for (const auto& sg : dealer.hidden) dealer.t_product *= sg.order;
    for (std::size_t i = 0; i < s_max; ++i) dealer.free_indices.insert(i);

    // Random s-subset of the s_max indices for the founding parties.
    std::vector<std::size_t> pool(s_max);
    for (std::size_t i = 0; i < s_max; ++i) pool[i] = i;
    for (std::size_t i = s_max - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
        std::swap(pool[i], pool[j]);
    }
    std::map<PartyId, PartyDecryptKey> keys;
    for (std::size_t k = 0; k < s; ++k) {
        PartyId id = static_cast<PartyId>(k + 1);
        dealer.assignment[id] = pool[k];
        dealer.free_indices.erase(pool[k]);
        keys.emplace(id, PartyDecryptKey{id, dealer.hidden[pool[k]].order});
    }
    return {std::move(dealer), std::move(keys)};
}

/**
 * Assign a free subgroup to a new party. Existing keys are untouched; only
 * V2 supports this because V1's d is welded to the setup-time product t.
 */
inline PartyDecryptKey join_party(DealerSecret& dealer, PartyId new_id) {
    if (is_v1(dealer.variant))
        throw UnsupportedForV1("join_party: V1 fixes d = t -/+ 1 at setup; joining would "
                               "invalidate every distributed key");
    if (dealer.assignment.count(new_id))
        throw BadInput("join_party: party " + std::to_string(new_id) + " already assigned");
    if (dealer.free_indices.empty()) throw PoolExhausted("join_party: no free subgroup left");
    std::size_t idx = *dealer.free_indices.begin();
    dealer.free_indices.erase(dealer.free_indices.begin());
    dealer.assignment[new_id] = idx;
    return PartyDecryptKey{new_id, dealer.hidden[idx].order};
}

/// Retire a party's subgroup: the index leaves the ledger for good and is
/// never reassigned.
inline void leave_party(DealerSecret& dealer, PartyId id) {
    auto it = dealer.assignment.find(id);
    if (it == dealer.assignment.end())
        throw UnknownParty("leave_party: party " + std::to_string(id) + " is not assigned");
    dealer.retired.insert(it->second);
    dealer.assignment.erase(it);
}

/// Sign-side key for an assigned party (the subgroup generator itself).
inline PartySignKey sign_key_for(const DealerSecret& dealer, PartyId id) {
    const SubgroupSpec& sg = dealer.subgroup_of(id);
    return PartySignKey{id, sg.generator, sg.order};
}

// ---------------------------------------------------------------------------
// message encoding
// ---------------------------------------------------------------------------

inline constexpr unsigned kDecodeBsgsMaxBits = 40;

/// m in [0, d-1] maps to f_0^m; injective because f_0 has exact order d.
inline GroupElement encode_message(const BigInt& m, const SubgroupSpec& msg_subgroup) {
    if (m < 0 || m >= msg_subgroup.order)
        throw MessageOutOfRange("encode_message: m = " + m.str() + " not in [0, " +
                                msg_subgroup.order.str() + ")");
    return msg_subgroup.generator.pow(m);
}

/**
 * Inverse of encode_message by baby-step giant-step in O(sqrt(d)). Supported
 * for d < 2^40; V1's astronomically large d treats messages as opaque group
 * elements instead.
 */
inline BigInt decode_message(const GroupElement& f, const SubgroupSpec& msg_subgroup) {
    const BigInt& dd = msg_subgroup.order;
    if (bit_length(dd) > kDecodeBsgsMaxBits)
        throw DecodeUnsupported("decode_message: d has " + std::to_string(bit_length(dd)) +
                                " bits, BSGS budget is " +
                                std::to_string(kDecodeBsgsMaxBits));
    if (f.modulus() != msg_subgroup.generator.modulus() || !f.pow(dd).is_identity())
        throw NotInSubgroup("decode_message: element is not in the message subgroup");
    BigInt steps = sqrt(dd);
    while (steps * steps < dd) ++steps; // ceil(sqrt(d))
    std::map<BigInt, BigInt> baby;      // f_0^j -> j for j in [0, steps)
    GroupElement cur = GroupElement::identity(f.modulus());
    for (BigInt j = 0; j < steps; ++j) {
        baby.emplace(cur.value(), j);
        cur = cur * msg_subgroup.generator;
    }
    GroupElement giant = msg_subgroup.generator.pow(steps).inverse();
    GroupElement y = f;
    for (BigInt i = 0; i < steps; ++i) {
        auto it = baby.find(y.value());
        if (it != baby.end()) {
            BigInt m = i * steps + it->second;
            if (m < dd) return m;
        }
        y = y * giant;
    }
    throw NotInSubgroup("decode_message: no discrete log found (element outside <f_0>)");
}

// ---------------------------------------------------------------------------
// base scheme
// ---------------------------------------------------------------------------

/// c = h*f with h a random nontrivial element of H.
inline GroupElement base_encrypt(const GroupElement& f, const SubgroupSpec& hidden_gen,
                                 Rng& rng) {
    return sample_nontrivial(hidden_gen, rng) * f;
}

/// c^(l*l') with l = exp(H) and l*l' == 1 (mod exp(F)): h^l dies, f survives.
inline GroupElement base_decrypt(const GroupElement& c, const BigInt& l, const BigInt& l_inv) {
    return c.pow(l * l_inv);
}

// ---------------------------------------------------------------------------
// multi-recipient encryption (Versions 1 and 2)
// ---------------------------------------------------------------------------

namespace detail {

inline void require_coalition(const DealerSecret& dealer, const std::vector<PartyId>& coalition) {
    if (coalition.empty()) throw BadInput("coalition must be nonempty");
    std::set<PartyId> seen;
    for (PartyId id : coalition) {
        if (!seen.insert(id).second)
            throw BadInput("coalition repeats party " + std::to_string(id));
        if (!dealer.assignment.count(id))
            throw UnknownParty("coalition member " + std::to_string(id) + " is not assigned");
    }
}

inline void require_message(const DealerSecret& dealer, const GroupElement& f) {
    if (f.modulus() != dealer.modulus)
        throw BadInput("message element belongs to a different platform");
    if (!f.pow(dealer.d).is_identity())
        throw NotInSubgroup("message is not in the order-d subgroup F");
}

} // namespace detail

/**
 * Version 1: c = prod_j v_{i_j} * f^(t / prod_j t_{i_j}) with t the product
 * over ALL s_max subgroup orders. Only the exact coalition can decrypt;
 * supersets break the exponent bookkeeping (non-monotone by design).
 */
inline Ciphertext v1_encrypt(const DealerSecret& dealer, const GroupElement& f,
                             const std::vector<PartyId>& coalition, Rng& rng) {
    if (!is_v1(dealer.variant)) throw WrongVariant("v1_encrypt: dealer is V2");
    detail::require_coalition(dealer, coalition);
    detail::require_message(dealer, f);
    BigInt coalition_t = 1;
    GroupElement mask = GroupElement::identity(dealer.modulus);
    for (PartyId id : coalition) {
        const SubgroupSpec& sg = dealer.subgroup_of(id);
        coalition_t *= sg.order;
        mask = mask * sample_nontrivial(sg, rng);
    }
    GroupElement value = mask * f.pow(dealer.t_product / coalition_t);
    return Ciphertext{std::move(value), coalition, dealer.variant, dealer.platform_hash};
}

/// One decryption step: raise to the party's secret exponent. Steps commute,
/// so coalition order never matters.
inline GroupElement party_step(const GroupElement& c, const PartyDecryptKey& key) {
    return c.pow(key.exponent);
}

/// After all coalition steps a V1 ciphertext holds f^t = f^(d+1) = f when
/// d = t-1, or f^(d-1) = f^-1 when d = t+1.
inline GroupElement v1_finalize(const GroupElement& c_final, Variant variant) {
    switch (variant) {
        case Variant::V1_minus: return c_final;
        case Variant::V1_plus: return c_final.inverse();
        default: throw WrongVariant("v1_finalize: not a V1 ciphertext");
    }
}

/**
 * Version 2: c = prod_j v_{i_j} * f. Because every t_i == 1 (mod d), f is a
 * fixed point of every party step, so any superset of the coalition still
 * recovers f (monotone).
 */
inline Ciphertext v2_encrypt(const DealerSecret& dealer, const GroupElement& f,
                             const std::vector<PartyId>& coalition, Rng& rng) {
    if (dealer.variant != Variant::V2) throw WrongVariant("v2_encrypt: dealer is V1");
    detail::require_coalition(dealer, coalition);
    detail::require_message(dealer, f);
    GroupElement value = f;
    for (PartyId id : coalition)
        value = value * sample_nontrivial(dealer.subgroup_of(id), rng);
    return Ciphertext{std::move(value), coalition, dealer.variant, dealer.platform_hash};
}

// ---------------------------------------------------------------------------
// coalition signatures (V2-style parameters)
// ---------------------------------------------------------------------------

/// Multiply the running document by a random nontrivial element of the
/// signer's subgroup: f -> a_{i_j} * f.
inline GroupElement sign_step(const GroupElement& doc_state, const PartySignKey& key,
                              Rng& rng) {
    if (key.order < 2) throw BadInput("sign_step: degenerate signing subgroup");
    return key.generator.pow(rng.in_range(1, key.order - 1)) * doc_state;
}

enum class SignatureCheck { Accept, Reject };

/**
 * Verifier side: raise f_sign to t = prod of the coalition's t_i. Every
 * signer factor dies and f^t = f because t == 1 (mod d); anything else
 * leaves residue. Only defined for V2-style parameters (t_i == 1 mod d),
 * which is what makes f a fixed point.
 */
inline SignatureCheck verify_signature(const SignedDocument& sd,
                                       const std::map<PartyId, BigInt>& verifier_orders,
                                       const BigInt& d) {
    if (!sd.document.pow(d).is_identity())
        throw NotInSubgroup("verify_signature: document is not in the message subgroup");
    BigInt t = 1;
    for (PartyId id : sd.coalition) {
        auto it = verifier_orders.find(id);
        if (it == verifier_orders.end())
            throw UnknownParty("verify_signature: no t_i for party " + std::to_string(id));
        if (it->second % d != 1)
            throw WrongVariant("verify_signature: t_i != 1 (mod d), parameters are not "
                               "V2-style");
        t *= it->second;
    }
    return sd.signed_value.pow(t) == sd.document ? SignatureCheck::Accept
                                                 : SignatureCheck::Reject;
}

} // namespace hmenc
