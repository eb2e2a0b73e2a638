#pragma once

/**
 * @file threshold.hpp
 * @brief Cover set-system construction and the dealer-chosen (m,s)-threshold
 *        encryption scheme built on hidden multipliers.
 *
 * The combinatorial core: a family T_1(k), ..., T_s(k) of index sets, one
 * per party and level, such that any k of the level-k sets cover {1..l_k}
 * while any k-1 leave a hole. The dealer hides the message under one
 * multiplier per index i <= l_m; a coalition of size >= m jointly covers
 * all of them, a smaller one provably cannot.
 */

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "hmenc/bigint.hpp"
#include "hmenc/errors.hpp"
#include "hmenc/numtheory.hpp"
#include "hmenc/paramgen.hpp"
#include "hmenc/scheme.hpp"

namespace hmenc {

// ---------------------------------------------------------------------------
// Lemma-3 cover set system
// ---------------------------------------------------------------------------

struct ThresholdSetSystem {
    std::size_t s;                                     // pool size
    std::vector<std::size_t> sizes;                    // l_1..l_s (1-based levels)
    std::vector<std::vector<std::set<std::size_t>>> levels; // levels[k-1][j-1] = T_j(k)

    const std::set<std::size_t>& subset(std::size_t level_k, std::size_t party_j) const {
        return levels.at(level_k - 1).at(party_j - 1);
    }
    std::size_t size_at(std::size_t level_k) const { return sizes.at(level_k - 1); }
};

inline constexpr std::size_t kMaxSetSystemPool = 16;

namespace detail {

/// All (choose)-element subsets of {1..s} in lexicographic order.
inline std::vector<std::vector<std::size_t>> lex_subsets(std::size_t s, std::size_t choose) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(choose);
    for (std::size_t i = 0; i < choose; ++i) idx[i] = i + 1;
    if (choose == 0) return {{}};
    for (;;) {
        out.push_back(idx);
        std::size_t i = choose;
        while (i > 0 && idx[i - 1] == s - choose + i) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < choose; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

} // namespace detail

/**
 * Build the family bottom-up: T_j(1) = {1}; level k takes one fresh index
 * per (k-1)-subset V of parties and inserts it into T_j(k) for every
 * j outside V. Any k parties then cover level k (for each V there is a
 * member outside it), while the specific k-1 parties forming V all miss V's
 * own fresh index.
 */
inline ThresholdSetSystem build_set_system(std::size_t s) {
    if (s < 1 || s > kMaxSetSystemPool)
        throw PoolTooLarge("build_set_system: pool size " + std::to_string(s) +
                           " outside [1, " + std::to_string(kMaxSetSystemPool) + "]");
    ThresholdSetSystem sys;
    sys.s = s;
    std::vector<std::set<std::size_t>> current(s, std::set<std::size_t>{1});
    sys.levels.push_back(current);
    sys.sizes.push_back(1);
    std::size_t next_index = 2;
    for (std::size_t k = 2; k <= s; ++k) {
        for (const auto& v : detail::lex_subsets(s, k - 1)) {
            std::size_t fresh = next_index++;
            std::set<std::size_t> excluded(v.begin(), v.end());
            for (std::size_t j = 1; j <= s; ++j)
                if (!excluded.count(j)) current[j - 1].insert(fresh);
        }
        sys.levels.push_back(current);
        sys.sizes.push_back(next_index - 1);
    }
    return sys;
}

// ---------------------------------------------------------------------------
// threshold dealer and keys
// ---------------------------------------------------------------------------

struct ThresholdKey {
    PartyId party_id;
    BigInt key; // t~_j = tbar_j * (tbar_j^-1 mod d), tbar_j = prod over T_j(s)
};

struct ThresholdDealer {
    BigInt modulus;
    std::variant<FieldPlatform, RingPlatform> platform;
    SubgroupSpec msg_subgroup;           // (f_0, d)
    std::vector<SubgroupSpec> w_subgroups; // W_1..W_b, b = 2^s - 1, index i-1
    BigInt d;
    ThresholdSetSystem system;
    std::uint64_t platform_hash;

    std::size_t pool_size() const { return system.s; }
};

struct ThresholdCiphertext {
    GroupElement value;
    std::size_t m; // per-message threshold chosen by the dealer
    std::uint64_t platform_hash;
};

struct ThresholdOptions {
    BigInt d = 2;               // message subgroup order
    unsigned order_bits = 0;    // 0: smallest primes above d
    unsigned platform_bits = 0;
    bool certified = false;
    bool ring = false;
};

inline constexpr std::size_t kMaxThresholdPool = 12; // b = 2^s - 1 subgroup orders

/**
 * Provision b = 2^s - 1 hidden subgroups of distinct prime orders t_i > d
 * plus the message subgroup, then derive each party's key from its level-s
 * set: t~_j kills every W_i with i in T_j(s) and fixes F elementwise.
 * Keeping every t_i prime and above d makes below-threshold failure
 * unconditional: a surviving prime-order factor cannot be annihilated by an
 * exponent it does not divide.
 */
inline std::pair<ThresholdDealer, std::map<PartyId, ThresholdKey>>
threshold_setup(std::size_t s, const ThresholdOptions& opts, Rng& rng) {
    if (s < 1 || s > kMaxThresholdPool)
        throw PoolTooLarge("threshold_setup: pool size " + std::to_string(s) +
                           " outside [1, " + std::to_string(kMaxThresholdPool) + "]");
    if (opts.d < 2) throw BadInput("threshold_setup: message order must be >= 2");
    ThresholdSetSystem sys = build_set_system(s);
    std::size_t b = sys.size_at(s);

    // distinct primes above d (ascending at desk scale, sampled otherwise)
    std::vector<BigInt> orders;
    if (opts.order_bits == 0) {
        BigInt last = opts.d < 2 ? BigInt(2) : opts.d;
        while (orders.size() < b) {
            last = detail::next_odd_prime(last);
            orders.push_back(last);
        }
    } else {
        std::set<BigInt> chosen;
        BigInt lo = BigInt(1) << (opts.order_bits - 1), hi = (BigInt(1) << opts.order_bits) - 1;
        if (lo <= opts.d)
            throw BadInput("threshold_setup: order_bits too small, t_i must exceed d");
        std::uint64_t budget = 100'000;
        while (chosen.size() < b && budget-- > 0) {
            BigInt t = rng.in_range(lo, hi) | 1;
            if (is_probable_prime(t)) chosen.insert(t);
        }
        if (chosen.size() < b)
            throw SearchExhausted("threshold_setup: not enough prime orders");
        orders.assign(chosen.begin(), chosen.end());
    }

    SetupOptions popts;
    popts.platform_bits = opts.platform_bits;
    popts.certified = opts.certified;
    popts.ring = opts.ring;
    auto bundle = detail::build_platform_bundle(orders, opts.d, popts, rng);

    ThresholdDealer dealer{std::move(bundle.modulus),
                           std::move(bundle.platform),
                           std::move(bundle.msg_subgroup),
                           std::move(bundle.subgroups),
                           opts.d,
                           std::move(sys),
                           0};
    dealer.platform_hash = platform_binding_hash(dealer.modulus);

    std::map<PartyId, ThresholdKey> keys;
    for (std::size_t j = 1; j <= s; ++j) {
        BigInt tbar = 1;
        for (std::size_t i : dealer.system.subset(s, j)) tbar *= dealer.w_subgroups[i - 1].order;
        BigInt tbar_inv = mod_inverse(tbar % dealer.d, dealer.d);
        PartyId id = static_cast<PartyId>(j);
        keys.emplace(id, ThresholdKey{id, tbar * tbar_inv});
    }
    return {std::move(dealer), std::move(keys)};
}

/// Check both ThresholdKey invariants against the dealer state (test hook).
inline bool threshold_key_valid(const ThresholdDealer& dealer, const ThresholdKey& key) {
    if (key.key % dealer.d != 1) return false;
    for (std::size_t i : dealer.system.subset(dealer.pool_size(), key.party_id))
        if (key.key % dealer.w_subgroups[i - 1].order != 0) return false;
    return true;
}

/**
 * c = g_1 ... g_{l_m} * f with one random nontrivial g_i per subgroup
 * W_i, i <= l_m. The threshold m is chosen per message; smaller m hides the
 * message under fewer multipliers, so fewer parties suffice to strip them.
 */
inline ThresholdCiphertext threshold_encrypt(const ThresholdDealer& dealer,
                                             const GroupElement& f, std::size_t m, Rng& rng) {
    if (m < 1 || m > dealer.pool_size())
        throw ThresholdOutOfRange("threshold_encrypt: m = " + std::to_string(m) +
                                  " outside [1, " + std::to_string(dealer.pool_size()) + "]");
    if (f.modulus() != dealer.modulus)
        throw BadInput("threshold_encrypt: message belongs to a different platform");
    if (!f.pow(dealer.d).is_identity())
        throw NotInSubgroup("threshold_encrypt: message is not in the order-d subgroup");
    GroupElement value = f;
    for (std::size_t i = 1; i <= dealer.system.size_at(m); ++i)
        value = value * sample_nontrivial(dealer.w_subgroups[i - 1], rng);
    return ThresholdCiphertext{std::move(value), m, dealer.platform_hash};
}

/// One coalition member's move: c -> c^(t~_j). Commutative like every other
/// step in the library.
inline GroupElement threshold_party_step(const GroupElement& c, const ThresholdKey& key) {
    return c.pow(key.key);
}

} // namespace hmenc
