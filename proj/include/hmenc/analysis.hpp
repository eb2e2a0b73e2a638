#pragma once

/**
 * @file analysis.hpp
 * @brief Executable desk-scale versions of the secrecy arguments: an
 *        order-oracle break of RSA-style encryption and the prime-divisor
 *        distinguisher against hidden-multiplier ciphertexts.
 *
 * Every attack takes its order-computing power as an explicitly injected
 * OrderOracle capability. That lets tests state the security claims as a
 * dichotomy: with the oracle the break works every time, and without one
 * the attack cannot even be invoked. The schemes' security rests exactly on
 * order computation being intractable at real sizes.
 */

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hmenc/bigint.hpp"
#include "hmenc/errors.hpp"
#include "hmenc/numtheory.hpp"
#include "hmenc/scheme.hpp"

namespace hmenc {

// ---------------------------------------------------------------------------
// the oracle capability
// ---------------------------------------------------------------------------

/// A procedure computing multiplicative orders, wrapped as a capability
/// with a call counter. Hypothetically intractable at real parameter sizes;
/// cheap at desk scale, which is what makes the attacks demonstrable.
class OrderOracle {
public:
    using Fn = std::function<BigInt(const GroupElement&)>;

    explicit OrderOracle(Fn fn) : fn_(std::move(fn)) {
        if (!fn_) throw OracleUnavailable("OrderOracle: no order procedure supplied");
    }

    BigInt order_of(const GroupElement& g) const {
        ++calls_;
        return fn_(g);
    }

    std::uint64_t calls() const { return calls_; }

private:
    Fn fn_;
    mutable std::uint64_t calls_ = 0;
};

/// Oracle backed by successive multiplication (small moduli only).
inline OrderOracle brute_force_oracle(std::uint64_t modulus_bound = kBruteOrderModulusBound) {
    return OrderOracle(
        [modulus_bound](const GroupElement& g) { return element_order_brute(g, modulus_bound); });
}

/// Oracle backed by the factored-order algorithm: models an attacker who
/// somehow learned the group order's factorization.
inline OrderOracle factored_oracle(BigInt group_order, Factorization fact) {
    return OrderOracle([group_order = std::move(group_order), fact = std::move(fact)](
                           const GroupElement& g) {
        return element_order_factored(g, group_order, fact);
    });
}

// ---------------------------------------------------------------------------
// order-oracle attack on RSA-style encryption
// ---------------------------------------------------------------------------

/**
 * Given c = m^e and the power to compute t = |c|, derive a one-time key
 * d_m = e^-1 (mod t); then c^(d_m) = m^(e*d_m) = m because e*d_m = 1 + k*t
 * and t = |m| whenever gcd(e, |m|) = 1 (always true for proper RSA
 * exponents). No factoring of the modulus happens; order computation alone
 * does the damage.
 */
inline GroupElement order_oracle_attack(const GroupElement& c, const BigInt& e,
                                        const Factorization& group_order_fact) {
    BigInt t = element_order_factored(c, group_order_fact.value(), group_order_fact);
    BigInt d_m = mod_inverse(e, t); // NotInvertible when gcd(e, t) > 1; t = 1 gives d_m = 0
    return c.pow(d_m);
}

struct RsaAttackRow {
    BigInt n, e, m, c, recovered;
    bool success;
    std::uint64_t oracle_calls;
};

/// Sweep of toy RSA instances (distinct primes from a small pool, proper
/// exponents gcd(e, lambda(n)) = 1). Every row should come back recovered.
inline std::vector<RsaAttackRow> run_rsa_attack_sweep(std::size_t trials, Rng& rng) {
    static const std::uint32_t pool[] = {5,  7,  11, 13, 17, 19, 23, 29, 31,
                                         37, 41, 43, 47, 53, 59, 61, 67, 71};
    constexpr std::size_t pool_n = sizeof(pool) / sizeof(pool[0]);
    std::vector<RsaAttackRow> rows;
    rows.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        std::uint32_t p = pool[rng.next_u64() % pool_n], q = p;
        while (q == p) q = pool[rng.next_u64() % pool_n];
        BigInt n = BigInt(p) * q;
        BigInt lambda = lcm(BigInt(p - 1), BigInt(q - 1));
        BigInt e;
        do {
            e = rng.in_range(3, lambda - 1);
        } while (gcd(e, lambda) != 1);
        BigInt m;
        do {
            m = rng.in_range(2, n - 1);
        } while (gcd(m, n) != 1);
        Factorization phi_fact = factor_integer(BigInt(p - 1) * (q - 1));
        GroupElement c = GroupElement(m, n).pow(e);
        GroupElement recovered = order_oracle_attack(c, e, phi_fact);
        rows.push_back(RsaAttackRow{n, e, m, c.value(), recovered.value(),
                                    recovered.value() == m, 1});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// semantic distinguisher against hidden-multiplier ciphertexts
// ---------------------------------------------------------------------------

enum class Distinguished { First, Second, Inconclusive };

inline const char* distinguished_name(Distinguished d) {
    switch (d) {
        case Distinguished::First: return "first";
        case Distinguished::Second: return "second";
        default: return "inconclusive";
    }
}

/**
 * Decide which of two candidate plaintexts a hidden-multiplier ciphertext
 * c = h*f carries by comparing prime-divisor sets of element orders.
 *
 * Let P = primes(|m_1|) union primes(|m_2|). A candidate m_i passes when
 * primes(|c^-1 * m_i|) is disjoint from P. The true candidate's residual is
 * h^-1, whose order divides exp(H) and so avoids P entirely; the false
 * candidate's residual keeps the factor m_i * m_true^-1 of nontrivial
 * order dividing lcm(|m_1|, |m_2|), which contributes a prime from P.
 * (Testing against the joint set P rather than each candidate's own primes
 * keeps the rule sound when a candidate is the identity, whose empty prime
 * set would otherwise pass vacuously.)
 *
 * Returns Inconclusive when both or neither candidate passes; m_1 = m_2 is
 * the canonical both-pass case.
 */
inline Distinguished semantic_distinguisher(const GroupElement& c, const GroupElement& m_1,
                                            const GroupElement& m_2,
                                            const OrderOracle& oracle) {
    auto order_primes = [&](const GroupElement& g) {
        std::set<BigInt> ps;
        Factorization fact = factor_integer(oracle.order_of(g));
        for (const auto& pp : fact.prime_powers()) ps.insert(pp.first);
        return ps;
    };
    std::set<BigInt> candidate_primes = order_primes(m_1);
    for (const BigInt& p : order_primes(m_2)) candidate_primes.insert(p);

    auto passes = [&](const GroupElement& mi) {
        std::set<BigInt> residual = order_primes(c.inverse() * mi);
        for (const BigInt& p : residual)
            if (candidate_primes.count(p)) return false;
        return true;
    };
    bool first = passes(m_1), second = passes(m_2);
    if (first == second) return Distinguished::Inconclusive;
    return first ? Distinguished::First : Distinguished::Second;
}

struct DistinguishRow {
    std::uint64_t trial;
    unsigned true_index; // 1 or 2
    std::string verdict; // first | second | inconclusive
    bool success;
    std::uint64_t oracle_calls;
};

/**
 * Seeded sweep on a desk V2 platform: encrypt one of two fixed messages for
 * the full coalition, then ask the distinguisher which. With the oracle the
 * success rate is 1.0 at desk scale.
 */
inline std::vector<DistinguishRow> run_distinguisher_sweep(const DealerSecret& dealer,
                                                           const BigInt& msg_a,
                                                           const BigInt& msg_b,
                                                           std::size_t trials, Rng& rng) {
    if (dealer.variant != Variant::V2)
        throw WrongVariant("run_distinguisher_sweep: needs a V2 dealer");
    std::vector<PartyId> coalition;
    for (const auto& [id, idx] : dealer.assignment) {
        (void)idx;
        coalition.push_back(id);
    }
    GroupElement f_a = encode_message(msg_a, dealer.msg_subgroup);
    GroupElement f_b = encode_message(msg_b, dealer.msg_subgroup);
    std::vector<DistinguishRow> rows;
    rows.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        OrderOracle oracle = brute_force_oracle();
        bool pick_a = (rng.next_u64() & 1) == 0;
        Ciphertext ct = v2_encrypt(dealer, pick_a ? f_a : f_b, coalition, rng);
        Distinguished verdict = semantic_distinguisher(ct.value, f_a, f_b, oracle);
        bool success = verdict == (pick_a ? Distinguished::First : Distinguished::Second);
        rows.push_back(DistinguishRow{i, pick_a ? 1u : 2u, distinguished_name(verdict),
                                      success, oracle.calls()});
    }
    return rows;
}

} // namespace hmenc
