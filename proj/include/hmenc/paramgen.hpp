#pragma once

/**
 * @file paramgen.hpp
 * @brief Certified prime construction and group platforms with subgroups of
 *        prescribed pairwise-coprime orders.
 *
 * Two prime-generation routes are provided. The certificate route grows a
 * chain of provable primes q_1 < q_2 < ... where each b = 1 + r*q is proved
 * prime by a base a with a^(b-1) == 1 (mod b), gcd(a^r - 1, b) = 1 and
 * r <= 4q+2. The test route searches p = 1 + M*r' with Miller-Rabin, keeping
 * r' fully factored so the dealer knows the complete factorization of p-1.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmenc/bigint.hpp"
#include "hmenc/errors.hpp"
#include "hmenc/numtheory.hpp"

namespace hmenc {

// ---------------------------------------------------------------------------
// Pocklington-style certificates
// ---------------------------------------------------------------------------

/// One certificate link: the claim that b = 1 + r*q is prime, witnessed by
/// base a. Validity of the claim is decided by prop1_certify.
struct Prop1Instance {
    BigInt b; // odd integer >= 3, equal to 1 + r*q
    BigInt q; // odd prime
    BigInt r; // even positive integer
    BigInt a; // base in (1, b-1)

    static Prop1Instance checked(BigInt b, BigInt q, BigInt r, BigInt a) {
        if (q < 3 || q % 2 == 0 || !is_probable_prime(q))
            throw BadInput("Prop1Instance: q = " + q.str() + " is not an odd prime");
        if (r < 2 || r % 2 != 0) throw BadInput("Prop1Instance: r must be even and positive");
        if (b != 1 + r * q) throw BadInput("Prop1Instance: b != 1 + r*q");
        if (a <= 1 || a >= b - 1) throw BadInput("Prop1Instance: base out of (1, b-1)");
        return Prop1Instance{std::move(b), std::move(q), std::move(r), std::move(a)};
    }
};

enum class Prop1Result {
    Certified,     // both conditions hold and r <= 4q+2: b is PROVED prime
    BaseFails,     // an arithmetic condition fails; says nothing about b
    NotApplicable, // r > 4q+2: conditions only constrain prime divisors of b
};

/**
 * Evaluate the certificate. Certified is a proof of primality; with
 * r > 4q+2 the two congruence conditions still force every prime divisor
 * of b to be 1 (mod 2q), but no longer primality, hence NotApplicable.
 */
inline Prop1Result prop1_certify(const Prop1Instance& inst) {
    if (inst.r > 4 * inst.q + 2) return Prop1Result::NotApplicable;
    if (mod_pow(inst.a, inst.b - 1, inst.b) != 1) return Prop1Result::BaseFails;
    BigInt ar = mod_pow(inst.a, inst.r, inst.b);
    BigInt g = gcd((ar - 1 + inst.b) % inst.b, inst.b);
    if (g != 1) return Prop1Result::BaseFails;
    return Prop1Result::Certified;
}

// ---------------------------------------------------------------------------
// recursive prime chains
// ---------------------------------------------------------------------------

struct ChainOptions {
    unsigned max_r_per_link = 64; // even r values sampled per link before giving up
};

namespace detail {

/// Sample an even r in [q+1, 4q+2] uniformly (q odd, so both ends are even).
inline BigInt sample_link_r(const BigInt& q, Rng& rng) {
    BigInt slots = (3 * q + 1) / 2 + 1;
    return q + 1 + 2 * rng.below(slots);
}

/// Try to certify b = 1 + r*q by random bases; budget follows the (q-1)/q
/// success rate for prime b. Returns the certified instance or nothing.
inline std::optional<Prop1Instance> certify_by_sampling(const BigInt& q, const BigInt& r,
                                                        Rng& rng) {
    BigInt b = 1 + r * q;
    if (!is_probable_prime(b)) return std::nullopt; // prescreen composite candidates
    // q is prime and r is in range by construction here, so the instance is
    // assembled directly; Prop1Instance::checked is for untrusted input.
    for (BigInt tries = 0, budget = 4 * q; tries < budget; ++tries) {
        Prop1Instance inst{b, q, r, rng.in_range(2, b - 2)};
        if (prop1_certify(inst) == Prop1Result::Certified) return inst;
    }
    return std::nullopt;
}

} // namespace detail

/**
 * Grow a chain of certified primes q_1 = q_seed, q_{i+1} = 1 + r_i*q_i until
 * the head exceeds target_bits. Every link is proved by prop1_certify and,
 * because r >= q+1, grows quadratically: q_{i+1} > q_i^2. Returns one
 * certificate per link (empty when q_seed already reaches target_bits).
 */
inline std::vector<Prop1Instance> prime_chain(const BigInt& q_seed, unsigned target_bits,
                                              Rng& rng, const ChainOptions& opts = {}) {
    if (q_seed < 3 || q_seed % 2 == 0 || !is_probable_prime(q_seed))
        throw BadInput("prime_chain: seed " + q_seed.str() + " is not an odd prime");
    std::vector<Prop1Instance> chain;
    BigInt q = q_seed;
    while (bit_length(q) < target_bits) {
        bool advanced = false;
        for (unsigned i = 0; i < opts.max_r_per_link && !advanced; ++i) {
            BigInt r = detail::sample_link_r(q, rng);
            if (auto inst = detail::certify_by_sampling(q, r, rng)) {
                q = inst->b;
                chain.push_back(std::move(*inst));
                advanced = true;
            }
        }
        if (!advanced)
            throw SearchExhausted("prime_chain: no certified link found above q = " + q.str());
    }
    return chain;
}

/// Retry a randomized search body with independently derived rngs. The body
/// receives a fresh Rng per attempt; SearchExhausted triggers the next
/// attempt until the budget runs out. Deterministic for a fixed base rng.
template <class Body>
auto with_restarts(Rng& rng, unsigned max_restarts, Body&& body) {
    for (unsigned attempt = 0;; ++attempt) {
        Rng sub = rng.derive(0x72657374ull + attempt); // distinct stream per attempt
        try {
            return body(sub);
        } catch (const SearchExhausted&) {
            if (attempt + 1 >= max_restarts) throw;
        }
    }
}

// ---------------------------------------------------------------------------
// prescribed-divisor primes (test route)
// ---------------------------------------------------------------------------

struct PrimeWithDivisor {
    BigInt p;                 // probable prime with M | p-1
    BigInt r_prime;           // cofactor: p = 1 + M * r_prime
    Factorization p_minus_1;  // complete factorization of p-1
};

namespace detail {

/// Factor n as (primes < 1000)^e * (optional single probable prime). Returns
/// nothing when the rough cofactor is composite; such candidates are
/// rejected because the dealer must know p-1 completely.
inline std::optional<Factorization> smooth_plus_prime_factor(const BigInt& n) {
    auto [parts, cofactor] = trial_factor(n, 1000);
    if (cofactor > 1) {
        if (!is_probable_prime(cofactor)) return std::nullopt;
        parts.emplace_back(cofactor, 1u);
    }
    return Factorization::checked(n, std::move(parts));
}

inline bool passes_trial_division(const BigInt& n, const std::vector<std::uint32_t>& primes) {
    for (std::uint32_t p : primes) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    return true;
}

} // namespace detail

/**
 * Find p = 1 + M*r' probable prime (64 Miller-Rabin rounds) together with
 * the complete factorization of p-1. M is passed with its factorization
 * because that knowledge is the whole point of the construction.
 *
 * r' is kept coprime to M (so no subgroup-order prime gains an extra power)
 * and M*r' must be even; beyond that, r' must factor over primes < 1000
 * times at most one probable prime, otherwise the candidate is rejected.
 *
 * r_prime_bits = 0 scans r' = 1, 2, 3, ... deterministically and returns the
 * smallest admissible prime (desk platforms); r_prime_bits >= 1 samples r'
 * uniformly at that bit size (large platforms).
 */
inline PrimeWithDivisor find_prime_with_divisor(const Factorization& M_fact,
                                                unsigned r_prime_bits, Rng& rng,
                                                std::uint64_t attempt_budget = 200'000) {
    const BigInt& M = M_fact.value();
    if (M < 2) throw BadInput("find_prime_with_divisor: M must be >= 2");
    static const auto screen_primes = primes_below(10'000);
    const bool m_even = (M % 2 == 0);

    auto try_candidate = [&](const BigInt& rp) -> std::optional<PrimeWithDivisor> {
        if (!m_even && rp % 2 != 0) return std::nullopt;
        if (gcd(rp, M) != 1) return std::nullopt;
        BigInt p = 1 + M * rp;
        if (!detail::passes_trial_division(p, screen_primes)) return std::nullopt;
        std::optional<Factorization> rp_fact =
            rp == 1 ? std::make_optional(Factorization())
                    : detail::smooth_plus_prime_factor(rp);
        if (!rp_fact) return std::nullopt;
        if (!is_probable_prime(p)) return std::nullopt;
        return PrimeWithDivisor{p, rp, Factorization::merge(M_fact, *rp_fact)};
    };

    if (r_prime_bits == 0) {
        for (std::uint64_t i = 1; i <= attempt_budget; ++i)
            if (auto hit = try_candidate(BigInt(i))) return *hit;
        throw SearchExhausted("find_prime_with_divisor: ascending scan exhausted for M = " +
                              M.str());
    }
    BigInt lo = r_prime_bits == 1 ? 1 : BigInt(1) << (r_prime_bits - 1);
    BigInt hi = (BigInt(1) << r_prime_bits) - 1;
    for (std::uint64_t i = 0; i < attempt_budget; ++i)
        if (auto hit = try_candidate(rng.in_range(lo, hi))) return *hit;
    throw SearchExhausted("find_prime_with_divisor: budget exhausted for M = " + M.str() +
                          " at r' bits = " + std::to_string(r_prime_bits));
}

// ---------------------------------------------------------------------------
// platforms
// ---------------------------------------------------------------------------

/// A generator of prescribed exact order together with that order's
/// factorization. Exactness is checked on construction: gen^order = 1 and
/// gen^(order/l) != 1 for every prime l | order.
struct SubgroupSpec {
    GroupElement generator;
    BigInt order;
    Factorization order_fact;

    static SubgroupSpec checked(GroupElement gen, Factorization fact) {
        const BigInt& ord = fact.value();
        if (ord < 1) throw BadInput("SubgroupSpec: order must be >= 1");
        if (!gen.pow(ord).is_identity())
            throw BadGroupOrder("SubgroupSpec: generator^order != 1");
        for (const auto& [l, e] : fact.prime_powers()) {
            (void)e;
            if (gen.pow(ord / l).is_identity())
                throw BadGroupOrder("SubgroupSpec: order not exact, slack at prime " + l.str());
        }
        BigInt ord_copy = ord;
        return SubgroupSpec{std::move(gen), std::move(ord_copy), std::move(fact)};
    }
};

/// Prime-field platform F_p. The factorization of p-1 and the generator are
/// dealer secrets; p itself is public. certificate_chain is nonempty when p
/// came out of the provable route.
struct FieldPlatform {
    BigInt p;
    BigInt group_order; // p - 1
    Factorization order_factorization;
    GroupElement generator_g;
    std::vector<Prop1Instance> certificate_chain;
};

/**
 * Random generator of F_p^*: g passes iff g^((p-1)/l) != 1 for every prime
 * l | p-1. Expected O((p-1)/phi(p-1)) samples, a small constant in practice.
 */
inline GroupElement find_generator(const BigInt& p, const Factorization& order_fact, Rng& rng) {
    if (order_fact.value() != p - 1)
        throw BadInput("find_generator: factorization does not match p-1");
    if (p == 3) return GroupElement(2, 3);
    for (;;) {
        BigInt cand = rng.in_range(2, p - 2);
        bool ok = true;
        for (const auto& [l, e] : order_fact.prime_powers()) {
            (void)e;
            if (mod_pow(cand, (p - 1) / l, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return GroupElement(cand, p);
    }
}

struct FieldSetup {
    FieldPlatform platform;
    std::vector<SubgroupSpec> subgroups; // generator u_j of exact order t_j
    SubgroupSpec msg_subgroup;           // f_0 of exact order d
};

namespace detail {

inline void require_pairwise_coprime(const std::vector<BigInt>& vals, const char* what) {
    for (size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] < 2) throw BadInput(std::string(what) + ": orders must be >= 2");
        for (size_t j = i + 1; j < vals.size(); ++j)
            if (gcd(vals[i], vals[j]) != 1)
                throw BadInput(std::string(what) + ": " + vals[i].str() + " and " +
                               vals[j].str() + " share a factor");
    }
}

/// d * prod(orders) with each part factored (orders are dealer-picked, so
/// the bounded factoring route is appropriate).
inline Factorization factored_product(const std::vector<BigInt>& orders, const BigInt& d) {
    Factorization acc = factor_integer(d);
    for (const BigInt& t : orders) acc = Factorization::merge(acc, factor_integer(t));
    return acc;
}

/**
 * Final certified link on top of a chain head q: find b = 1 + (M*j)*q with
 * M*j even, j coprime to M and fully factored, b certified by a sampled
 * base. Gives a provable prime with M | b-1 and known factorization of b-1.
 */
inline std::pair<Prop1Instance, Factorization>
certified_link_with_divisor(const BigInt& q, const Factorization& M_fact, Rng& rng,
                            unsigned max_j_attempts = 4096) {
    const BigInt& M = M_fact.value();
    BigInt j_lo = (q + 1 + M - 1) / M;     // ceil((q+1)/M)
    BigInt j_hi = (4 * q + 2) / M;         // floor((4q+2)/M)
    if (j_lo > j_hi)
        throw SearchExhausted("certified_link_with_divisor: no multiple of M in the r range");
    const bool m_even = (M % 2 == 0);
    for (unsigned i = 0; i < max_j_attempts; ++i) {
        BigInt j = rng.in_range(j_lo, j_hi);
        if (!m_even && j % 2 != 0) continue;
        if (gcd(j, M) != 1) continue;
        auto j_fact = j == 1 ? std::make_optional(Factorization())
                             : smooth_plus_prime_factor(j);
        if (!j_fact) continue;
        BigInt r = M * j;
        if (auto inst = certify_by_sampling(q, r, rng)) {
            Factorization fact_b_minus_1 = Factorization::merge(
                Factorization::merge(M_fact, *j_fact),
                Factorization::checked(q, {{q, 1u}}));
            return {std::move(*inst), std::move(fact_b_minus_1)};
        }
    }
    throw SearchExhausted("certified_link_with_divisor: no certified b = 1 + M*j*q found");
}

} // namespace detail

/**
 * Build F_p with subgroups of exact orders t_1..t_k and message subgroup of
 * exact order d. Orders must be pairwise coprime and coprime to d. The
 * subgroup generators come from the formula u_j = g^((p-1)/t_j), which has
 * exact order t_j because g generates the full group.
 *
 * certified = false searches p = 1 + M*r' by Miller-Rabin; certified = true
 * grows a provable chain from 3 and closes it with a link whose r is a
 * multiple of M, so the platform carries a re-verifiable certificate chain.
 */
inline FieldSetup build_field_platform(const std::vector<BigInt>& orders, const BigInt& d,
                                       unsigned target_bits, Rng& rng, bool certified = false) {
    if (d < 2) throw BadInput("build_field_platform: message order d must be >= 2");
    std::vector<BigInt> all = orders;
    all.push_back(d);
    detail::require_pairwise_coprime(all, "build_field_platform");

    Factorization M_fact = detail::factored_product(orders, d);
    const BigInt& M = M_fact.value();

    FieldPlatform pf = [&] {
        if (certified) {
            unsigned q_bits = std::max({(target_bits + 3) / 2, bit_length(M) + 3, 5u});
            auto chain = prime_chain(BigInt(3), q_bits, rng);
            BigInt q_head = chain.empty() ? BigInt(3) : chain.back().b;
            auto [link, fact] = detail::certified_link_with_divisor(q_head, M_fact, rng);
            BigInt p = link.b;
            chain.push_back(std::move(link));
            GroupElement g = find_generator(p, fact, rng);
            return FieldPlatform{p, p - 1, std::move(fact), std::move(g), std::move(chain)};
        }
        unsigned rp_bits = target_bits > bit_length(M) + 1 ? target_bits - bit_length(M) : 0;
        auto found = find_prime_with_divisor(M_fact, rp_bits, rng);
        GroupElement g = find_generator(found.p, found.p_minus_1, rng);
        return FieldPlatform{found.p, found.p - 1, std::move(found.p_minus_1), std::move(g),
                             {}};
    }();

    auto make_spec = [&](const BigInt& order) {
        GroupElement gen = pf.generator_g.pow(pf.group_order / order);
        return SubgroupSpec::checked(std::move(gen), factor_integer(order));
    };
    std::vector<SubgroupSpec> subgroups;
    subgroups.reserve(orders.size());
    for (const BigInt& t : orders) subgroups.push_back(make_spec(t));
    SubgroupSpec msg = make_spec(d);
    return FieldSetup{std::move(pf), std::move(subgroups), std::move(msg)};
}

/// Residue-ring platform Z_n, n = p*q_ring. Everything except n is dealer
/// secret. Component generators are kept for subgroup construction.
struct RingPlatform {
    BigInt n;
    BigInt p;
    BigInt q_ring;
    Factorization fact_p; // of p-1
    Factorization fact_q; // of q_ring-1
    GroupElement gen_p;   // generator of F_p^*
    GroupElement gen_q;   // generator of F_q_ring^*
    std::vector<Prop1Instance> chain_p;
    std::vector<Prop1Instance> chain_q;
};

struct RingSetup {
    RingPlatform platform;
    std::vector<SubgroupSpec> subgroups; // w_i of exact order t_i * s_i in Z_n^*
    SubgroupSpec msg_subgroup;           // order d_p * d_q
};

/**
 * Build Z_n = Z_{p*q_ring} with subgroups of exact composite orders
 * t_i * s_i: u_i of order t_i lives mod p, v_i of order s_i mod q_ring, and
 * w_i = crt(u_i, v_i) has order t_i*s_i in Z_n^* because the orders are
 * coprime. The message generator is the same CRT product for (d_p, d_q).
 *
 * Degenerate component orders of 1 are allowed (the element is 1 on that
 * side); all composite orders r_i = t_i*s_i and d = d_p*d_q must be >= 2 and
 * pairwise coprime.
 */
inline RingSetup build_ring_platform(const std::vector<std::pair<BigInt, BigInt>>& order_pairs,
                                     const std::pair<BigInt, BigInt>& d_pair,
                                     unsigned target_bits, Rng& rng, bool certified = false) {
    if (order_pairs.empty()) throw BadInput("build_ring_platform: need at least one order pair");
    std::vector<BigInt> composite;
    for (const auto& [t, s] : order_pairs) {
        if (t < 1 || s < 1) throw BadInput("build_ring_platform: component orders must be >= 1");
        if (gcd(t, s) != 1)
            throw BadInput("build_ring_platform: pair (" + t.str() + ", " + s.str() +
                           ") is not coprime, |w| would fall short of t*s");
        composite.push_back(t * s);
    }
    if (gcd(d_pair.first, d_pair.second) != 1)
        throw BadInput("build_ring_platform: d_p and d_q must be coprime");
    BigInt d = d_pair.first * d_pair.second;
    if (d < 2) throw BadInput("build_ring_platform: message order d_p*d_q must be >= 2");
    composite.push_back(d);
    detail::require_pairwise_coprime(composite, "build_ring_platform");

    // p side carries the t_i and d_p, q side the s_i and d_q; drop the
    // degenerate 1 components.
    std::vector<BigInt> p_orders, q_orders;
    for (const auto& [t, s] : order_pairs) {
        if (t > 1) p_orders.push_back(t);
        if (s > 1) q_orders.push_back(s);
    }
    auto side = [&](const std::vector<BigInt>& ords, const BigInt& dd, unsigned bits,
                    std::uint64_t salt) {
        Rng sub = rng.derive(salt);
        BigInt d_eff = dd;
        if (d_eff == 1) {
            // this side carries no message component; pick a small filler
            // prime coprime to the side's orders so M stays >= 2
            for (std::uint32_t cand : detail::small_primes_100()) {
                d_eff = cand;
                bool ok = true;
                for (const BigInt& t : ords) ok = ok && gcd(BigInt(cand), t) == 1;
                if (ok) break;
            }
        }
        return build_field_platform(ords, d_eff, bits, sub, certified);
    };
    unsigned half_bits = target_bits / 2;
    FieldSetup left = side(p_orders, d_pair.first, half_bits, 0x70726d70ull);
    FieldSetup right = side(q_orders, d_pair.second, half_bits, 0x70726d71ull);
    if (left.platform.p == right.platform.p)
        throw SearchExhausted("build_ring_platform: both primes collided, retry with new seed");

    const BigInt& p = left.platform.p;
    const BigInt& q_ring = right.platform.p;
    BigInt n = p * q_ring;

    // CRT a pair of component subgroup elements into Z_n^*.
    auto lift = [&](const BigInt& up, const BigInt& vq, const BigInt& t, const BigInt& s) {
        BigInt w = crt_combine({{up, p}, {vq, q_ring}});
        return SubgroupSpec::checked(GroupElement(w, n), factor_integer(t * s));
    };
    auto component = [&](const FieldSetup& fs, const std::vector<BigInt>& ords, const BigInt& t)
        -> BigInt {
        if (t == 1) return 1;
        for (size_t k = 0; k < ords.size(); ++k)
            if (ords[k] == t) return fs.subgroups[k].generator.value();
        throw BadInput("build_ring_platform: internal order lookup failed for " + t.str());
    };

    std::vector<SubgroupSpec> subgroups;
    subgroups.reserve(order_pairs.size());
    for (const auto& [t, s] : order_pairs)
        subgroups.push_back(lift(component(left, p_orders, t), component(right, q_orders, s),
                                 t, s));

    BigInt f_p = d_pair.first > 1 ? left.msg_subgroup.generator.value() : BigInt(1);
    BigInt f_q = d_pair.second > 1 ? right.msg_subgroup.generator.value() : BigInt(1);
    SubgroupSpec msg = lift(f_p, f_q, d_pair.first, d_pair.second);

    RingPlatform rp{n,
                    p,
                    q_ring,
                    left.platform.order_factorization,
                    right.platform.order_factorization,
                    left.platform.generator_g,
                    right.platform.generator_g,
                    std::move(left.platform.certificate_chain),
                    std::move(right.platform.certificate_chain)};
    return RingSetup{std::move(rp), std::move(subgroups), std::move(msg)};
}

} // namespace hmenc
