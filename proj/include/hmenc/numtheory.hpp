#pragma once

/**
 * @file numtheory.hpp
 * @brief Modular arithmetic over arbitrary-precision integers: group
 *        elements, factorizations, CRT, Miller-Rabin, and element-order
 *        computation (brute force and factored-order).
 *
 * Everything here is a pure function over immutable values; randomized
 * routines take an explicit Rng. No fixed-width fast paths: platform sizes
 * exceed 64 bits and correctness comes first.
 */

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "hmenc/bigint.hpp"
#include "hmenc/errors.hpp"

namespace hmenc {

// ---------------------------------------------------------------------------
// gcd / inverse / CRT
// ---------------------------------------------------------------------------

struct EgcdResult {
    BigInt g, x, y; // a*x + b*y == g
};

inline EgcdResult egcd(BigInt a, BigInt b) {
    BigInt x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        BigInt q = a / b;
        BigInt t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    return {a, x0, y0};
}

/// x in [1, m-1] with a*x == 1 (mod m). By convention mod_inverse(a, 1) == 0,
/// the unique residue mod 1; the RSA-order attack relies on that degenerate
/// case. Throws NotInvertible when gcd(a, m) > 1.
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    if (m <= 0) throw BadInput("mod_inverse: modulus must be positive");
    if (m == 1) return 0;
    BigInt r = a % m;
    if (r < 0) r += m;
    auto [g, x, y] = egcd(r, m);
    if (g != 1) throw NotInvertible("mod_inverse: gcd(" + a.str() + ", " + m.str() + ") > 1");
    x %= m;
    if (x < 0) x += m;
    return x;
}

/// base^exp mod m for exp >= 0 (raw-integer form).
inline BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& m) {
    if (m <= 0) throw BadInput("mod_pow: modulus must be positive");
    if (exp < 0) throw BadInput("mod_pow: negative exponent");
    if (m == 1) return 0;
    BigInt b = base % m;
    if (b < 0) b += m;
    return boost::multiprecision::powm(b, exp, m);
}

/// Unique x mod prod(m_i) with x == r_i (mod m_i). Moduli must be pairwise
/// coprime; residues need not be reduced.
inline BigInt crt_combine(const std::vector<std::pair<BigInt, BigInt>>& congruences) {
    if (congruences.empty()) throw BadInput("crt_combine: no congruences");
    BigInt x = congruences[0].first;
    BigInt m = congruences[0].second;
    if (m <= 0) throw BadInput("crt_combine: modulus must be positive");
    x %= m;
    if (x < 0) x += m;
    for (size_t i = 1; i < congruences.size(); ++i) {
        const BigInt& mi = congruences[i].second;
        if (mi <= 0) throw BadInput("crt_combine: modulus must be positive");
        BigInt ri = congruences[i].first % mi;
        if (ri < 0) ri += mi;
        if (gcd(m, mi) != 1)
            throw ModuliNotCoprime("crt_combine: moduli " + m.str() + " and " + mi.str() +
                                   " share a factor");
        // x' = x + m * ((ri - x) * m^-1 mod mi)
        BigInt t = ((ri - x) % mi) * mod_inverse(m % mi, mi) % mi;
        if (t < 0) t += mi;
        x += m * t;
        m *= mi;
    }
    return x;
}

// ---------------------------------------------------------------------------
// primality
// ---------------------------------------------------------------------------

enum class Primality { Composite, ProbablePrime };

namespace detail {

inline const std::vector<std::uint32_t>& small_primes_100() {
    static const std::vector<std::uint32_t> ps = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                  43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    return ps;
}

/// One Miller-Rabin witness round; n odd >= 5, 2 <= a <= n-2.
inline bool mr_witness_passes(const BigInt& n, const BigInt& a, const BigInt& d, unsigned s) {
    BigInt x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/**
 * Miller-Rabin test. Composite is definitive; ProbablePrime errs with
 * probability <= 4^-rounds. Below 3.3e14 the fixed witness set
 * {2,3,5,7,11,13,17} is known to be exact, so the answer is deterministic
 * there and the rng is not consulted.
 */
inline Primality miller_rabin(const BigInt& n, unsigned rounds, Rng& rng) {
    if (n < 2) return Primality::Composite;
    for (std::uint32_t p : detail::small_primes_100()) {
        if (n == p) return Primality::ProbablePrime;
        if (n % p == 0) return Primality::Composite;
    }
    // n odd, > 97 here.
    BigInt d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    static const BigInt deterministic_limit = BigInt("330000000000000");
    if (n < deterministic_limit) {
        for (std::uint32_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u})
            if (!detail::mr_witness_passes(n, a, d, s)) return Primality::Composite;
        return Primality::ProbablePrime;
    }
    for (unsigned i = 0; i < rounds; ++i) {
        BigInt a = rng.in_range(2, n - 2);
        if (!detail::mr_witness_passes(n, a, d, s)) return Primality::Composite;
    }
    return Primality::ProbablePrime;
}

/// Deterministic convenience wrapper: witnesses are drawn from an rng seeded
/// by n itself, so repeated calls agree. 64 rounds.
inline bool is_probable_prime(const BigInt& n) {
    Rng rng(static_cast<std::uint64_t>(n & 0xffffffffffffffffull) ^ 0xa5a5a5a55a5a5a5aull);
    return miller_rabin(n, 64, rng) == Primality::ProbablePrime;
}

/// Odd primes below limit via Eratosthenes (plus 2).
inline std::vector<std::uint32_t> primes_below(std::uint32_t limit) {
    std::vector<bool> comp(limit, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < limit; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j < limit; j += i)
            comp[static_cast<size_t>(j)] = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// factorizations
// ---------------------------------------------------------------------------

/**
 * A verified prime-power decomposition. Construction checks that primes are
 * strictly increasing, each passes a primality test, exponents are >= 1 and
 * the implied product equals the stated value. Factorization of 1 is the
 * empty list.
 */
class Factorization {
public:
    using PrimePower = std::pair<BigInt, unsigned>;

    Factorization() : value_(1) {}

    static Factorization checked(const BigInt& value, std::vector<PrimePower> parts) {
        Factorization f;
        f.parts_ = std::move(parts);
        BigInt prod = 1;
        const BigInt* prev = nullptr;
        for (const auto& [p, e] : f.parts_) {
            if (e < 1) throw BadInput("Factorization: exponent must be >= 1");
            if (prev && *prev >= p) throw BadInput("Factorization: primes must strictly increase");
            if (!is_probable_prime(p))
                throw BadInput("Factorization: " + p.str() + " is not prime");
            for (unsigned i = 0; i < e; ++i) prod *= p;
            prev = &p;
        }
        if (prod != value)
            throw BadInput("Factorization: product " + prod.str() + " != value " + value.str());
        f.value_ = value;
        return f;
    }

    const BigInt& value() const { return value_; }
    const std::vector<PrimePower>& prime_powers() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    std::vector<BigInt> primes() const {
        std::vector<BigInt> ps;
        ps.reserve(parts_.size());
        for (const auto& pp : parts_) ps.push_back(pp.first);
        return ps;
    }

    /// Product of two known factorizations (exponents of shared primes add).
    static Factorization merge(const Factorization& a, const Factorization& b) {
        std::vector<PrimePower> parts;
        size_t i = 0, j = 0;
        while (i < a.parts_.size() || j < b.parts_.size()) {
            if (j == b.parts_.size() ||
                (i < a.parts_.size() && a.parts_[i].first < b.parts_[j].first)) {
                parts.push_back(a.parts_[i++]);
            } else if (i == a.parts_.size() || b.parts_[j].first < a.parts_[i].first) {
                parts.push_back(b.parts_[j++]);
            } else {
                parts.emplace_back(a.parts_[i].first, a.parts_[i].second + b.parts_[j].second);
                ++i;
                ++j;
            }
        }
        Factorization f;
        f.parts_ = std::move(parts);
        f.value_ = a.value_ * b.value_;
        return f;
    }

private:
    std::vector<PrimePower> parts_;
    BigInt value_;
};

namespace detail {

/// Strip every factor < bound out of n; returns (prime, exponent) list plus
/// the unfactored cofactor.
inline std::pair<std::vector<Factorization::PrimePower>, BigInt>
trial_factor(BigInt n, std::uint32_t bound) {
    std::vector<Factorization::PrimePower> parts;
    for (std::uint32_t p = 2; p < bound && BigInt(p) * p <= n; p = (p == 2 ? 3 : p + 2)) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        parts.emplace_back(BigInt(p), e);
    }
    if (n > 1 && n < BigInt(bound) * bound) {
        // remaining cofactor below bound^2 is prime by construction
        parts.emplace_back(n, 1u);
        n = 1;
    }
    return {std::move(parts), n};
}

/// Brent's cycle variant of Pollard rho; returns a nontrivial factor of odd
/// composite n, or 0 when the iteration budget runs out.
inline BigInt brent_rho(const BigInt& n, std::uint64_t budget, Rng& rng) {
    if (n % 2 == 0) return 2;
    for (int attempt = 0; attempt < 64; ++attempt) {
        BigInt y = rng.in_range(1, n - 1);
        BigInt c = rng.in_range(1, n - 1);
        BigInt m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        std::uint64_t used = 0;
        while (g == 1 && used < budget) {
            x = y;
            for (BigInt i = 0; i < r; ++i) y = (y * y + c) % n;
            BigInt k = 0;
            while (k < r && g == 1) {
                ys = y;
                BigInt rk = r - k;
                const BigInt& lim = m < rk ? m : rk;
                for (BigInt i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    BigInt diff = x > y ? x - y : y - x;
                    q = q * diff % n;
                    ++used;
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            do {
                ys = (ys * ys + c) % n;
                BigInt diff = x > ys ? x - ys : ys - x;
                g = gcd(diff, n);
            } while (g == 1);
        }
        if (g != n && g != 1) return g;
        if (used >= budget) return 0;
    }
    return 0;
}

} // namespace detail

/**
 * Complete factorization of a dealer-scale integer: trial division, then
 * Brent rho on what is left. Intended for message-space orders and search
 * cofactors, not adversarial inputs; throws FactorizationFailed when the
 * rho budget is exhausted.
 */
inline Factorization factor_integer(const BigInt& n, std::uint64_t rho_budget = 4'000'000) {
    if (n < 1) throw BadInput("factor_integer: input must be >= 1");
    if (n == 1) return Factorization();
    auto [parts, cofactor] = detail::trial_factor(n, 100'000);
    std::vector<BigInt> pending;
    if (cofactor > 1) pending.push_back(cofactor);
    Rng rng(static_cast<std::uint64_t>(n & 0xffffffffffffffffull) ^ 0xfeedfacecafebeefull);
    while (!pending.empty()) {
        BigInt m = pending.back();
        pending.pop_back();
        if (is_probable_prime(m)) {
            parts.emplace_back(m, 1u);
            continue;
        }
        BigInt d = detail::brent_rho(m, rho_budget, rng);
        if (d == 0)
            throw FactorizationFailed("factor_integer: rho budget exhausted on " + m.str());
        pending.push_back(d);
        pending.push_back(m / d);
    }
    // collapse duplicates produced by the rho splits
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Factorization::PrimePower> merged;
    for (auto& pp : parts) {
        if (!merged.empty() && merged.back().first == pp.first)
            merged.back().second += pp.second;
        else
            merged.push_back(pp);
    }
    return Factorization::checked(n, std::move(merged));
}

// ---------------------------------------------------------------------------
// group elements
// ---------------------------------------------------------------------------

/**
 * A unit of Z_m^*: value in [1, m-1] coprime to m, reduced on construction.
 */
class GroupElement {
public:
    GroupElement(BigInt value, BigInt modulus) : modulus_(std::move(modulus)) {
        if (modulus_ < 3) throw BadInput("GroupElement: modulus must be >= 3");
        value_ = value % modulus_;
        if (value_ < 0) value_ += modulus_;
        if (value_ == 0 || gcd(value_, modulus_) != 1)
            throw BadInput("GroupElement: " + value.str() + " is not a unit mod " +
                           modulus_.str());
    }

    static GroupElement identity(const BigInt& modulus) { return GroupElement(1, modulus); }

    const BigInt& value() const { return value_; }
    const BigInt& modulus() const { return modulus_; }
    bool is_identity() const { return value_ == 1; }

    GroupElement operator*(const GroupElement& o) const {
        require_same_group(o);
        GroupElement r(*this);
        r.value_ = value_ * o.value_ % modulus_;
        return r;
    }

    GroupElement pow(const BigInt& exp) const {
        GroupElement r(*this);
        r.value_ = mod_pow(value_, exp, modulus_);
        return r;
    }

    GroupElement inverse() const {
        GroupElement r(*this);
        r.value_ = mod_inverse(value_, modulus_);
        return r;
    }

    bool operator==(const GroupElement& o) const {
        return value_ == o.value_ && modulus_ == o.modulus_;
    }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }

private:
    void require_same_group(const GroupElement& o) const {
        if (modulus_ != o.modulus_)
            throw BadInput("GroupElement: mixed moduli " + modulus_.str() + " and " +
                           o.modulus_.str());
    }

    BigInt value_;
    BigInt modulus_;
};

/// base^exp for exp >= 0; exp == 0 gives the identity.
inline GroupElement mod_pow(const GroupElement& base, const BigInt& exp) {
    return base.pow(exp);
}

// ---------------------------------------------------------------------------
// element orders
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kBruteOrderModulusBound = 1ull << 24;

/**
 * Least e >= 1 with g^e == 1 by successive multiplication. The independent
 * oracle for every order claim in the library; restricted to small moduli so
 * the walk stays under a second.
 */
inline BigInt element_order_brute(const GroupElement& g,
                                  std::uint64_t modulus_bound = kBruteOrderModulusBound) {
    if (g.modulus() > modulus_bound)
        throw ModulusTooLarge("element_order_brute: modulus " + g.modulus().str() +
                              " exceeds bound " + std::to_string(modulus_bound));
    GroupElement acc = g;
    BigInt e = 1;
    while (!acc.is_identity()) {
        acc = acc * g;
        ++e;
    }
    return e;
}

/**
 * Exact multiplicative order of g given a multiple of it (group_order) and
 * that multiple's full factorization. Standard descend-by-prime-power
 * algorithm; throws BadGroupOrder when g^group_order != 1.
 */
inline BigInt element_order_factored(const GroupElement& g, const BigInt& group_order,
                                     const Factorization& fact) {
    if (fact.value() != group_order)
        throw BadInput("element_order_factored: factorization does not match group order");
    if (group_order < 1) throw BadInput("element_order_factored: group order must be >= 1");
    if (!g.pow(group_order).is_identity())
        throw BadGroupOrder("element_order_factored: g^group_order != 1");
    BigInt t = group_order;
    for (const auto& [p, e] : fact.prime_powers()) {
        for (unsigned i = 0; i < e; ++i) t /= p;
        GroupElement x = g.pow(t);
        while (!x.is_identity()) {
            x = x.pow(p);
            t *= p;
        }
    }
    return t;
}

} // namespace hmenc
