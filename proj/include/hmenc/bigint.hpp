#pragma once

/**
 * @file bigint.hpp
 * @brief Arbitrary-precision integer type, hex codecs, and the seeded RNG
 *        every randomized operation in the library draws from.
 *
 * All randomness is passed explicitly as an Rng so callers own determinism:
 * the same seed always reproduces the same candidate sequence, key choices
 * and transcripts.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "hmenc/errors.hpp"

namespace hmenc {

using BigInt = boost::multiprecision::cpp_int;

using boost::multiprecision::gcd;
using boost::multiprecision::lcm;

/// Number of bits in the binary representation of n (> 0); bits(0) == 0.
inline unsigned bit_length(const BigInt& n) {
    if (n <= 0) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(n)) + 1u;
}

/// Lowercase hex, no prefix, no leading zeros ("0" for zero).
inline std::string to_hex(const BigInt& n) {
    if (n < 0) throw BadInput("to_hex: negative value");
    if (n == 0) return "0";
    std::string s = n.str(0, std::ios_base::hex);
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline BigInt from_hex(std::string_view s) {
    if (s.empty()) throw BadInput("from_hex: empty string");
    BigInt out = 0;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw BadInput(std::string("from_hex: bad digit '") + c + "'");
        out <<= 4;
        out += d;
    }
    return out;
}

/// FNV-1a over bytes; used for platform-binding fingerprints in key files.
/// Not collision resistant, only guards against operator mix-ups.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

/**
 * Deterministic random source. mt19937_64 has a fixed, portable output
 * sequence, which is what makes transcripts and CLI runs byte-reproducible.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, bound) by rejection on bit_length(bound-1) bits.
    BigInt below(const BigInt& bound) {
        if (bound <= 0) throw BadInput("Rng::below: bound must be positive");
        if (bound == 1) return 0;
        const unsigned bits = bit_length(bound - 1);
        const unsigned words = (bits + 63) / 64;
        for (;;) {
            BigInt v = 0;
            for (unsigned i = 0; i < words; ++i) {
                v <<= 64;
                v += next_u64();
            }
            v >>= (words * 64 - bits);
            if (v < bound) return v;
        }
    }

    /// Uniform in [lo, hi] inclusive.
    BigInt in_range(const BigInt& lo, const BigInt& hi) {
        if (lo > hi) throw BadInput("Rng::in_range: empty range");
        return lo + below(hi - lo + 1);
    }

    /// Independent child stream; used by search workers and sessions.
    Rng derive(std::uint64_t salt) const {
        // splitmix64 of (seed, salt) so children never collide with the parent.
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (salt + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 eng_;
    std::uint64_t seed_;
};

} // namespace hmenc
