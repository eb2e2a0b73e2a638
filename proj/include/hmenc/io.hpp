#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hmenc/analysis.hpp"
#include "hmenc/protocol.hpp"
#include "hmenc/threshold.hpp"

/*
 * Line-based serialization for every artifact the CLI reads or writes.
 *
 * Every file starts with "hmenc <type> v1" followed by "key: value" lines
 * in a fixed order. Readers are strict: a missing, reordered, or trailing
 * line is a FormatError, so a truncated or hand-edited key file never
 * half-loads into a usable object. Big integers are lowercase hex, party
 * lists are space-separated decimal, and factorizations are "p^e" terms
 * that are re-verified on load. Key and ciphertext files carry the owning
 * platform's fingerprint; whoever also holds the platform checks it before
 * use so material cannot silently cross platforms.
 */

namespace hmenc {
namespace io {

class Writer {
public:
    explicit Writer(std::string_view type) {
        out_ << "hmenc " << type << " v1\n";
    }

    void put(std::string_view key, std::string_view value) {
        out_ << key << ": " << value << '\n';
    }
    void put_int(std::string_view key, const BigInt& v) { put(key, to_hex(v)); }
    void put_u64(std::string_view key, std::uint64_t v) { put(key, std::to_string(v)); }
    void put_hash(std::string_view key, std::uint64_t v) { put(key, hex16(v)); }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

class Reader {
public:
    Reader(std::string_view type, std::string_view text) : text_(text) {
        std::string want = "hmenc " + std::string(type) + " v1";
        if (next_line() != want)
            throw FormatError("expected header '" + want + "'");
    }

    std::string get(std::string_view key) {
        std::string line = next_line();
        std::string prefix = std::string(key) + ": ";
        if (line.size() < prefix.size() || line.compare(0, prefix.size(), prefix) != 0)
            throw FormatError("expected key '" + std::string(key) + "', got line '" + line + "'");
        return line.substr(prefix.size());
    }

    BigInt get_int(std::string_view key) {
        std::string v = get(key);
        try {
            return from_hex(v);
        } catch (const BadInput& e) {
            throw FormatError(std::string(key) + ": " + e.what());
        }
    }

    std::uint64_t get_u64(std::string_view key) {
        std::string v = get(key);
        if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
            throw FormatError(std::string(key) + ": not a decimal integer: '" + v + "'");
        return std::stoull(v);
    }

    std::uint64_t get_hash(std::string_view key) {
        std::string v = get(key);
        if (v.size() != 16)
            throw FormatError(std::string(key) + ": fingerprint must be 16 hex digits");
        std::uint64_t h = 0;
        for (char c : v) {
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else throw FormatError(std::string(key) + ": bad fingerprint digit");
            h = (h << 4) | static_cast<std::uint64_t>(d);
        }
        return h;
    }

    void done() {
        while (pos_ < text_.size()) {
            if (text_[pos_] != '\n')
                throw FormatError("trailing content after last expected line");
            ++pos_;
        }
    }

private:
    std::string next_line() {
        if (pos_ >= text_.size()) throw FormatError("unexpected end of file");
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        std::string line(text_.substr(pos_, end - pos_));
        pos_ = end < text_.size() ? end + 1 : end;
        return line;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) end = s.size();
        out.emplace_back(s.substr(start, end - start));
        start = end + 1;
        if (start == s.size() + 1) break;
    }
    return out;
}

inline std::string fact_to_string(const Factorization& f) {
    std::string out;
    for (const auto& [p, e] : f.prime_powers()) {
        if (!out.empty()) out += ' ';
        out += to_hex(p) + "^" + std::to_string(e);
    }
    return out.empty() ? "-" : out;
}

inline Factorization fact_from_string(std::string_view s, const BigInt& expected_value) {
    std::vector<Factorization::PrimePower> parts;
    if (s != "-") {
        for (const std::string& term : split(s, ' ')) {
            std::size_t caret = term.find('^');
            if (caret == std::string::npos || caret == 0 || caret + 1 == term.size())
                throw FormatError("factorization term '" + term + "' is not p^e");
            std::string es = term.substr(caret + 1);
            if (es.find_first_not_of("0123456789") != std::string::npos)
                throw FormatError("factorization exponent '" + es + "' is not decimal");
            try {
                parts.emplace_back(from_hex(term.substr(0, caret)),
                                   static_cast<unsigned>(std::stoul(es)));
            } catch (const BadInput& e) {
                throw FormatError(std::string("factorization: ") + e.what());
            }
        }
    }
    try {
        return Factorization::checked(expected_value, std::move(parts));
    } catch (const Error& e) {
        throw FormatError(std::string("factorization rejected: ") + e.what());
    }
}

inline std::string ids_to_string(const std::vector<PartyId>& ids) {
    std::string out;
    for (PartyId id : ids) {
        if (!out.empty()) out += ' ';
        out += std::to_string(id);
    }
    return out.empty() ? "-" : out;
}

inline std::vector<PartyId> ids_from_string(std::string_view s) {
    std::vector<PartyId> out;
    if (s == "-") return out;
    for (const std::string& term : split(s, ' ')) {
        if (term.empty() || term.find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("party id '" + term + "' is not decimal");
        out.push_back(static_cast<PartyId>(std::stoul(term)));
    }
    return out;
}

// Transcript details are free text; keep them on one line by escaping the
// line and field separators.
inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '\\') out += "\\\\";
        else if (c == '\n') out += "\\n";
        else if (c == '|') out += "\\p";
        else out += c;
    }
    return out;
}

inline std::string unescape(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) throw FormatError("dangling escape in transcript detail");
        if (s[i] == '\\') out += '\\';
        else if (s[i] == 'n') out += '\n';
        else if (s[i] == 'p') out += '|';
        else throw FormatError("unknown escape in transcript detail");
    }
    return out;
}

inline Variant variant_from_string(std::string_view s) {
    if (s == "v1-") return Variant::V1_minus;
    if (s == "v1+") return Variant::V1_plus;
    if (s == "v2") return Variant::V2;
    throw FormatError("unknown variant '" + std::string(s) + "'");
}

inline SessionMode mode_from_string(std::string_view s) {
    if (s == "broadcast") return SessionMode::Broadcast;
    if (s == "room") return SessionMode::PrivateRoom;
    if (s == "server") return SessionMode::TrustedServer;
    throw FormatError("unknown session mode '" + std::string(s) + "'");
}

inline SessionStatus status_from_string(std::string_view s) {
    if (s == "open") return SessionStatus::Open;
    if (s == "complete") return SessionStatus::Complete;
    if (s == "failed") return SessionStatus::Failed;
    throw FormatError("unknown session status '" + std::string(s) + "'");
}

inline void put_chain(Writer& w, std::string_view key, const std::vector<Prop1Instance>& chain) {
    w.put_u64(std::string(key) + ".links", chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const Prop1Instance& c = chain[i];
        w.put(std::string(key) + "." + std::to_string(i),
              to_hex(c.b) + " " + to_hex(c.q) + " " + to_hex(c.r) + " " + to_hex(c.a));
    }
}

inline std::vector<Prop1Instance> get_chain(Reader& r, std::string_view key) {
    std::uint64_t n = r.get_u64(std::string(key) + ".links");
    std::vector<Prop1Instance> chain;
    chain.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::vector<std::string> f = split(r.get(std::string(key) + "." + std::to_string(i)), ' ');
        if (f.size() != 4) throw FormatError("certificate link needs 4 fields");
        try {
            chain.push_back(Prop1Instance::checked(from_hex(f[0]), from_hex(f[1]),
                                                   from_hex(f[2]), from_hex(f[3])));
        } catch (const Error& e) {
            throw FormatError(std::string("certificate link rejected: ") + e.what());
        }
    }
    return chain;
}

inline void put_subgroup(Writer& w, std::string_view key, const SubgroupSpec& sg) {
    w.put_int(std::string(key) + ".gen", sg.generator.value());
    w.put(std::string(key) + ".order", fact_to_string(sg.order_fact));
}

// Reconstructing through SubgroupSpec::checked re-proves generator^order = 1
// and order exactness, so a tampered key file fails here rather than during
// a decryption that would silently produce garbage.
inline SubgroupSpec get_subgroup(Reader& r, std::string_view key, const BigInt& modulus,
                                 const BigInt& order) {
    BigInt gen = r.get_int(std::string(key) + ".gen");
    Factorization fact = fact_from_string(r.get(std::string(key) + ".order"), order);
    try {
        return SubgroupSpec::checked(GroupElement(gen, modulus), std::move(fact));
    } catch (const Error& e) {
        throw FormatError(std::string(key) + ": " + e.what());
    }
}

inline void put_field_platform(Writer& w, const FieldPlatform& fp) {
    w.put_int("p", fp.p);
    w.put("order", fact_to_string(fp.order_factorization));
    w.put_int("generator", fp.generator_g.value());
    put_chain(w, "chain", fp.certificate_chain);
}

inline FieldPlatform get_field_platform(Reader& r) {
    BigInt p = r.get_int("p");
    Factorization fact = fact_from_string(r.get("order"), p - 1);
    BigInt gen = r.get_int("generator");
    std::vector<Prop1Instance> chain = get_chain(r, "chain");
    try {
        return FieldPlatform{p, p - 1, std::move(fact), GroupElement(gen, p), std::move(chain)};
    } catch (const Error& e) {
        throw FormatError(std::string("field platform: ") + e.what());
    }
}

inline void put_ring_platform(Writer& w, const RingPlatform& rp) {
    w.put_int("p", rp.p);
    w.put_int("q", rp.q_ring);
    w.put("order_p", fact_to_string(rp.fact_p));
    w.put("order_q", fact_to_string(rp.fact_q));
    w.put_int("generator_p", rp.gen_p.value());
    w.put_int("generator_q", rp.gen_q.value());
    put_chain(w, "chain_p", rp.chain_p);
    put_chain(w, "chain_q", rp.chain_q);
}

inline RingPlatform get_ring_platform(Reader& r) {
    BigInt p = r.get_int("p");
    BigInt q = r.get_int("q");
    Factorization fp = fact_from_string(r.get("order_p"), p - 1);
    Factorization fq = fact_from_string(r.get("order_q"), q - 1);
    BigInt gp = r.get_int("generator_p");
    BigInt gq = r.get_int("generator_q");
    std::vector<Prop1Instance> cp = get_chain(r, "chain_p");
    std::vector<Prop1Instance> cq = get_chain(r, "chain_q");
    try {
        return RingPlatform{p * q, p,  q,  std::move(fp), std::move(fq),
                            GroupElement(gp, p), GroupElement(gq, q),
                            std::move(cp), std::move(cq)};
    } catch (const Error& e) {
        throw FormatError(std::string("ring platform: ") + e.what());
    }
}

inline void put_platform_variant(Writer& w, const std::variant<FieldPlatform, RingPlatform>& pl) {
    if (std::holds_alternative<FieldPlatform>(pl)) {
        w.put("kind", "field");
        put_field_platform(w, std::get<FieldPlatform>(pl));
    } else {
        w.put("kind", "ring");
        put_ring_platform(w, std::get<RingPlatform>(pl));
    }
}

inline std::variant<FieldPlatform, RingPlatform> get_platform_variant(Reader& r) {
    std::string kind = r.get("kind");
    if (kind == "field") return get_field_platform(r);
    if (kind == "ring") return get_ring_platform(r);
    throw FormatError("unknown platform kind '" + kind + "'");
}

} // namespace detail

// ---- standalone platform files (paramgen output) ----

inline std::string save_platform(const std::variant<FieldPlatform, RingPlatform>& pl) {
    Writer w("platform");
    detail::put_platform_variant(w, pl);
    BigInt modulus = std::holds_alternative<FieldPlatform>(pl)
                         ? std::get<FieldPlatform>(pl).p
                         : std::get<RingPlatform>(pl).n;
    w.put_hash("fingerprint", platform_binding_hash(modulus));
    return w.str();
}

inline std::variant<FieldPlatform, RingPlatform> load_platform(std::string_view text) {
    Reader r("platform", text);
    auto pl = detail::get_platform_variant(r);
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    BigInt modulus = std::holds_alternative<FieldPlatform>(pl)
                         ? std::get<FieldPlatform>(pl).p
                         : std::get<RingPlatform>(pl).n;
    if (fp != platform_binding_hash(modulus))
        throw FormatError("platform fingerprint does not match the stored modulus");
    return pl;
}

// ---- dealer state ----

inline std::string save_dealer(const DealerSecret& dealer) {
    Writer w("dealer");
    w.put("variant", variant_name(dealer.variant));
    detail::put_platform_variant(w, dealer.platform);
    w.put_int("d", dealer.d);
    detail::put_subgroup(w, "msg", dealer.msg_subgroup);
    w.put_u64("pool", dealer.hidden.size());
    for (std::size_t i = 0; i < dealer.hidden.size(); ++i) {
        w.put_int("hidden." + std::to_string(i) + ".t", dealer.hidden[i].order);
        detail::put_subgroup(w, "hidden." + std::to_string(i), dealer.hidden[i]);
    }
    w.put_u64("parties", dealer.assignment.size());
    std::size_t row = 0;
    for (const auto& [id, idx] : dealer.assignment)
        w.put("party." + std::to_string(row++),
              std::to_string(id) + " " + std::to_string(idx));
    std::string retired;
    for (std::size_t i : dealer.retired) {
        if (!retired.empty()) retired += ' ';
        retired += std::to_string(i);
    }
    w.put("retired", retired.empty() ? "-" : retired);
    w.put_hash("fingerprint", dealer.platform_hash);
    return w.str();
}

inline DealerSecret load_dealer(std::string_view text) {
    Reader r("dealer", text);
    Variant variant = detail::variant_from_string(r.get("variant"));
    auto platform = detail::get_platform_variant(r);
    BigInt modulus = std::holds_alternative<FieldPlatform>(platform)
                         ? std::get<FieldPlatform>(platform).p
                         : std::get<RingPlatform>(platform).n;
    BigInt d = r.get_int("d");
    SubgroupSpec msg = detail::get_subgroup(r, "msg", modulus, d);
    std::uint64_t pool = r.get_u64("pool");
    std::vector<SubgroupSpec> hidden;
    BigInt t_product = 1;
    for (std::uint64_t i = 0; i < pool; ++i) {
        BigInt t = r.get_int("hidden." + std::to_string(i) + ".t");
        hidden.push_back(detail::get_subgroup(r, "hidden." + std::to_string(i), modulus, t));
        t_product *= t;
    }
    std::uint64_t parties = r.get_u64("parties");
    std::map<PartyId, std::size_t> assignment;
    std::set<std::size_t> used;
    for (std::uint64_t i = 0; i < parties; ++i) {
        std::vector<std::string> f = detail::split(r.get("party." + std::to_string(i)), ' ');
        if (f.size() != 2 || f[0].empty() || f[1].empty() ||
            f[0].find_first_not_of("0123456789") != std::string::npos ||
            f[1].find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("dealer party line needs '<id> <index>'");
        PartyId id = static_cast<PartyId>(std::stoul(f[0]));
        std::size_t idx = static_cast<std::size_t>(std::stoull(f[1]));
        if (idx >= hidden.size()) throw FormatError("dealer party index out of range");
        if (assignment.count(id) || !used.insert(idx).second)
            throw FormatError("dealer assignment repeats a party or an index");
        assignment[id] = idx;
    }
    std::set<std::size_t> retired;
    std::string ret = r.get("retired");
    if (ret != "-") {
        for (const std::string& term : detail::split(ret, ' ')) {
            if (term.empty() || term.find_first_not_of("0123456789") != std::string::npos)
                throw FormatError("dealer retired index is not decimal");
            std::size_t idx = static_cast<std::size_t>(std::stoull(term));
            if (idx >= hidden.size() || used.count(idx))
                throw FormatError("dealer retired index out of range or still assigned");
            retired.insert(idx);
        }
    }
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    if (fp != platform_binding_hash(modulus))
        throw FormatError("dealer fingerprint does not match the platform");
    std::set<std::size_t> free_indices;
    for (std::size_t i = 0; i < hidden.size(); ++i)
        if (!used.count(i) && !retired.count(i)) free_indices.insert(i);
    return DealerSecret{variant, modulus, std::move(platform), std::move(msg),
                        std::move(hidden), d, t_product, std::move(assignment),
                        std::move(free_indices), std::move(retired), fp};
}

// ---- per-party key files ----

inline std::string save_decrypt_key(const PartyDecryptKey& key, std::uint64_t platform_hash) {
    Writer w("deckey");
    w.put_u64("party", key.party_id);
    w.put_int("exponent", key.exponent);
    w.put_hash("fingerprint", platform_hash);
    return w.str();
}

inline std::pair<PartyDecryptKey, std::uint64_t> load_decrypt_key(std::string_view text) {
    Reader r("deckey", text);
    PartyDecryptKey key;
    key.party_id = static_cast<PartyId>(r.get_u64("party"));
    key.exponent = r.get_int("exponent");
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    return {std::move(key), fp};
}

inline std::string save_sign_key(const PartySignKey& key, std::uint64_t platform_hash) {
    Writer w("signkey");
    w.put_u64("party", key.party_id);
    w.put_int("modulus", key.generator.modulus());
    w.put_int("generator", key.generator.value());
    w.put_int("order", key.order);
    w.put_hash("fingerprint", platform_hash);
    return w.str();
}

inline std::pair<PartySignKey, std::uint64_t> load_sign_key(std::string_view text) {
    Reader r("signkey", text);
    PartyId id = static_cast<PartyId>(r.get_u64("party"));
    BigInt modulus = r.get_int("modulus");
    BigInt gen = r.get_int("generator");
    BigInt order = r.get_int("order");
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    try {
        return {PartySignKey{id, GroupElement(gen, modulus), order}, fp};
    } catch (const Error& e) {
        throw FormatError(std::string("sign key: ") + e.what());
    }
}

// ---- ciphertexts and signed documents ----

inline std::string save_ciphertext(const Ciphertext& ct) {
    Writer w("ciphertext");
    w.put_int("modulus", ct.value.modulus());
    w.put_int("value", ct.value.value());
    w.put("coalition", detail::ids_to_string(ct.coalition));
    w.put("variant", variant_name(ct.variant));
    w.put_hash("fingerprint", ct.platform_hash);
    return w.str();
}

inline Ciphertext load_ciphertext(std::string_view text) {
    Reader r("ciphertext", text);
    BigInt modulus = r.get_int("modulus");
    BigInt value = r.get_int("value");
    std::vector<PartyId> coalition = detail::ids_from_string(r.get("coalition"));
    Variant variant = detail::variant_from_string(r.get("variant"));
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    try {
        return Ciphertext{GroupElement(value, modulus), std::move(coalition), variant, fp};
    } catch (const Error& e) {
        throw FormatError(std::string("ciphertext: ") + e.what());
    }
}

inline std::string save_signed_doc(const SignedDocument& sd, std::uint64_t platform_hash) {
    Writer w("signeddoc");
    w.put_int("modulus", sd.document.modulus());
    w.put_int("document", sd.document.value());
    w.put_int("signed", sd.signed_value.value());
    w.put("coalition", detail::ids_to_string(sd.coalition));
    w.put_hash("fingerprint", platform_hash);
    return w.str();
}

inline std::pair<SignedDocument, std::uint64_t> load_signed_doc(std::string_view text) {
    Reader r("signeddoc", text);
    BigInt modulus = r.get_int("modulus");
    BigInt doc = r.get_int("document");
    BigInt sig = r.get_int("signed");
    std::vector<PartyId> coalition = detail::ids_from_string(r.get("coalition"));
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    try {
        return {SignedDocument{GroupElement(doc, modulus), GroupElement(sig, modulus),
                               std::move(coalition)},
                fp};
    } catch (const Error& e) {
        throw FormatError(std::string("signed doc: ") + e.what());
    }
}

// ---- threshold artifacts ----

inline std::string save_threshold_dealer(const ThresholdDealer& dealer) {
    Writer w("tdealer");
    detail::put_platform_variant(w, dealer.platform);
    w.put_int("d", dealer.d);
    detail::put_subgroup(w, "msg", dealer.msg_subgroup);
    w.put_u64("s", dealer.system.s);
    w.put_u64("subgroups", dealer.w_subgroups.size());
    for (std::size_t i = 0; i < dealer.w_subgroups.size(); ++i) {
        w.put_int("w." + std::to_string(i) + ".t", dealer.w_subgroups[i].order);
        detail::put_subgroup(w, "w." + std::to_string(i), dealer.w_subgroups[i]);
    }
    w.put_hash("fingerprint", dealer.platform_hash);
    return w.str();
}

inline ThresholdDealer load_threshold_dealer(std::string_view text) {
    Reader r("tdealer", text);
    auto platform = detail::get_platform_variant(r);
    BigInt modulus = std::holds_alternative<FieldPlatform>(platform)
                         ? std::get<FieldPlatform>(platform).p
                         : std::get<RingPlatform>(platform).n;
    BigInt d = r.get_int("d");
    SubgroupSpec msg = detail::get_subgroup(r, "msg", modulus, d);
    std::uint64_t s = r.get_u64("s");
    ThresholdSetSystem system = build_set_system(static_cast<std::size_t>(s));
    std::uint64_t count = r.get_u64("subgroups");
    if (count != system.size_at(system.s))
        throw FormatError("threshold dealer: subgroup count does not match 2^s - 1");
    std::vector<SubgroupSpec> ws;
    for (std::uint64_t i = 0; i < count; ++i) {
        BigInt t = r.get_int("w." + std::to_string(i) + ".t");
        ws.push_back(detail::get_subgroup(r, "w." + std::to_string(i), modulus, t));
    }
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    if (fp != platform_binding_hash(modulus))
        throw FormatError("threshold dealer: fingerprint does not match the platform");
    return ThresholdDealer{modulus, std::move(platform), std::move(msg),
                           std::move(ws), d, std::move(system), fp};
}

inline std::string save_threshold_key(const ThresholdKey& key, std::uint64_t platform_hash) {
    Writer w("tkey");
    w.put_u64("party", key.party_id);
    w.put_int("key", key.key);
    w.put_hash("fingerprint", platform_hash);
    return w.str();
}

inline std::pair<ThresholdKey, std::uint64_t> load_threshold_key(std::string_view text) {
    Reader r("tkey", text);
    ThresholdKey key;
    key.party_id = static_cast<PartyId>(r.get_u64("party"));
    key.key = r.get_int("key");
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    return {std::move(key), fp};
}

inline std::string save_threshold_ciphertext(const ThresholdCiphertext& ct) {
    Writer w("tciphertext");
    w.put_int("modulus", ct.value.modulus());
    w.put_int("value", ct.value.value());
    w.put_u64("m", ct.m);
    w.put_hash("fingerprint", ct.platform_hash);
    return w.str();
}

inline ThresholdCiphertext load_threshold_ciphertext(std::string_view text) {
    Reader r("tciphertext", text);
    BigInt modulus = r.get_int("modulus");
    BigInt value = r.get_int("value");
    std::uint64_t m = r.get_u64("m");
    std::uint64_t fp = r.get_hash("fingerprint");
    r.done();
    try {
        return ThresholdCiphertext{GroupElement(value, modulus),
                                   static_cast<std::size_t>(m), fp};
    } catch (const Error& e) {
        throw FormatError(std::string("threshold ciphertext: ") + e.what());
    }
}

// ---- transcripts ----

inline std::string save_transcript(const Transcript& t) {
    Writer w("transcript");
    w.put("session", t.session_id);
    w.put("mode", session_mode_name(t.mode));
    w.put_u64("seed", t.seed);
    w.put("status", session_status_name(t.status));
    w.put_u64("events", t.events.size());
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        const TranscriptEvent& e = t.events[i];
        w.put("event." + std::to_string(i),
              std::to_string(e.seq) + "|" + detail::escape(e.kind) + "|" +
                  detail::escape(e.public_detail) + "|" + detail::escape(e.private_detail));
    }
    if (t.final_value)
        w.put("final", to_hex(t.final_value->modulus()) + " " + to_hex(t.final_value->value()));
    else
        w.put("final", "-");
    w.put("recovered", t.recovered_message ? to_hex(*t.recovered_message) : "-");
    return w.str();
}

inline Transcript load_transcript(std::string_view text) {
    Reader r("transcript", text);
    Transcript t;
    t.session_id = r.get("session");
    t.mode = detail::mode_from_string(r.get("mode"));
    t.seed = r.get_u64("seed");
    t.status = detail::status_from_string(r.get("status"));
    std::uint64_t n = r.get_u64("events");
    for (std::uint64_t i = 0; i < n; ++i) {
        std::vector<std::string> f = detail::split(r.get("event." + std::to_string(i)), '|');
        if (f.size() != 4) throw FormatError("transcript event needs 4 fields");
        if (f[0].empty() || f[0].find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("transcript event seq is not decimal");
        t.events.push_back(TranscriptEvent{std::stoull(f[0]), detail::unescape(f[1]),
                                           detail::unescape(f[2]), detail::unescape(f[3])});
    }
    std::string fin = r.get("final");
    if (fin != "-") {
        std::vector<std::string> f = detail::split(fin, ' ');
        if (f.size() != 2) throw FormatError("transcript final needs modulus and value");
        try {
            t.final_value = GroupElement(from_hex(f[1]), from_hex(f[0]));
        } catch (const Error& e) {
            throw FormatError(std::string("transcript final: ") + e.what());
        }
    }
    std::string rec = r.get("recovered");
    if (rec != "-") {
        try {
            t.recovered_message = from_hex(rec);
        } catch (const BadInput& e) {
            throw FormatError(std::string("transcript recovered: ") + e.what());
        }
    }
    r.done();
    return t;
}

// ---- attack reports ----

inline std::string csv_rsa_report(const std::vector<RsaAttackRow>& rows) {
    std::ostringstream out;
    out << "trial,n,e,m,c,recovered,success,oracle_calls\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const RsaAttackRow& r = rows[i];
        out << i << ',' << r.n << ',' << r.e << ',' << r.m << ',' << r.c << ','
            << r.recovered << ',' << (r.success ? 1 : 0) << ',' << r.oracle_calls << '\n';
    }
    return out.str();
}

inline std::string csv_distinguish_report(const std::vector<DistinguishRow>& rows) {
    std::ostringstream out;
    out << "trial,true_index,verdict,success,oracle_calls\n";
    for (const DistinguishRow& r : rows)
        out << r.trial << ',' << r.true_index << ',' << r.verdict << ','
            << (r.success ? 1 : 0) << ',' << r.oracle_calls << '\n';
    return out.str();
}

// ---- file helpers ----

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw FormatError("short write to '" + path + "'");
}

} // namespace io
} // namespace hmenc
