#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hmenc/io.hpp"
#include "acceptance_suite.hpp"

/*
 * Command-line front end. Every command that generates anything takes a
 * --seed and is byte-reproducible from it. Library errors map to exit
 * codes: 2 bad arguments, 3 file format, 4 search exhausted, 5 any other
 * cryptographic failure.
 */

namespace {

using namespace hmenc;

std::vector<PartyId> parse_ids(const std::string& csv) {
    std::vector<PartyId> out;
    if (csv.empty()) return out;
    for (const std::string& term : io::detail::split(csv, ',')) {
        if (term.empty() || term.find_first_not_of("0123456789") != std::string::npos)
            throw BadInput("party id '" + term + "' is not decimal");
        out.push_back(static_cast<PartyId>(std::stoul(term)));
    }
    return out;
}

std::vector<BigInt> parse_orders(const std::string& csv) {
    std::vector<BigInt> out;
    for (const std::string& term : io::detail::split(csv, ',')) {
        if (term.empty() || term.find_first_not_of("0123456789") != std::string::npos)
            throw BadInput("order '" + term + "' is not decimal");
        out.emplace_back(term);
    }
    if (out.empty()) throw BadInput("--orders needs at least one value");
    return out;
}

BigInt parse_big(const std::string& dec, const char* what) {
    if (dec.empty() || dec.find_first_not_of("0123456789") != std::string::npos)
        throw BadInput(std::string(what) + " '" + dec + "' is not decimal");
    return BigInt(dec);
}

Variant parse_variant_flag(const std::string& v) {
    if (v == "v1" || v == "v1-") return Variant::V1_minus;
    if (v == "v1+") return Variant::V1_plus;
    if (v == "v2") return Variant::V2;
    throw BadInput("--variant must be v1, v1-, v1+, or v2");
}

SessionMode parse_mode_flag(const std::string& m) {
    if (m == "broadcast") return SessionMode::Broadcast;
    if (m == "room") return SessionMode::PrivateRoom;
    if (m == "server") return SessionMode::TrustedServer;
    throw BadInput("--mode must be broadcast, room, or server");
}

OrderPolicy parse_order_flag(const std::string& o) {
    if (o == "seq") return OrderPolicy::Sequential;
    if (o == "shuffle") return OrderPolicy::Shuffled;
    throw BadInput("--order must be seq or shuffle");
}

void require_binding(std::uint64_t got, std::uint64_t want, const char* what) {
    if (got != want)
        throw FormatError(std::string(what) +
                          ": platform fingerprint mismatch, material from another platform");
}

// ---- paramgen ----

struct ParamgenArgs {
    std::string kind; // field | ring
    std::string orders;
    std::string d = "2";
    unsigned bits = 0;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool certified = false;
    std::string out = "platform.hmenc";
};

// Workers race over derived seeds; the lowest-numbered success wins, so the
// output is the same whatever the thread schedule did.
template <typename Build>
auto race_workers(unsigned jobs, std::uint64_t seed, Build build) {
    using Result = decltype(build(std::declval<Rng&>()));
    std::vector<std::optional<Result>> results(jobs);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            Rng rng = Rng(seed).derive(1000 + w);
            try {
                results[w] = build(rng);
            } catch (const Error&) {
                results[w] = std::nullopt;
            }
        });
    for (std::thread& t : pool) t.join();
    for (unsigned w = 0; w < jobs; ++w)
        if (results[w]) return *results[w];
    throw SearchExhausted("all " + std::to_string(jobs) + " workers exhausted their budgets");
}

void cmd_paramgen(const ParamgenArgs& a) {
    if (a.jobs < 1 || a.jobs > 64) throw BadInput("--jobs must be in [1, 64]");
    std::vector<BigInt> orders = parse_orders(a.orders);
    BigInt d = parse_big(a.d, "--d");
    auto platform = [&]() -> std::variant<FieldPlatform, RingPlatform> {
        if (a.kind == "field") {
            FieldSetup fs = race_workers(a.jobs, a.seed, [&](Rng& rng) {
                return build_field_platform(orders, d, a.bits, rng, a.certified);
            });
            return std::move(fs.platform);
        }
        std::vector<std::pair<BigInt, BigInt>> pairs;
        for (const BigInt& t : orders) pairs.emplace_back(t, 1);
        RingSetup rs = race_workers(a.jobs, a.seed, [&](Rng& rng) {
            return build_ring_platform(pairs, {d, 1}, a.bits, rng, a.certified);
        });
        return std::move(rs.platform);
    }();
    BigInt modulus = std::holds_alternative<FieldPlatform>(platform)
                         ? std::get<FieldPlatform>(platform).p
                         : std::get<RingPlatform>(platform).n;
    io::write_file(a.out, io::save_platform(platform));
    std::cout << "platform " << a.kind << " modulus=" << modulus << " fingerprint="
              << hex16(platform_binding_hash(modulus)) << " -> " << a.out << "\n";
}

// ---- setup and pool ----

struct SetupArgs {
    std::string variant = "v2";
    unsigned parties = 2;
    unsigned reserve = 0;
    std::string d = "2";
    unsigned order_bits = 0;
    unsigned bits = 0;
    bool certified = false;
    bool ring = false;
    std::uint64_t seed = 1;
    std::string outdir = "keys";
};

void write_party_files(const DealerSecret& dealer, const PartyDecryptKey& key,
                       const std::filesystem::path& dir) {
    std::string stem = "party-" + std::to_string(key.party_id);
    io::write_file((dir / (stem + ".deckey")).string(),
                   io::save_decrypt_key(key, dealer.platform_hash));
    io::write_file((dir / (stem + ".signkey")).string(),
                   io::save_sign_key(sign_key_for(dealer, key.party_id), dealer.platform_hash));
}

void cmd_setup(const SetupArgs& a) {
    Variant variant = parse_variant_flag(a.variant);
    SetupOptions opts;
    opts.v2_d = parse_big(a.d, "--d");
    opts.order_bits = a.order_bits;
    opts.platform_bits = a.bits;
    opts.certified = a.certified;
    opts.ring = a.ring;
    Rng rng(a.seed);
    auto [dealer, keys] = setup_dealer(a.parties, a.reserve, variant, opts, rng);
    std::filesystem::path dir(a.outdir);
    std::filesystem::create_directories(dir);
    io::write_file((dir / "dealer.hmenc").string(), io::save_dealer(dealer));
    for (const auto& [id, key] : keys) write_party_files(dealer, key, dir);
    std::cout << "dealer " << variant_name(dealer.variant) << " modulus=" << dealer.modulus
              << " d=" << dealer.d << " parties=" << keys.size() << " reserve=" << a.reserve
              << " fingerprint=" << hex16(dealer.platform_hash) << " -> " << a.outdir << "\n";
}

struct PoolArgs {
    std::string action; // join | leave
    std::string dealer_file = "keys/dealer.hmenc";
    unsigned party = 0;
    std::string outdir;
};

void cmd_pool(const PoolArgs& a) {
    DealerSecret dealer = io::load_dealer(io::read_file(a.dealer_file));
    std::filesystem::path dir =
        a.outdir.empty() ? std::filesystem::path(a.dealer_file).parent_path()
                         : std::filesystem::path(a.outdir);
    if (a.action == "join") {
        PartyDecryptKey key = join_party(dealer, static_cast<PartyId>(a.party));
        if (!dir.empty()) std::filesystem::create_directories(dir);
        write_party_files(dealer, key, dir);
        std::cout << "joined party " << a.party << " order=" << key.exponent << "\n";
    } else {
        leave_party(dealer, static_cast<PartyId>(a.party));
        std::cout << "left party " << a.party << "\n";
    }
    io::write_file(a.dealer_file, io::save_dealer(dealer));
}

// ---- encryption ----

struct EncryptArgs {
    std::string dealer_file = "keys/dealer.hmenc";
    std::string coalition;
    std::string message = "0";
    std::uint64_t seed = 1;
    std::string out = "ciphertext.hmenc";
};

void cmd_encrypt(const EncryptArgs& a) {
    DealerSecret dealer = io::load_dealer(io::read_file(a.dealer_file));
    std::vector<PartyId> coalition = parse_ids(a.coalition);
    GroupElement f = encode_message(parse_big(a.message, "--message"), dealer.msg_subgroup);
    Rng rng(a.seed);
    Ciphertext ct = dealer.variant == Variant::V2 ? v2_encrypt(dealer, f, coalition, rng)
                                                  : v1_encrypt(dealer, f, coalition, rng);
    io::write_file(a.out, io::save_ciphertext(ct));
    std::cout << "ciphertext " << variant_name(ct.variant) << " coalition="
              << io::detail::ids_to_string(ct.coalition) << " -> " << a.out << "\n";
}

struct ThresholdSetupArgs {
    unsigned parties = 3;
    std::string d = "2";
    unsigned order_bits = 0;
    unsigned bits = 0;
    bool certified = false;
    bool ring = false;
    std::uint64_t seed = 1;
    std::string outdir = "tkeys";
};

void cmd_threshold_setup(const ThresholdSetupArgs& a) {
    ThresholdOptions opts;
    opts.d = parse_big(a.d, "--d");
    opts.order_bits = a.order_bits;
    opts.platform_bits = a.bits;
    opts.certified = a.certified;
    opts.ring = a.ring;
    Rng rng(a.seed);
    auto [dealer, keys] = threshold_setup(a.parties, opts, rng);
    std::filesystem::path dir(a.outdir);
    std::filesystem::create_directories(dir);
    io::write_file((dir / "tdealer.hmenc").string(), io::save_threshold_dealer(dealer));
    for (const auto& [id, key] : keys)
        io::write_file((dir / ("party-" + std::to_string(id) + ".tkey")).string(),
                       io::save_threshold_key(key, dealer.platform_hash));
    std::cout << "threshold dealer s=" << a.parties << " modulus=" << dealer.modulus
              << " d=" << dealer.d << " fingerprint=" << hex16(dealer.platform_hash) << " -> "
              << a.outdir << "\n";
}

struct ThresholdEncryptArgs {
    std::string dealer_file = "tkeys/tdealer.hmenc";
    unsigned m = 1;
    std::string message = "0";
    std::uint64_t seed = 1;
    std::string out = "tciphertext.hmenc";
};

void cmd_threshold_encrypt(const ThresholdEncryptArgs& a) {
    ThresholdDealer dealer = io::load_threshold_dealer(io::read_file(a.dealer_file));
    GroupElement f = encode_message(parse_big(a.message, "--message"), dealer.msg_subgroup);
    Rng rng(a.seed);
    ThresholdCiphertext ct = threshold_encrypt(dealer, f, a.m, rng);
    io::write_file(a.out, io::save_threshold_ciphertext(ct));
    std::cout << "threshold ciphertext m=" << ct.m << " -> " << a.out << "\n";
}

// ---- sessions ----

struct SessionArgs {
    std::string flavor; // decrypt | sign | threshold
    std::string dealer_file;
    std::string keydir = "keys";
    std::string coalition;
    std::string message = "0";
    unsigned m = 1;
    std::string mode = "broadcast";
    std::string order = "seq";
    std::string intruders;
    std::string virtuals;
    std::uint64_t seed = 1;
    std::string out = "transcript.hmenc";
    std::string doc_out = "signed.hmenc";
};

SessionOptions session_options(const SessionArgs& a) {
    SessionOptions opts;
    opts.mode = parse_mode_flag(a.mode);
    opts.order = parse_order_flag(a.order);
    opts.intruders = parse_ids(a.intruders);
    opts.virtual_parties = parse_ids(a.virtuals);
    return opts;
}

void report_session(const Transcript& t, const std::string& out) {
    std::cout << "session " << t.session_id << " status=" << session_status_name(t.status);
    if (t.recovered_message) std::cout << " recovered=" << *t.recovered_message;
    std::cout << " -> " << out << "\n";
}

void cmd_session(const SessionArgs& a) {
    std::vector<PartyId> coalition = parse_ids(a.coalition);
    SessionOptions opts = session_options(a);
    std::filesystem::path keydir(a.keydir);
    if (a.flavor == "decrypt") {
        DealerSecret dealer = io::load_dealer(io::read_file(
            a.dealer_file.empty() ? (keydir / "dealer.hmenc").string() : a.dealer_file));
        std::map<PartyId, PartyDecryptKey> keys;
        for (PartyId id : coalition) {
            auto [key, fp] = io::load_decrypt_key(io::read_file(
                (keydir / ("party-" + std::to_string(id) + ".deckey")).string()));
            require_binding(fp, dealer.platform_hash, "decrypt key");
            keys[id] = std::move(key);
        }
        Transcript t = run_decrypt_session(dealer, keys, coalition,
                                           parse_big(a.message, "--message"), opts, a.seed);
        io::write_file(a.out, io::save_transcript(t));
        report_session(t, a.out);
    } else if (a.flavor == "sign") {
        DealerSecret dealer = io::load_dealer(io::read_file(
            a.dealer_file.empty() ? (keydir / "dealer.hmenc").string() : a.dealer_file));
        std::map<PartyId, PartySignKey> keys;
        for (PartyId id : coalition) {
            auto [key, fp] = io::load_sign_key(io::read_file(
                (keydir / ("party-" + std::to_string(id) + ".signkey")).string()));
            require_binding(fp, dealer.platform_hash, "sign key");
            keys.emplace(id, std::move(key));
        }
        GroupElement doc =
            encode_message(parse_big(a.message, "--message"), dealer.msg_subgroup);
        auto [signed_doc, t] = run_sign_session(keys, coalition, doc, opts, a.seed);
        io::write_file(a.out, io::save_transcript(t));
        io::write_file(a.doc_out, io::save_signed_doc(signed_doc, dealer.platform_hash));
        report_session(t, a.out);
        std::cout << "signed document -> " << a.doc_out << "\n";
    } else {
        ThresholdDealer dealer = io::load_threshold_dealer(io::read_file(
            a.dealer_file.empty() ? (keydir / "tdealer.hmenc").string() : a.dealer_file));
        std::map<PartyId, ThresholdKey> keys;
        for (PartyId id : coalition) {
            auto [key, fp] = io::load_threshold_key(io::read_file(
                (keydir / ("party-" + std::to_string(id) + ".tkey")).string()));
            require_binding(fp, dealer.platform_hash, "threshold key");
            keys[id] = std::move(key);
        }
        Transcript t = run_threshold_session(dealer, keys, coalition,
                                             parse_big(a.message, "--message"), a.m, opts,
                                             a.seed);
        io::write_file(a.out, io::save_transcript(t));
        report_session(t, a.out);
    }
}

// ---- signature verification ----

struct VerifyArgs {
    std::string dealer_file = "keys/dealer.hmenc";
    std::string doc_file = "signed.hmenc";
    std::string coalition;
};

int cmd_verify_sign(const VerifyArgs& a) {
    DealerSecret dealer = io::load_dealer(io::read_file(a.dealer_file));
    auto [doc, fp] = io::load_signed_doc(io::read_file(a.doc_file));
    require_binding(fp, dealer.platform_hash, "signed document");
    std::vector<PartyId> coalition =
        a.coalition.empty() ? doc.coalition : parse_ids(a.coalition);
    std::map<PartyId, BigInt> orders;
    for (PartyId id : coalition) orders[id] = dealer.subgroup_of(id).order;
    SignatureCheck check = verify_signature(doc, orders, dealer.d);
    std::cout << (check == SignatureCheck::Accept ? "accept" : "reject") << "\n";
    return check == SignatureCheck::Accept ? 0 : 5;
}

// ---- attacks ----

struct AttackArgs {
    std::string kind; // rsa-order | distinguish
    std::uint64_t trials = 20;
    std::uint64_t seed = 1;
    std::string msg_a = "0";
    std::string msg_b = "1";
    std::string out = "attack.csv";
};

void cmd_attack(const AttackArgs& a) {
    Rng rng(a.seed);
    std::string csv;
    std::size_t wins = 0;
    if (a.kind == "rsa-order") {
        auto rows = run_rsa_attack_sweep(a.trials, rng);
        for (const auto& r : rows) wins += r.success;
        csv = io::csv_rsa_report(rows);
    } else {
        Rng setup_rng = rng.derive(1), sweep_rng = rng.derive(2);
        SetupOptions opts;
        auto [dealer, keys] = setup_dealer(2, 0, Variant::V2, opts, setup_rng);
        auto rows = run_distinguisher_sweep(dealer, parse_big(a.msg_a, "--msg-a"),
                                            parse_big(a.msg_b, "--msg-b"), a.trials, sweep_rng);
        for (const auto& r : rows) wins += r.success;
        csv = io::csv_distinguish_report(rows);
    }
    io::write_file(a.out, csv);
    std::cout << "attack " << a.kind << " success=" << wins << "/" << a.trials << " -> "
              << a.out << "\n";
}

// ---- selftest ----

struct SelftestArgs {
    std::string level = "desk";
    std::string cli_path;
};

int cmd_selftest(const SelftestArgs& a) {
    if (a.level != "desk" && a.level != "full")
        throw BadInput("--level must be desk or full");
    std::string cli = a.cli_path;
    if (cli.empty()) {
        std::error_code ec;
        auto self = std::filesystem::read_symlink("/proc/self/exe", ec);
        if (!ec) cli = self.string();
    }
    acceptance::Level level =
        a.level == "full" ? acceptance::Level::Full : acceptance::Level::Desk;
    return acceptance::run_all(level, cli, std::cout) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hidden-multiplier encryption toolkit"};
    app.require_subcommand(1);

    ParamgenArgs pg;
    CLI::App* paramgen = app.add_subcommand("paramgen", "generate a platform");
    paramgen->add_option("kind", pg.kind, "field or ring")
        ->required()
        ->check(CLI::IsMember({"field", "ring"}));
    paramgen->add_option("--orders", pg.orders, "subgroup orders, comma separated")->required();
    paramgen->add_option("--d", pg.d, "message subgroup order");
    paramgen->add_option("--bits", pg.bits, "target modulus bits (0: smallest)");
    paramgen->add_option("--seed", pg.seed, "rng seed");
    paramgen->add_option("--jobs", pg.jobs, "parallel search workers");
    paramgen->add_flag("--certified", pg.certified, "platform primes carry certificate chains");
    paramgen->add_option("--out", pg.out, "output file");
    paramgen->callback([&] { cmd_paramgen(pg); });

    SetupArgs su;
    CLI::App* setup = app.add_subcommand("setup", "create a dealer and party keys");
    setup->add_option("--variant", su.variant, "v1, v1-, v1+, or v2");
    setup->add_option("--parties", su.parties, "initial pool size")->required();
    setup->add_option("--reserve", su.reserve, "extra subgroups for later joins");
    setup->add_option("--d", su.d, "message subgroup order (v2)");
    setup->add_option("--order-bits", su.order_bits, "bits per hidden order (0: smallest)");
    setup->add_option("--bits", su.bits, "target modulus bits (0: smallest)");
    setup->add_flag("--certified", su.certified, "certified platform primes");
    setup->add_flag("--ring", su.ring, "use Z_pq instead of F_p");
    setup->add_option("--seed", su.seed, "rng seed");
    setup->add_option("--outdir", su.outdir, "output directory");
    setup->callback([&] { cmd_setup(su); });

    PoolArgs pl;
    CLI::App* pool = app.add_subcommand("pool", "admit or retire parties");
    pool->add_option("action", pl.action, "join or leave")
        ->required()
        ->check(CLI::IsMember({"join", "leave"}));
    pool->add_option("--dealer", pl.dealer_file, "dealer file");
    pool->add_option("--party", pl.party, "party id")->required();
    pool->add_option("--outdir", pl.outdir, "where to write new key files");
    pool->callback([&] { cmd_pool(pl); });

    EncryptArgs en;
    CLI::App* encrypt = app.add_subcommand("encrypt", "encrypt for a coalition");
    encrypt->add_option("--dealer", en.dealer_file, "dealer file");
    encrypt->add_option("--coalition", en.coalition, "recipient ids, comma separated")
        ->required();
    encrypt->add_option("--message", en.message, "message residue mod d");
    encrypt->add_option("--seed", en.seed, "rng seed");
    encrypt->add_option("--out", en.out, "output file");
    encrypt->callback([&] { cmd_encrypt(en); });

    ThresholdSetupArgs ts;
    CLI::App* tsetup = app.add_subcommand("threshold-setup", "create a threshold dealer");
    tsetup->add_option("--parties", ts.parties, "pool size s")->required();
    tsetup->add_option("--d", ts.d, "message subgroup order");
    tsetup->add_option("--order-bits", ts.order_bits, "bits per subgroup order (0: smallest)");
    tsetup->add_option("--bits", ts.bits, "target modulus bits (0: smallest)");
    tsetup->add_flag("--certified", ts.certified, "certified platform primes");
    tsetup->add_flag("--ring", ts.ring, "use Z_pq instead of F_p");
    tsetup->add_option("--seed", ts.seed, "rng seed");
    tsetup->add_option("--outdir", ts.outdir, "output directory");
    tsetup->callback([&] { cmd_threshold_setup(ts); });

    ThresholdEncryptArgs te;
    CLI::App* tencrypt = app.add_subcommand("threshold-encrypt", "encrypt under a threshold");
    tencrypt->add_option("--dealer", te.dealer_file, "threshold dealer file");
    tencrypt->add_option("--m", te.m, "threshold for this message")->required();
    tencrypt->add_option("--message", te.message, "message residue mod d");
    tencrypt->add_option("--seed", te.seed, "rng seed");
    tencrypt->add_option("--out", te.out, "output file");
    tencrypt->callback([&] { cmd_threshold_encrypt(te); });

    SessionArgs se;
    CLI::App* session = app.add_subcommand("session", "run a full protocol session");
    session->add_option("flavor", se.flavor, "decrypt, sign, or threshold")
        ->required()
        ->check(CLI::IsMember({"decrypt", "sign", "threshold"}));
    session->add_option("--dealer", se.dealer_file, "dealer file (default: in --keydir)");
    session->add_option("--keydir", se.keydir, "directory with party key files");
    session->add_option("--coalition", se.coalition, "participant ids")->required();
    session->add_option("--message", se.message, "message residue mod d");
    session->add_option("--m", se.m, "threshold (threshold flavor only)");
    session->add_option("--mode", se.mode, "broadcast, room, or server");
    session->add_option("--order", se.order, "seq or shuffle");
    session->add_option("--intruders", se.intruders, "uninvited ids that try to join");
    session->add_option("--virtual", se.virtuals, "dealer-held padding ids");
    session->add_option("--seed", se.seed, "rng seed");
    session->add_option("--out", se.out, "transcript file");
    session->add_option("--doc-out", se.doc_out, "signed document file (sign flavor)");
    session->callback([&] { cmd_session(se); });

    VerifyArgs ve;
    int verify_exit = 0;
    CLI::App* verify = app.add_subcommand("verify-sign", "verify a coalition signature");
    verify->add_option("--dealer", ve.dealer_file, "dealer file");
    verify->add_option("--doc", ve.doc_file, "signed document file");
    verify->add_option("--coalition", ve.coalition, "expected signer ids (default: from doc)");
    verify->callback([&] { verify_exit = cmd_verify_sign(ve); });

    AttackArgs at;
    CLI::App* attack = app.add_subcommand("attack", "order-oracle attack demos");
    attack->add_option("kind", at.kind, "rsa-order or distinguish")
        ->required()
        ->check(CLI::IsMember({"rsa-order", "distinguish"}));
    attack->add_option("--trials", at.trials, "number of trials");
    attack->add_option("--seed", at.seed, "rng seed");
    attack->add_option("--msg-a", at.msg_a, "first candidate message (distinguish)");
    attack->add_option("--msg-b", at.msg_b, "second candidate message (distinguish)");
    attack->add_option("--out", at.out, "CSV report file");
    attack->callback([&] { cmd_attack(at); });

    SelftestArgs st;
    int selftest_exit = 0;
    CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--level", st.level, "desk or full");
    selftest->add_option("--cli", st.cli_path, "CLI binary for the determinism check");
    selftest->callback([&] { selftest_exit = cmd_selftest(st); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 3;
    } catch (const SearchExhausted& e) {
        std::cerr << "search exhausted: " << e.what() << "\n";
        return 4;
    } catch (const PoolExhausted& e) {
        std::cerr << "search exhausted: " << e.what() << "\n";
        return 4;
    } catch (const FactorizationFailed& e) {
        std::cerr << "search exhausted: " << e.what() << "\n";
        return 4;
    } catch (const BadInput& e) {
        std::cerr << "bad arguments: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 5;
    }
    return verify_exit != 0 ? verify_exit : selftest_exit;
}
