#include <sys/wait.h>
#include <unistd.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hkd/amplify.hpp"
#include "hkd/attacks.hpp"
#include "hkd/dhm.hpp"
#include "hkd/keyfile.hpp"
#include "hkd/kljn.hpp"
#include "hkd/rng.hpp"
#include "hkd/session.hpp"
#include "hkd/throughput.hpp"
#include "hkd/wire.hpp"

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_session_artifacts(const std::string& out_dir, const hkd::EveTap& tap,
                             const hkd::PartyResult& alice, const hkd::PartyResult* bob);

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

void finish_out(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os.good()) throw IoError("write to '" + path + "' failed");
}

std::vector<uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    std::vector<uint8_t> bytes{std::istreambuf_iterator<char>(is),
                               std::istreambuf_iterator<char>()};
    if (!is.good() && !is.eof()) throw IoError("read from '" + path + "' failed");
    return bytes;
}

hkd::EveTap read_tap_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    return hkd::read_tap(is);
}

// Unseeded runs draw entropy once and announce it, so any run can be replayed.
uint64_t resolve_seed(const CLI::App* cmd, const std::string& flag, uint64_t value) {
    if (cmd->count(flag) > 0) return value;
    std::random_device rd;
    uint64_t seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
    std::cout << "seed " << seed << "\n";
    return seed;
}

// Default artifacts land in $HKD_OUT_DIR when set, else the working directory.
std::string default_dir() {
    const char* dir = std::getenv("HKD_OUT_DIR");
    return dir && *dir ? dir : ".";
}

std::string joined(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::map<std::string, double> parse_kv_config(const std::string& text) {
    std::map<std::string, double> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad config item '" + item + "' (want key=value)");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

std::optional<std::pair<unsigned, unsigned>> parse_hello_widths(const hkd::EveTap& tap) {
    for (const auto& entry : tap.entries) {
        if (entry.frame.type != hkd::FrameType::Hello) continue;
        const auto& p = entry.frame.payload;
        if (p.size() < 14 || p[0] != 'H' || p[1] != 'K' || p[2] != 'D' || p[3] != '1') continue;
        auto u32 = [&](size_t at) {
            return (unsigned(p[at]) << 24) | (unsigned(p[at + 1]) << 16) |
                   (unsigned(p[at + 2]) << 8) | unsigned(p[at + 3]);
        };
        return std::make_pair(u32(6), u32(10));
    }
    return std::nullopt;
}

hkd::BitString bits_of_text(const std::string& text) {
    std::vector<uint8_t> bytes(text.begin(), text.end());
    return hkd::BitString::from_packed(bytes, bytes.size() * 8);
}

int cmd_keygen(size_t periods, size_t samples, uint64_t seed, size_t amplify_rounds,
               const std::string& out, const std::string& report_path) {
    hkd::KljnConfig config;
    config.periods = periods;
    config.samples_per_period = samples;
    config.seed = seed;
    config.validate();

    hkd::RawExchangeResult exchange = hkd::run_exchange(config);
    hkd::BitString key = exchange.alice_key;
    if (amplify_rounds > 0) key = hkd::xor_amplify(key, amplify_rounds);

    {
        auto os = open_out(out);
        hkd::write_key_file(os, hkd::KeyFile{key, "physical", false});
        finish_out(os, out);
    }
    if (!report_path.empty()) {
        auto os = open_out(report_path);
        hkd::write_exchange_report(os, config, exchange);
        finish_out(os, report_path);
    }
    std::cout << "periods " << periods << "\n"
              << "secure_bits " << exchange.alice_key.size() << "\n"
              << "error_rate " << exchange.error_rate << "\n"
              << "hbk_bits " << key.size() << "\n"
              << "key_file " << out << "\n";
    if (exchange.error_rate > 0)
        std::cout << "warning bit disagreements present; increase --samples\n";
    return 0;
}

int cmd_expand(const std::string& hbk_path, unsigned prime_bits, unsigned k_bits, size_t rounds,
               uint64_t seed, const std::string& mode, const std::string& replenish_from,
               const std::string& replenish_config, bool zero_pool, const std::string& out,
               const std::string& transcript_path, const std::string& tap_path) {
    hkd::DhmParams params;
    params.prime_bits = prime_bits;
    params.k_bits = k_bits;
    params.rounds = rounds;
    params.validate();

    hkd::KeyFile hbk = hkd::read_key_file(hbk_path);
    hkd::BitString material = hbk.material;
    if (zero_pool) material = hkd::BitString::zeros(material.size());  // test-only sabotage

    auto build_pool = [&](hkd::Side side) {
        if (mode == "budget") return hkd::KeyPool(material, hbk.origin);
        auto cfg = parse_kv_config(replenish_config);
        auto num = [&](const char* key, double def) {
            auto it = cfg.find(key);
            return it == cfg.end() ? def : it->second;
        };
        hkd::SessionConfig scfg;
        scfg.replenish_seed = static_cast<uint64_t>(num("seed", 1));
        scfg.amplify_rounds = static_cast<size_t>(num("amplify", 0));
        if (replenish_from == "kljn") {
            hkd::KljnConfig kc;
            kc.periods = static_cast<size_t>(num("periods", 4096));
            kc.samples_per_period = static_cast<size_t>(num("samples", 2000));
            kc.seed = static_cast<uint64_t>(num("seed", 1));
            kc.validate();
            scfg.kljn = kc;
        } else {
            scfg.injected_material = material;  // source kind only; stream is seeded
        }
        return hkd::KeyPool(material, hbk.origin, hkd::make_replenisher(scfg, side));
    };

    hkd::KeyPool alice_pool = build_pool(hkd::Side::Alice);
    hkd::KeyPool bob_pool = build_pool(hkd::Side::Bob);

    hkd::ExpandPairResult pair = hkd::expand_key_lockstep(
        alice_pool, bob_pool, params, hkd::substream_seed(seed, 1), hkd::substream_seed(seed, 2));

    if (!(pair.alice.key.material == pair.bob.key.material)) {
        std::cerr << "error: the two actors derived different keys\n";
        return 1;
    }

    {
        auto os = open_out(out);
        hkd::write_key_file(os, hkd::KeyFile{pair.alice.key.material, "expanded",
                                             pair.alice.partial});
        finish_out(os, out);
    }
    {
        auto os = open_out(transcript_path);
        hkd::write_round_transcript(os, pair.tap, alice_pool.receipts());
        finish_out(os, transcript_path);
    }
    if (!tap_path.empty()) {
        auto os = open_out(tap_path);
        hkd::write_tap(os, pair.tap);
        finish_out(os, tap_path);
    }

    std::cout << "rounds_completed " << pair.alice.rounds_completed << "\n"
              << "rounds_rejected " << pair.alice.rounds_rejected << "\n"
              << "sbk_bits " << pair.alice.key.material.size() << "\n"
              << "pool_bits_consumed " << pair.alice.pool_bits_consumed << "\n"
              << "pool_bits_total " << alice_pool.size() << "\n"
              << "replenished_bits " << alice_pool.size() - material.size() << "\n"
              << "partial " << (pair.alice.partial ? 1 : 0) << "\n"
              << "key_file " << out << "\n";
    return pair.alice.partial ? 3 : 0;
}

int cmd_session(uint64_t seed, const std::string& out_dir,
                const std::vector<std::string>& message_files, size_t message_count,
                size_t message_bytes, size_t periods, size_t samples, size_t amplify_rounds,
                unsigned prime_bits, unsigned k_bits, size_t rounds, const std::string& mode,
                bool two_process) {
    hkd::SessionConfig shared;
    shared.pool_mode = mode == "replenish" ? hkd::PoolMode::Replenish : hkd::PoolMode::Budget;
    shared.dhm.prime_bits = prime_bits;
    shared.dhm.k_bits = k_bits;
    shared.dhm.rounds = rounds;
    hkd::KljnConfig kc;
    kc.periods = periods;
    kc.samples_per_period = samples;
    kc.seed = hkd::substream_seed(seed, 0);
    shared.kljn = kc;
    shared.amplify_rounds = amplify_rounds;
    shared.replenish_seed = hkd::substream_seed(seed, 3);

    std::vector<std::vector<uint8_t>> messages;
    if (!message_files.empty()) {
        for (const auto& path : message_files) messages.push_back(read_file_bytes(path));
    } else {
        for (size_t i = 0; i < message_count; ++i) {
            hkd::Rng mrng(hkd::substream_seed(seed, 100 + i));
            messages.push_back(mrng.next_bits(message_bytes * 8).to_packed());
        }
    }
    shared.data_messages = static_cast<uint32_t>(messages.size());

    hkd::SessionConfig alice_cfg = shared;
    alice_cfg.seed = hkd::substream_seed(seed, 1);
    alice_cfg.messages = messages;
    hkd::SessionConfig bob_cfg = shared;
    bob_cfg.seed = hkd::substream_seed(seed, 2);

    hkd::PartyResult alice, bob;
    hkd::EveTap tap;
    bool have_bob = false;

    if (!two_process) {
        hkd::SessionOutcome outcome = hkd::run_session(alice_cfg, bob_cfg);
        alice = std::move(outcome.alice);
        bob = std::move(outcome.bob);
        tap = std::move(outcome.tap);
        have_bob = true;
    } else {
        int a2b[2], b2a[2];
        if (pipe(a2b) != 0 || pipe(b2a) != 0) throw IoError("pipe() failed");
        pid_t pid = fork();
        if (pid < 0) throw IoError("fork() failed");
        if (pid == 0) {  // child: Bob
            close(a2b[1]);
            close(b2a[0]);
            int code = 1;
            try {
                hkd::FdChannel channel(a2b[0], b2a[1], hkd::Direction::BobToAlice);
                hkd::PartyResult r = hkd::run_party(hkd::Side::Bob, bob_cfg, channel);
                code = hkd::exit_code_for_phase(r.phase);
            } catch (...) {
                code = 4;
            }
            _exit(code);
        }
        close(a2b[0]);
        close(b2a[1]);
        hkd::FdChannel channel(b2a[0], a2b[1], hkd::Direction::AliceToBob);
        alice = hkd::run_party(hkd::Side::Alice, alice_cfg, channel);
        tap = channel.tap();
        int status = 0;
        waitpid(pid, &status, 0);
        close(a2b[1]);
        close(b2a[0]);
        int child_code = WIFEXITED(status) ? WEXITSTATUS(status) : 4;
        int mine = hkd::exit_code_for_phase(alice.phase);
        if (mine == 0 && child_code != 0) mine = child_code;
        write_session_artifacts(out_dir, tap, alice, nullptr);
        std::cout << "alice_phase " << hkd::phase_name(alice.phase) << "\n"
                  << "bob_exit " << child_code << "\n";
        return mine;
    }

    write_session_artifacts(out_dir, tap, alice, have_bob ? &bob : nullptr);
    std::cout << "alice_phase " << hkd::phase_name(alice.phase) << "\n"
              << "bob_phase " << hkd::phase_name(bob.phase) << "\n"
              << "sbk_bits " << (alice.soft_key ? alice.soft_key->material.size() : 0) << "\n"
              << "frames " << tap.entries.size() << "\n";
    if (have_bob && alice.soft_key && bob.soft_key &&
        !(alice.soft_key->material == bob.soft_key->material)) {
        std::cerr << "error: parties disagree on the expanded key\n";
        return 1;
    }
    return hkd::exit_code_for_phase(alice.phase);
}

int cmd_attack(const std::string& name, const std::string& tap_path, const std::string& key_path,
               unsigned prime_bits, unsigned k_bits, int trials, uint64_t seed, size_t periods,
               size_t samples, const std::string& m1, const std::string& m2,
               const std::string& out) {
    hkd::AttackReport report;
    if (name == "kljn-guess") {
        hkd::KljnConfig config;
        config.periods = periods;
        config.samples_per_period = samples;
        config.seed = seed;
        config.validate();
        report = hkd::attack_kljn_guess(hkd::run_exchange(config), config);
    } else if (name == "plain-dhm" || name == "encrypted-dhm") {
        if (tap_path.empty()) throw std::invalid_argument("--tap is required for " + name);
        hkd::EveTap tap = read_tap_file(tap_path);
        unsigned w = prime_bits, k = k_bits;
        if (w == 0 || k == 0) {
            auto widths = parse_hello_widths(tap);
            if (!widths)
                throw std::invalid_argument(
                    "tap has no HELLO frame; pass --prime-bits and --k");
            w = widths->first;
            k = widths->second;
        }
        hkd::BitString truth;
        if (!key_path.empty()) truth = hkd::read_key_file(key_path).material;
        report = name == "plain-dhm"
                     ? hkd::attack_plain_dhm(tap, w, k, truth)
                     : hkd::attack_encrypted_dhm(tap, w, k, truth, trials, seed);
    } else {  // reuse-demo
        hkd::BitString mb1 = bits_of_text(m1);
        hkd::BitString mb2 = bits_of_text(m2);
        hkd::Rng prng(hkd::substream_seed(seed, 7));
        report = hkd::reuse_leak_demo(mb1, mb2, prng.next_bits(mb1.size()));
    }

    if (out.empty()) {
        hkd::write_attack_report(std::cout, report);
    } else {
        auto os = open_out(out);
        hkd::write_attack_report(os, report);
        finish_out(os, out);
    }
    return 0;
}

int cmd_report(double physical_rate, double software_rate, const std::string& session_path,
               uint64_t physical_bits, uint64_t expanded_bits, uint64_t consumed,
               const std::string& out) {
    hkd::ThroughputInputs in;
    in.physical_rate = physical_rate;
    in.software_rate = software_rate;
    if (!session_path.empty()) {
        std::ifstream is(session_path);
        if (!is) throw IoError("cannot open '" + session_path + "' for reading");
        hkd::TranscriptStats stats = hkd::read_transcript_stats(is);
        if (stats.hbk_bits == 0 || stats.sbk_bits == 0)
            throw std::invalid_argument("transcript lacks a stats footer");
        in.physical_bits = stats.hbk_bits;
        in.expanded_bits = stats.sbk_bits;
        in.pool_bits_consumed = stats.hbk_consumed;
    } else {
        in.physical_bits = physical_bits;
        in.expanded_bits = expanded_bits;
        in.pool_bits_consumed = consumed;
    }
    hkd::ThroughputReport report = hkd::compute_throughput(in);
    if (out.empty()) {
        hkd::write_throughput_table(std::cout, in, report);
    } else {
        auto os = open_out(out);
        hkd::write_throughput_table(os, in, report);
        finish_out(os, out);
    }
    return 0;
}

void write_session_artifacts(const std::string& out_dir, const hkd::EveTap& tap,
                             const hkd::PartyResult& alice, const hkd::PartyResult* bob) {
    {
        std::string path = joined(out_dir, "session.tap");
        auto os = open_out(path);
        hkd::write_session_transcript(os, tap, alice);
        finish_out(os, path);
    }
    if (alice.hbk.size() > 0) {
        std::string path = joined(out_dir, "hbk.key");
        auto os = open_out(path);
        hkd::write_key_file(os, hkd::KeyFile{alice.hbk, "physical", false});
        finish_out(os, path);
    }
    if (alice.soft_key && alice.soft_key->material.size() > 0) {
        std::string path = joined(out_dir, "sbk.key");
        auto os = open_out(path);
        hkd::write_key_file(os,
                            hkd::KeyFile{alice.soft_key->material, "expanded", alice.expand.partial});
        finish_out(os, path);
    }
    if (bob) {
        for (size_t i = 0; i < bob->received.size(); ++i) {
            std::string path = joined(out_dir, "msg_" + std::to_string(i) + ".out");
            auto os = open_out(path);
            os.write(reinterpret_cast<const char*>(bob->received[i].data()),
                     static_cast<long>(bob->received[i].size()));
            finish_out(os, path);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    // Two-process mode writes to a pipe whose peer may already be gone; take
    // the EPIPE as a transport error instead of dying on the signal.
    std::signal(SIGPIPE, SIG_IGN);

    CLI::App app{"hybrid physical/software key distribution toolkit"};
    app.require_subcommand(1);

    // keygen
    auto* keygen = app.add_subcommand("keygen", "run the physical exchange and write an HBK");
    size_t kg_periods = 0, kg_samples = 10000, kg_amplify = 0;
    uint64_t kg_seed = 0;
    std::string kg_out, kg_report;
    keygen->add_option("--periods", kg_periods, "bit-exchange periods")
        ->required()
        ->check(CLI::PositiveNumber);
    keygen->add_option("--samples", kg_samples, "noise samples per period")
        ->check(CLI::Range(static_cast<size_t>(2), std::numeric_limits<size_t>::max()));
    keygen->add_option("--seed", kg_seed, "simulation seed");
    keygen->add_option("--amplify-rounds", kg_amplify, "XOR privacy-amplification rounds");
    keygen->add_option("-o,--out", kg_out, "key file path");
    keygen->add_option("--report", kg_report, "exchange report path");

    // expand
    auto* expand = app.add_subcommand("expand", "grow an HBK into a software key");
    std::string ex_hbk, ex_mode = "budget", ex_from = "seed", ex_rcfg, ex_out, ex_tr, ex_tap;
    unsigned ex_w = 256, ex_k = 128;
    size_t ex_rounds = 8;
    uint64_t ex_seed = 0;
    bool ex_zero = false;
    expand->add_option("--hbk", ex_hbk, "HBK key file")->required();
    expand->add_option("--prime-bits", ex_w, "prime width in bits");
    expand->add_option("--k", ex_k, "segment bits per round");
    expand->add_option("--rounds", ex_rounds, "expansion rounds")->check(CLI::PositiveNumber);
    expand->add_option("--seed", ex_seed, "secret-exponent seed");
    expand->add_option("--mode", ex_mode, "pool mode")
        ->check(CLI::IsMember({"budget", "replenish"}));
    expand->add_option("--replenish-from", ex_from, "replenish source")
        ->check(CLI::IsMember({"seed", "kljn"}));
    expand->add_option("--replenish-config", ex_rcfg,
                       "source parameters, e.g. periods=4096,samples=2000,seed=1,amplify=1");
    expand->add_flag("--zero-pool", ex_zero,
                     "test-only: replace the pool with zeros (frames become cleartext)");
    expand->add_option("-o,--out", ex_out, "SBK key file path");
    expand->add_option("--transcript", ex_tr, "round transcript path");
    expand->add_option("--tap", ex_tap, "raw wire tap path");

    // session
    auto* session = app.add_subcommand("session", "run the full two-party pipeline");
    bool se_demo = false, se_two = false;
    uint64_t se_seed = 0;
    std::string se_dir, se_mode = "budget";
    std::vector<std::string> se_files;
    size_t se_msgs = 1, se_msg_bytes = 24, se_periods = 12000, se_samples = 2000,
           se_amplify = 1, se_rounds = 8;
    unsigned se_w = 64, se_k = 32;
    session->add_flag("--demo", se_demo, "run the built-in demonstration");
    session->add_option("--seed", se_seed, "master seed");
    session->add_option("-o,--out-dir", se_dir, "artifact directory");
    session->add_option("--message-file", se_files, "send this file's bytes as a data message");
    session->add_option("--messages", se_msgs, "number of synthetic data messages");
    session->add_option("--message-bytes", se_msg_bytes, "synthetic message size");
    session->add_option("--periods", se_periods, "physical-exchange periods")
        ->check(CLI::PositiveNumber);
    session->add_option("--samples", se_samples, "noise samples per period");
    session->add_option("--amplify-rounds", se_amplify, "privacy-amplification rounds");
    session->add_option("--prime-bits", se_w, "prime width in bits");
    session->add_option("--k", se_k, "segment bits per round");
    session->add_option("--rounds", se_rounds, "expansion rounds");
    session->add_option("--mode", se_mode, "pool mode")
        ->check(CLI::IsMember({"budget", "replenish"}));
    session->add_flag("--two-process", se_two, "run the actors as separate processes");

    // attack
    auto* attack = app.add_subcommand("attack", "run an eavesdropper analysis");
    std::string at_name, at_tap, at_key, at_out;
    std::string at_m1 = "attack at dawn", at_m2 = "attack at dusk";
    unsigned at_w = 0, at_k = 0;
    int at_trials = 16;
    uint64_t at_seed = 0;
    size_t at_periods = 2048, at_samples = 1000;
    attack->add_option("--name", at_name, "attack to run")
        ->required()
        ->check(CLI::IsMember({"kljn-guess", "plain-dhm", "encrypted-dhm", "reuse-demo"}));
    attack->add_option("--tap", at_tap, "wire tap or session transcript");
    attack->add_option("--key", at_key, "true key file for scoring");
    attack->add_option("--prime-bits", at_w, "wire field width (default: from HELLO)");
    attack->add_option("--k", at_k, "segment bits (default: from HELLO)");
    attack->add_option("--trials", at_trials, "MI bias-calibration trials");
    attack->add_option("--seed", at_seed, "analysis seed");
    attack->add_option("--periods", at_periods, "kljn-guess: exchange periods");
    attack->add_option("--samples", at_samples, "kljn-guess: samples per period");
    attack->add_option("--m1", at_m1, "reuse-demo: first message");
    attack->add_option("--m2", at_m2, "reuse-demo: second message");
    attack->add_option("-o,--out", at_out, "report path (default: stdout)");

    // report
    auto* report = app.add_subcommand("report", "throughput comparison table");
    double rp_phys = 0.0, rp_soft = 0.0;
    std::string rp_session, rp_out;
    uint64_t rp_n = 0, rp_m = 0, rp_c = 0;
    report->add_option("--physical-rate", rp_phys, "physical exchange rate, bits/s")
        ->required()
        ->check(CLI::PositiveNumber);
    report->add_option("--software-rate", rp_soft, "software expansion rate, bits/s")
        ->required()
        ->check(CLI::PositiveNumber);
    report->add_option("--session", rp_session, "session transcript with a stats footer");
    report->add_option("--physical-bits", rp_n, "HBK bits (alternative to --session)");
    report->add_option("--expanded-bits", rp_m, "SBK bits (alternative to --session)");
    report->add_option("--consumed", rp_c, "HBK bits consumed (alternative to --session)");
    report->add_option("-o,--out", rp_out, "table path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (keygen->parsed()) {
            uint64_t seed = resolve_seed(keygen, "--seed", kg_seed);
            return cmd_keygen(kg_periods, kg_samples, seed, kg_amplify,
                              kg_out.empty() ? joined(default_dir(), "hbk.key") : kg_out,
                              kg_report);
        }
        if (expand->parsed()) {
            uint64_t seed = resolve_seed(expand, "--seed", ex_seed);
            return cmd_expand(ex_hbk, ex_w, ex_k, ex_rounds, seed, ex_mode, ex_from, ex_rcfg,
                              ex_zero, ex_out.empty() ? joined(default_dir(), "sbk.key") : ex_out,
                              ex_tr.empty() ? joined(default_dir(), "rounds.log") : ex_tr, ex_tap);
        }
        if (session->parsed()) {
            if (!se_demo) throw std::invalid_argument("session requires --demo");
            uint64_t seed = resolve_seed(session, "--seed", se_seed);
            return cmd_session(seed, se_dir.empty() ? default_dir() : se_dir, se_files, se_msgs,
                               se_msg_bytes, se_periods, se_samples, se_amplify, se_w, se_k,
                               se_rounds, se_mode, se_two);
        }
        if (attack->parsed()) {
            uint64_t seed = resolve_seed(attack, "--seed", at_seed);
            return cmd_attack(at_name, at_tap, at_key, at_w, at_k, at_trials, seed, at_periods,
                              at_samples, at_m1, at_m2, at_out);
        }
        if (report->parsed()) {
            if (rp_session.empty() && (rp_n == 0 || rp_m == 0))
                throw std::invalid_argument(
                    "pass --session or both --physical-bits and --expanded-bits");
            return cmd_report(rp_phys, rp_soft, rp_session, rp_n, rp_m, rp_c, rp_out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const hkd::PoolExhausted& e) {
        std::cerr << "exhausted: " << e.what() << "\n";
        return 3;
    } catch (const hkd::ProtocolError& e) {
        std::cerr << "aborted: " << e.what() << "\n";
        return 4;
    } catch (const hkd::TransportError& e) {
        std::cerr << "transport failure: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
