// Acceptance suite: every release gate in one binary, one line per gate.
// Exits nonzero if any gate fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "graphene/bench.hpp"
#include "graphene/breach.hpp"
#include "graphene/graphene.hpp"

using namespace graphene;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s — %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t len) {
    Bytes out(len);
    for (auto& b : out) b = std::uint8_t(rng());
    return out;
}

const std::vector<Instantiation> kAllInsts = {
    Instantiation::std_faae, Instantiation::graphene_ae, Instantiation::graphene_poly};
const std::vector<std::uint64_t> kGridN = {1, 16, 1024};
const std::vector<std::uint32_t> kGridLen = {16, 32, 128, 256};

// ---- criterion 1: primitive vectors --------------------------------------

void criterion_1() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why;

    auto expect = [&](bool cond, const char* what) {
        if (!cond && ok) {
            ok = false;
            why = what;
        }
    };

    Bytes zero16(16, 0);
    expect(to_hex(prf_block(zero16, 0)) == "66e94bd4ef8a2c3b884cfa59ca342b2e",
           "AES-128 zero block");

    expect(to_hex(hash({})) ==
               "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855",
           "SHA-256 empty");
    expect(to_hex(hash(Bytes(32, 0))) ==
               "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925",
           "SHA-256 of 32 zero bytes");

    {
        Bytes k(20, 0x0b);
        Bytes m = {'H', 'i', ' ', 'T', 'h', 'e', 'r', 'e'};
        expect(to_hex(hmac_sha256(k, m)) ==
                   "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7",
               "HMAC-SHA-256 RFC 4231 TC1");
    }

    {
        PolyKey key = PolyKey::from_bytes(from_hex(
            "85d6be7857556d337f4452fe42d506a80103808afb0db2fd4abff6af4149f51b"));
        std::string msg = "Cryptographic Forum Research Group";
        Bytes m(msg.begin(), msg.end());
        expect(to_hex(poly_tag(key, m)) == "a8061dc1305136c6c22b8baf0c0127a9",
               "Poly1305 RFC 7539 vector");
    }

    {
        // AES-GCM-128, key 0, IV 0, one zero block, no AAD
        Aes128 aes(zero16);
        std::uint8_t nonce[12] = {};
        Bytes ct = gcm_keystream(aes, nonce, 16);  // zero plaintext
        expect(to_hex(ct) == "0388dace60b6a392f328c2b971b2fe78", "AES-GCM ciphertext");
        std::uint8_t z[16] = {};
        Block128 h;
        aes.encrypt_block(z, h.data());
        Block128 tag = ghash_tag(h, gcm_tag_pad(aes, nonce), ct);
        expect(to_hex(tag) == "ab6e47d42cec13bdf53a67b21257bddf", "AES-GCM tag");
    }

    double dt = seconds_since(t0);
    expect(dt < 1.0, "runtime under 1 s");
    report(1, ok,
           ok ? "primitive vectors byte-exact in " + std::to_string(dt) + " s"
              : "mismatch: " + why);
}

// ---- criterion 2: round-trip grid -----------------------------------------

void criterion_2() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(2020);
    std::size_t trials = 0, failures = 0;
    const std::size_t per_cell = 28;  // 3 x 3 x 4 cells -> 1008 trials

    for (auto inst : kAllInsts) {
        for (auto n : kGridN) {
            for (auto len : kGridLen) {
                auto cfg = InstantiationConfig::defaults(inst, n, len);
                KeyState root = kg_seeded(cfg, random_bytes(rng, 16));
                Engine sender(cfg, root);
                Engine verifier(cfg, root);
                for (std::size_t t = 0; t < per_cell; ++t) {
                    std::vector<Bytes> msgs;
                    msgs.reserve(n);
                    for (std::uint64_t k = 0; k < n; ++k)
                        msgs.push_back(random_bytes(rng, len));
                    if (cfg.offline_online()) sender.precompute_window();
                    SealedBatch sealed =
                        sender.seal(Batch{sender.window_start(), msgs});
                    ++trials;
                    try {
                        if (verifier.verdec(sealed) != msgs) ++failures;
                    } catch (const Error&) {
                        ++failures;
                    }
                }
            }
        }
    }

    double dt = seconds_since(t0);
    bool ok = failures == 0 && trials >= 1000 && dt < 30.0;
    report(2, ok,
           std::to_string(trials) + " randomized round trips, " +
               std::to_string(failures) + " failures, " + std::to_string(dt) + " s");
}

// ---- criterion 3: forgery rejection ---------------------------------------

bool rejected_by(const Engine& verifier, const SealedBatch& b) {
    try {
        return !verifier.aver(b);
    } catch (const Error&) {
        return true;
    }
}

void criterion_3() {
    std::mt19937_64 rng(3030);
    std::size_t accepted_forgeries = 0, flips = 0;
    bool plaintext_leak = false;

    // exhaustive at n=2, 4-byte messages
    for (auto inst : kAllInsts) {
        auto cfg = InstantiationConfig::defaults(inst, 2, 4);
        KeyState root = kg_seeded(cfg, random_bytes(rng, 16));
        Engine sender(cfg, root);
        Engine verifier(cfg, root);
        if (cfg.offline_online()) sender.precompute_window();
        std::vector<Bytes> msgs = {random_bytes(rng, 4), random_bytes(rng, 4)};
        SealedBatch sealed = sender.seal(Batch{sender.window_start(), msgs});

        for (std::size_t item = 0; item < sealed.items.size(); ++item)
            for (std::size_t byte = 0; byte < sealed.items[item].size(); ++byte)
                for (int bit = 0; bit < 8; ++bit) {
                    sealed.items[item][byte] ^= std::uint8_t(1 << bit);
                    ++flips;
                    if (!rejected_by(verifier, sealed)) ++accepted_forgeries;
                    sealed.items[item][byte] ^= std::uint8_t(1 << bit);
                }
        for (std::size_t byte = 0; byte < sealed.aggregate.bytes.size(); ++byte)
            for (int bit = 0; bit < 8; ++bit) {
                sealed.aggregate.bytes[byte] ^= std::uint8_t(1 << bit);
                ++flips;
                if (!rejected_by(verifier, sealed)) ++accepted_forgeries;
                sealed.aggregate.bytes[byte] ^= std::uint8_t(1 << bit);
            }
        for (int bit = 0; bit < 64; ++bit) {
            SealedBatch t = sealed;
            t.start_index ^= std::uint64_t(1) << bit;
            t.aggregate.start_index = t.start_index;
            ++flips;
            if (!rejected_by(verifier, t)) ++accepted_forgeries;
        }

        // abort-before-decrypt: a tampered batch must yield zero plaintext
        SealedBatch tampered = sealed;
        tampered.items[0][0] ^= 1;
        try {
            auto out = verifier.verdec(tampered);
            plaintext_leak = true;  // returned plaintext for a forgery
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::verification_failed) plaintext_leak = true;
        }
        // verifier state must be untouched: the honest batch still decrypts
        try {
            if (verifier.verdec(sealed) != msgs) plaintext_leak = true;
        } catch (const Error&) {
            plaintext_leak = true;
        }
    }
    std::size_t exhaustive_flips = flips;

    // randomized flips at n=1024, 16-byte messages
    for (auto inst : kAllInsts) {
        auto cfg = InstantiationConfig::defaults(inst, 1024, 16);
        KeyState root = kg_seeded(cfg, random_bytes(rng, 16));
        Engine sender(cfg, root);
        Engine verifier(cfg, root);
        if (cfg.offline_online()) sender.precompute_window();
        std::vector<Bytes> msgs;
        for (int k = 0; k < 1024; ++k) msgs.push_back(random_bytes(rng, 16));
        SealedBatch sealed = sender.seal(Batch{sender.window_start(), msgs});

        for (int t = 0; t < 3334; ++t) {
            ++flips;
            switch (rng() % 3) {
                case 0: {
                    std::size_t item = rng() % sealed.items.size();
                    std::size_t byte = rng() % 16;
                    int bit = int(rng() % 8);
                    sealed.items[item][byte] ^= std::uint8_t(1 << bit);
                    if (!rejected_by(verifier, sealed)) ++accepted_forgeries;
                    sealed.items[item][byte] ^= std::uint8_t(1 << bit);
                    break;
                }
                case 1: {
                    std::size_t byte = rng() % sealed.aggregate.bytes.size();
                    int bit = int(rng() % 8);
                    sealed.aggregate.bytes[byte] ^= std::uint8_t(1 << bit);
                    if (!rejected_by(verifier, sealed)) ++accepted_forgeries;
                    sealed.aggregate.bytes[byte] ^= std::uint8_t(1 << bit);
                    break;
                }
                case 2: {
                    SealedBatch t2 = sealed;
                    t2.start_index ^= std::uint64_t(1) << (rng() % 64);
                    t2.aggregate.start_index = t2.start_index;
                    if (!rejected_by(verifier, t2)) ++accepted_forgeries;
                    break;
                }
            }
        }
    }

    bool ok = accepted_forgeries == 0 && !plaintext_leak;
    report(3, ok,
           std::to_string(exhaustive_flips) + " exhaustive + " +
               std::to_string(flips - exhaustive_flips) + " randomized flips, " +
               std::to_string(accepted_forgeries) + " accepted; abort-before-decrypt " +
               (plaintext_leak ? "VIOLATED" : "held"));
}

// ---- criterion 4: mix-and-match, truncation, reordering --------------------

void criterion_4() {
    std::mt19937_64 rng(4040);
    std::size_t trials = 0, accepted = 0;

    for (auto mode : {AggMode::hash, AggMode::xor_fold, AggMode::add_q}) {
        for (auto inst : kAllInsts) {
            auto cfg = InstantiationConfig::defaults(inst, 8, 16);
            cfg.b_agg = mode;
            KeyState root = kg_seeded(cfg, random_bytes(rng, 16));
            Engine sender(cfg, root);
            Engine verifier(cfg, root);

            auto seal_window = [&]() {
                std::vector<Bytes> msgs;
                for (int k = 0; k < 8; ++k) msgs.push_back(random_bytes(rng, 16));
                if (cfg.offline_online()) sender.precompute_window();
                return sender.seal(Batch{sender.window_start(), msgs});
            };
            SealedBatch w1 = seal_window();
            SealedBatch w2 = seal_window();

            for (int t = 0; t < 112; ++t) {  // 112 * 9 combos = 1008 trials
                SealedBatch forged = w1;
                switch (rng() % 4) {
                    case 0:  // truncation to n-1
                        forged.items.pop_back();
                        if (rng() % 2) forged.aggregate.count -= 1;
                        break;
                    case 1: {  // reorder
                        std::size_t a = rng() % 8, b = rng() % 8;
                        if (a == b) b = (b + 1) % 8;
                        std::swap(forged.items[a], forged.items[b]);
                        break;
                    }
                    case 2:  // splice items from the other batch
                        forged.items[rng() % 8] = w2.items[rng() % 8];
                        break;
                    case 3:  // splice the other batch's aggregate
                        forged.aggregate.bytes = w2.aggregate.bytes;
                        break;
                }
                ++trials;
                if (!rejected_by(verifier, forged)) ++accepted;
            }
        }
    }

    bool ok = accepted == 0 && trials >= 1000;
    report(4, ok,
           std::to_string(trials) + " forged constructions across all modes, " +
               std::to_string(accepted) + " accepted");
}

// ---- criterion 5: offline path is an exact oracle of the direct path ------

void criterion_5() {
    std::mt19937_64 rng(5050);
    bool ok = true;
    for (auto n : kGridN) {
        for (auto len : kGridLen) {
            auto oo = InstantiationConfig::defaults(Instantiation::graphene_poly, n, len);
            auto direct = oo;
            direct.b_enc_oo = direct.b_mac_oo = false;
            KeyState root = kg_seeded(oo, random_bytes(rng, 16));
            Engine a(oo, root);
            Engine b(direct, root);
            for (int w = 0; w < 2; ++w) {
                std::vector<Bytes> msgs;
                for (std::uint64_t k = 0; k < n; ++k)
                    msgs.push_back(random_bytes(rng, len));
                a.precompute_window();
                SealedBatch sa = a.seal(Batch{a.window_start(), msgs});
                SealedBatch sb = b.seal(Batch{b.window_start(), msgs});
                if (sa.items != sb.items || !(sa.aggregate == sb.aggregate)) ok = false;
            }
        }
    }
    report(5, ok,
           ok ? "precomputed and direct sealing byte-identical over the grid"
              : "byte mismatch between offline and direct paths");
}

// ---- criterion 6: storage formulas -----------------------------------------

void criterion_6() {
    std::mt19937_64 rng(6060);
    bool ok = true;
    std::string detail;

    for (auto inst : {Instantiation::graphene_ae, Instantiation::graphene_poly}) {
        for (auto n : kGridN) {
            for (auto len : kGridLen) {
                auto cfg = InstantiationConfig::defaults(inst, n, len);
                KeyState root = kg_seeded(cfg, random_bytes(rng, 16));
                OOTable t = precompute(root, cfg);
                std::size_t want = inst == Instantiation::graphene_poly
                                       ? std::size_t(n) * (len + 16)
                                       : std::size_t(n) * len;
                if (table_bytes(t) != want) ok = false;
            }
        }
    }

    {
        auto ae = InstantiationConfig::defaults(Instantiation::graphene_ae, 1024, 16);
        KeyState r1 = kg_seeded(ae, Bytes{6});
        OOTable ta = precompute(r1, ae);
        auto poly = InstantiationConfig::defaults(Instantiation::graphene_poly, 1024, 16);
        KeyState r2 = kg_seeded(poly, Bytes{6});
        OOTable tp = precompute(r2, poly);
        detail = "gcm table " + std::to_string(table_bytes(ta)) + " B, poly table " +
                 std::to_string(table_bytes(tp)) + " B at n=1024, 16-byte messages";
        if (table_bytes(ta) != 16384 || table_bytes(tp) != 32768) ok = false;
    }
    report(6, ok, detail + (ok ? ", grid byte-exact" : ", MISMATCH"));
}

// ---- criterion 7: operational forward security ------------------------------

void criterion_7() {
    std::mt19937_64 rng(7070);
    std::size_t runs = 0, clean = 0;
    std::size_t attempts = 0;
    for (int t = 0; t < 20; ++t) {
        auto inst = t % 2 ? Instantiation::graphene_ae : Instantiation::graphene_poly;
        std::uint64_t sealed = rng() % 9;  // j' anywhere in the window, 0..8
        BreachReport r =
            run_breach_simulation(inst, 8, sealed, 16, random_bytes(rng, 8));
        ++runs;
        attempts += r.decryption_attempts;
        if (r.all_attacks_failed()) ++clean;
    }
    bool ok = clean == runs;
    report(7, ok,
           std::to_string(runs) + " breach drills at random j', " +
               std::to_string(attempts) + " decryption attempts, all " +
               (ok ? "failed as required" : "NOT clean"));
}

// ---- criterion 8: desk-scale performance ------------------------------------

void criterion_8() {
    auto t0 = Clock::now();
    const std::size_t reps = 100;
    auto std_rec = bench_cell(Instantiation::std_faae, 16, 1024, reps);
    auto ae_rec = bench_cell(Instantiation::graphene_ae, 16, 1024, reps);
    auto poly_rec = bench_cell(Instantiation::graphene_poly, 16, 1024, reps);

    double std_online = std_rec[1].ns_per_op;
    double ae_online = ae_rec[1].ns_per_op;
    double poly_online = poly_rec[1].ns_per_op;
    double poly_speedup = std_online / poly_online;
    double ae_speedup = std_online / ae_online;
    bool ordering = poly_online <= ae_online && ae_online <= std_online;
    double dt = seconds_since(t0);

    bool ok = poly_speedup >= 3.0 && ae_speedup >= 1.5 && ordering && dt < 300.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "online ns/msg std=%.0f ae=%.0f poly=%.0f; speedups poly=%.1fx "
                  "ae=%.1fx (floors 3.0/1.5); ordering %s; %.1f s",
                  std_online, ae_online, poly_online, poly_speedup, ae_speedup,
                  ordering ? "holds" : "BROKEN", dt);
    report(8, ok, buf);
}

// ---- criterion 9: wire robustness -------------------------------------------

void criterion_9() {
    std::mt19937_64 rng(9090);
    bool ok = true;
    std::string why;

    // identity over the round-trip grid
    for (auto inst : kAllInsts) {
        for (auto n : {std::uint64_t(1), std::uint64_t(16)}) {
            for (auto len : kGridLen) {
                auto cfg = InstantiationConfig::defaults(inst, n, len);
                KeyState root = kg_seeded(cfg, random_bytes(rng, 16));
                Engine sender(cfg, root);
                if (cfg.offline_online()) sender.precompute_window();
                std::vector<Bytes> msgs;
                for (std::uint64_t k = 0; k < n; ++k)
                    msgs.push_back(random_bytes(rng, len));
                SealedBatch sealed = sender.seal(Batch{sender.window_start(), msgs});
                Bytes wire = encode_batch(sealed);
                SealedBatch back = decode_batch(wire);
                if (encode_batch(back) != wire || back.items != sealed.items ||
                    !(back.aggregate == sealed.aggregate)) {
                    ok = false;
                    why = "round-trip identity broke";
                }
            }
        }
    }

    // 10,000 fuzzed buffers: structured decode errors only
    auto cfg = InstantiationConfig::defaults(Instantiation::graphene_poly, 4, 16);
    KeyState root = kg_seeded(cfg, Bytes{9});
    Engine sender(cfg, root);
    sender.precompute_window();
    std::vector<Bytes> msgs(4, Bytes(16, 0x42));
    Bytes valid = encode_batch(sender.seal(Batch{sender.window_start(), msgs}));

    std::size_t fuzzed = 0;
    for (int t = 0; t < 10000; ++t) {
        Bytes buf;
        if (t % 3 == 0) {
            buf = random_bytes(rng, rng() % 200);
        } else {
            buf = valid;
            for (std::size_t f = 0, flips = 1 + rng() % 10; f < flips; ++f)
                buf[rng() % buf.size()] ^= std::uint8_t(1 + rng() % 255);
            if (t % 4 == 0) buf.resize(rng() % (buf.size() + 1));
        }
        ++fuzzed;
        try {
            decode_batch(buf);  // parsing is allowed to succeed...
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::decode) {  // ...but only fail structurally
                ok = false;
                why = "non-decode error escaped the parser";
            }
        } catch (...) {
            ok = false;
            why = "parser crashed";
        }
    }
    report(9, ok,
           ok ? std::to_string(fuzzed) + " fuzzed buffers handled, grid identity exact"
              : why);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
