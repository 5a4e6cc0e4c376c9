#ifndef GRAPHENE_BREACH_HPP
#define GRAPHENE_BREACH_HPP

#include <random>
#include <string>
#include <vector>

#include "graphene/graphene.hpp"

namespace graphene {

/// Outcome of one breach simulation: the sender is compromised mid-window
/// at absolute index j', the adversary gets a byte-exact snapshot of the
/// live state, and then attacks all earlier traffic with it.
struct BreachReport {
    std::uint64_t compromise_index = 0;  // j': first index not yet sealed
    std::uint64_t window_start = 0;      // start of the breached window
    std::uint64_t n = 0;
    std::size_t snapshot_bytes = 0;
    std::size_t candidate_keys = 0;
    std::size_t prior_ciphertexts = 0;
    std::size_t decryption_attempts = 0;
    std::size_t decryption_successes = 0;
    std::size_t forgery_attempts = 0;
    std::size_t forgery_successes = 0;
    bool consumed_material_absent = false;  // byte-scan of the snapshot
    bool honest_batches_still_verify = false;

    bool all_attacks_failed() const {
        return decryption_successes == 0 && forgery_successes == 0 &&
               consumed_material_absent && honest_batches_still_verify;
    }
};

namespace detail {

struct Snapshot {
    KeyState keys;
    std::optional<OOTable> table;
};

inline Snapshot parse_snapshot(ByteView snap) {
    if (snap.size() < 13) fail(ErrorKind::decode, "snapshot truncated");
    std::size_t kb = snap[4];
    std::size_t key_rec = 13 + 2 * kb;
    if (snap.size() < key_rec) fail(ErrorKind::decode, "snapshot truncated");
    Snapshot out;
    out.keys = import_key_state(ByteView(snap.data(), key_rec));
    if (snap.size() > key_rec)
        out.table = deserialize_table(ByteView(snap.data() + key_rec,
                                               snap.size() - key_rec));
    return out;
}

inline bool scan(ByteView haystack, ByteView needle) {
    if (needle.empty() || haystack.size() < needle.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (std::memcmp(haystack.data() + i, needle.data(), needle.size()) == 0)
            return true;
    }
    return false;
}

}  // namespace detail

/// Runs the store-and-forward breach drill: `prior_windows` full windows are
/// sealed and held in transit, the next window is sealed up to j' and the
/// sender state is captured there. Every 16-byte key recoverable from the
/// snapshot (chain keys, their forward hash evolutions, live table entries
/// and entry halves) is tried against every earlier ciphertext, and the
/// in-transit batches are attacked with bit flips, truncation, reordering
/// and cross-window splices.
inline BreachReport run_breach_simulation(Instantiation inst, std::uint64_t n,
                                          std::uint64_t sealed_in_window,
                                          std::uint32_t msg_len, ByteView seed,
                                          std::size_t prior_windows = 2,
                                          std::size_t forgery_trials = 64) {
    if (sealed_in_window > n)
        fail(ErrorKind::invalid_argument, "cannot seal past the window");
    auto cfg = InstantiationConfig::defaults(inst, n, msg_len);
    if (!cfg.offline_online())
        fail(ErrorKind::invalid_config, "breach drill targets the offline-online paths");

    KeyState root = kg_seeded(cfg, seed);
    Engine sender(cfg, root, /*allow_snapshot=*/true);
    Engine verifier(cfg, root);

    std::mt19937_64 rng(0x6272656163680000ULL ^ n ^ sealed_in_window);
    auto rand_msg = [&]() {
        Bytes m(msg_len);
        for (auto& b : m) b = std::uint8_t(rng());
        return m;
    };

    // phase 1: full windows sealed and held in transit
    std::vector<std::vector<Bytes>> plaintexts;
    std::vector<SealedBatch> in_transit;
    for (std::size_t w = 0; w < prior_windows; ++w) {
        std::vector<Bytes> msgs;
        for (std::uint64_t k = 0; k < n; ++k) msgs.push_back(rand_msg());
        sender.precompute_window();
        in_transit.push_back(sender.seal(Batch{sender.window_start(), msgs}));
        plaintexts.push_back(std::move(msgs));
    }

    // phase 2: breach mid-window after sealing `sealed_in_window` items
    BreachReport report;
    report.n = n;
    sender.precompute_window();
    report.window_start = sender.window_start();
    sender.begin_seal(report.window_start);
    std::vector<Bytes> breach_plain, breach_cipher;
    for (std::uint64_t k = 0; k < sealed_in_window; ++k) {
        Bytes m = rand_msg();
        breach_cipher.push_back(sender.seal_next(m));
        breach_plain.push_back(std::move(m));
    }
    report.compromise_index = report.window_start + sealed_in_window;

    Bytes snap = sender.snapshot_for_breach();
    report.snapshot_bytes = snap.size();

    // the snapshot must not contain consumed per-index material
    report.consumed_material_absent = true;
    {
        KeyState pristine = root;
        for (std::size_t w = 0; w < prior_windows; ++w) upd_window(pristine, n);
        // pristine now sits at the breached window start
        InstantiationConfig probe = cfg;
        for (std::uint64_t k = 0; k < sealed_in_window; ++k) {
            std::uint64_t j = report.window_start + k;
            Bytes s_j = derive_intra(pristine, probe, j, KeyRole::enc, 16);
            if (detail::scan(snap, s_j)) report.consumed_material_absent = false;
            Bytes ks = inst == Instantiation::graphene_poly
                           ? keystream(s_j, msg_len)
                           : Bytes{};
            if (!ks.empty() && detail::scan(snap, ks))
                report.consumed_material_absent = false;
        }
        if (detail::scan(snap, root.sk_view())) report.consumed_material_absent = false;
    }

    // candidate keys the adversary can extract from the snapshot
    detail::Snapshot parsed = detail::parse_snapshot(snap);
    std::vector<Bytes> candidates;
    auto add16 = [&](ByteView v) {
        if (v.size() >= 16) candidates.emplace_back(v.begin(), v.begin() + 16);
    };
    add16(parsed.keys.sk_view());
    add16(parsed.keys.sk_prime_view());
    {
        // hash-chain forward recomputation: yields only future keys
        KeyState fwd = parsed.keys;
        for (int step = 0; step < 4; ++step) {
            upd(fwd);
            add16(fwd.sk_view());
            add16(fwd.sk_prime_view());
        }
        fwd.wipe();
    }
    if (parsed.table) {
        for (const auto& e : parsed.table->enc_entries) {
            if (!e.empty()) add16(e);
        }
        for (const auto& e : parsed.table->mac_entries) {
            if (e.empty()) continue;
            add16(e);
            if (e.size() == 32) add16(ByteView(e.data() + 16, 16));
        }
    }
    report.candidate_keys = candidates.size();

    // phase 3: decryption attacks on all earlier ciphertexts
    auto attack_one = [&](const Bytes& c, const Bytes& m) {
        for (const auto& key : candidates) {
            // (a) candidate as a raw pad
            if (c.size() <= 16) {
                Bytes guess = c;
                xor_into(guess.data(), key.data(), guess.size());
                ++report.decryption_attempts;
                if (guess == m) ++report.decryption_successes;
            }
            // (b) candidate as a keystream key, both counter layouts
            Bytes ks = keystream(key, c.size());
            Bytes guess = c;
            xor_into(guess.data(), ks.data(), guess.size());
            ++report.decryption_attempts;
            if (guess == m) ++report.decryption_successes;
            // (c) candidate as a chain key: replay the per-index derivation
            for (std::uint64_t j = 0; j < 4; ++j) {
                Block128 s = prf_block(key, j + 1);
                Bytes ks2 = keystream(ByteView(s.data(), 16), c.size());
                Bytes g2 = c;
                xor_into(g2.data(), ks2.data(), g2.size());
                ++report.decryption_attempts;
                if (g2 == m) ++report.decryption_successes;
            }
        }
    };
    for (std::size_t w = 0; w < prior_windows; ++w) {
        for (std::uint64_t k = 0; k < n; ++k) {
            ++report.prior_ciphertexts;
            attack_one(in_transit[w].items[k], plaintexts[w][k]);
        }
    }
    for (std::uint64_t k = 0; k < sealed_in_window; ++k) {
        ++report.prior_ciphertexts;
        attack_one(breach_cipher[k], breach_plain[k]);
    }

    // phase 4: forgery attacks on the in-transit batches
    auto rejected = [&](const SealedBatch& forged) {
        try {
            return !verifier.aver(forged);
        } catch (const Error&) {
            return true;
        }
    };
    const SealedBatch& target = in_transit[0];
    for (std::size_t t = 0; t < forgery_trials; ++t) {
        SealedBatch forged = target;
        switch (t % 4) {
            case 0: {  // bit flip in a ciphertext
                auto& item = forged.items[rng() % forged.items.size()];
                if (!item.empty()) item[rng() % item.size()] ^= std::uint8_t(1 << (rng() % 8));
                break;
            }
            case 1:  // bit flip in the aggregate
                forged.aggregate.bytes[rng() % forged.aggregate.bytes.size()] ^=
                    std::uint8_t(1 << (rng() % 8));
                break;
            case 2:  // truncate and claim a smaller window
                forged.items.pop_back();
                forged.aggregate.count -= 1;
                break;
            case 3:  // splice from the other window
                if (in_transit.size() > 1)
                    forged.items[rng() % forged.items.size()] =
                        in_transit[1].items[rng() % n];
                break;
        }
        ++report.forgery_attempts;
        if (!rejected(forged)) ++report.forgery_successes;
    }

    // the honest traffic still goes through afterwards
    report.honest_batches_still_verify = true;
    for (std::size_t w = 0; w < prior_windows; ++w) {
        try {
            if (verifier.verdec(in_transit[w]) != plaintexts[w])
                report.honest_batches_still_verify = false;
        } catch (const Error&) {
            report.honest_batches_still_verify = false;
        }
    }
    return report;
}

}  // namespace graphene

#endif
