#ifndef GRAPHENE_OOTABLE_HPP
#define GRAPHENE_OOTABLE_HPP

#include <utility>
#include <vector>

#include "graphene/keychain.hpp"

namespace graphene {

/// One batch window of precomputed per-index material: encryption
/// keystreams r_j and one-time MAC keys r_j'. Entries are consume-once;
/// a consumed slot is wiped and stays empty. Single-owner, move-only.
struct OOTable {
    Instantiation instantiation = Instantiation::graphene_poly;
    std::uint64_t start_index = 0;
    std::uint32_t count = 0;
    std::uint32_t max_msg_len = 0;
    std::vector<Bytes> enc_entries;
    std::vector<Bytes> mac_entries;

    OOTable() = default;
    OOTable(const OOTable&) = delete;
    OOTable& operator=(const OOTable&) = delete;
    OOTable(OOTable&&) = default;
    OOTable& operator=(OOTable&&) = default;

    ~OOTable() { wipe(); }

    void wipe() {
        for (auto& e : enc_entries) secure_wipe(e);
        for (auto& e : mac_entries) secure_wipe(e);
        enc_entries.clear();
        mac_entries.clear();
    }

    bool covers(std::uint64_t first, std::uint64_t n) const {
        return first == start_index && n == count;
    }
};

/// MAC-entry width: a 16-byte tag-derivation key for the GCM instantiation,
/// a 32-byte Poly1305 key pair otherwise.
inline std::size_t mac_entry_width(Instantiation inst) {
    return inst == Instantiation::graphene_poly ? 32 : 16;
}

/// Fills one window [i, i+n) of per-index material and advances the key
/// state past the window. The chain key that produced the table is gone
/// when this returns.
inline OOTable precompute(KeyState& state, const InstantiationConfig& config) {
    config.validate();
    if (!config.offline_online())
        fail(ErrorKind::invalid_config, "precompute requires the offline-online flags");
    if (config.instantiation == Instantiation::std_faae)
        fail(ErrorKind::invalid_config, "std-faae has no precomputed table");

    OOTable t;
    t.instantiation = config.instantiation;
    t.start_index = state.index;
    t.count = std::uint32_t(config.n);
    t.max_msg_len = config.max_msg_len;
    t.enc_entries.resize(config.n);
    t.mac_entries.resize(config.n);

    for (std::uint64_t k = 0; k < config.n; ++k) {
        std::uint64_t j = state.index + k;
        Bytes s_j = derive_intra(state, config, j, KeyRole::enc, 16);
        if (config.instantiation == Instantiation::graphene_poly) {
            t.enc_entries[k] = keystream(s_j, config.max_msg_len);
            secure_wipe(s_j);
            t.mac_entries[k] = derive_intra(state, config, j, KeyRole::mac, 32);
        } else {
            // GCM layout: keystream counters from 2 under nonce BE96(j);
            // s_j itself is the per-index MAC entry, consumed at tag time.
            Aes128 aes(s_j);
            std::uint8_t nonce[12] = {};
            store64_be(nonce + 4, j);
            t.enc_entries[k] = gcm_keystream(aes, nonce, config.max_msg_len);
            t.mac_entries[k] = std::move(s_j);
        }
    }

    upd_window(state, config.n);
    return t;
}

namespace detail {

inline void check_window(const OOTable& t, std::uint64_t j) {
    if (j < t.start_index || j - t.start_index >= t.count)
        fail(ErrorKind::out_of_window, "index " + std::to_string(j) +
                                           " outside table window starting at " +
                                           std::to_string(t.start_index));
}

inline Bytes take_entry(std::vector<Bytes>& side, const OOTable& t, std::uint64_t j) {
    check_window(t, j);
    Bytes& slot = side[std::size_t(j - t.start_index)];
    if (slot.empty())
        fail(ErrorKind::reuse, "entry " + std::to_string(j) + " already consumed");
    Bytes out = slot;
    secure_wipe(slot);
    slot.clear();
    slot.shrink_to_fit();
    return out;
}

}  // namespace detail

inline Bytes take_enc(OOTable& t, std::uint64_t j) {
    return detail::take_entry(t.enc_entries, t, j);
}

inline Bytes take_mac(OOTable& t, std::uint64_t j) {
    return detail::take_entry(t.mac_entries, t, j);
}

/// Live precomputed bytes as the analytical storage model charges them:
/// keystream bytes per entry, plus kappa bits per live MAC entry on the
/// Poly1305 side. (The GCM instantiation's retained tag-derivation keys
/// are not charged by the model; see live_bytes for raw residency.)
inline std::size_t table_bytes(const OOTable& t) {
    std::size_t enc_live = 0, mac_live = 0;
    for (const auto& e : t.enc_entries)
        if (!e.empty()) ++enc_live;
    for (const auto& e : t.mac_entries)
        if (!e.empty()) ++mac_live;
    std::size_t total = enc_live * t.max_msg_len;
    if (t.instantiation == Instantiation::graphene_poly) total += mac_live * 16;
    return total;
}

/// Raw unconsumed bytes actually resident in the table.
inline std::size_t live_bytes(const OOTable& t) {
    std::size_t total = 0;
    for (const auto& e : t.enc_entries) total += e.size();
    for (const auto& e : t.mac_entries) total += e.size();
    return total;
}

// --- table file format ---------------------------------------------------
// "GOT1" | instantiation (1) | start_index (8 BE) | count (4 BE) |
// max_msg_len (4 BE) | enc presence bitmap | mac presence bitmap |
// live entries in index order (enc_j, then mac_j)

inline Bytes serialize_table(const OOTable& t) {
    Bytes out;
    out.insert(out.end(), {'G', 'O', 'T', '1'});
    out.push_back(std::uint8_t(t.instantiation));
    std::uint8_t buf[8];
    store64_be(buf, t.start_index);
    out.insert(out.end(), buf, buf + 8);
    store32_be(buf, t.count);
    out.insert(out.end(), buf, buf + 4);
    store32_be(buf, t.max_msg_len);
    out.insert(out.end(), buf, buf + 4);

    std::size_t bitmap_len = (t.count + 7) / 8;
    auto emit_bitmap = [&](const std::vector<Bytes>& side) {
        Bytes bm(bitmap_len, 0);
        for (std::size_t k = 0; k < side.size(); ++k)
            if (!side[k].empty()) bm[k / 8] |= std::uint8_t(1 << (k % 8));
        out.insert(out.end(), bm.begin(), bm.end());
    };
    emit_bitmap(t.enc_entries);
    emit_bitmap(t.mac_entries);

    for (std::size_t k = 0; k < t.count; ++k) {
        if (!t.enc_entries[k].empty())
            out.insert(out.end(), t.enc_entries[k].begin(), t.enc_entries[k].end());
        if (!t.mac_entries[k].empty())
            out.insert(out.end(), t.mac_entries[k].begin(), t.mac_entries[k].end());
    }
    return out;
}

inline OOTable deserialize_table(ByteView in) {
    if (in.size() < 21) fail(ErrorKind::decode, "table record truncated");
    if (std::memcmp(in.data(), "GOT1", 4) != 0)
        fail(ErrorKind::decode, "bad table magic");
    OOTable t;
    std::uint8_t inst = in[4];
    if (inst != std::uint8_t(Instantiation::graphene_ae) &&
        inst != std::uint8_t(Instantiation::graphene_poly))
        fail(ErrorKind::decode, "bad table instantiation");
    t.instantiation = Instantiation(inst);
    t.start_index = load64_be(in.data() + 5);
    t.count = load32_be(in.data() + 13);
    t.max_msg_len = load32_be(in.data() + 17);
    if (t.count == 0 || t.max_msg_len == 0)
        fail(ErrorKind::decode, "bad table dimensions");

    std::size_t bitmap_len = (std::size_t(t.count) + 7) / 8;
    std::size_t off = 21;
    if (in.size() < off + 2 * bitmap_len) fail(ErrorKind::decode, "table bitmap truncated");
    const std::uint8_t* enc_bm = in.data() + off;
    const std::uint8_t* mac_bm = enc_bm + bitmap_len;
    off += 2 * bitmap_len;

    std::size_t mac_w = mac_entry_width(t.instantiation);
    t.enc_entries.resize(t.count);
    t.mac_entries.resize(t.count);
    for (std::size_t k = 0; k < t.count; ++k) {
        bool enc_live = enc_bm[k / 8] & (1 << (k % 8));
        bool mac_live = mac_bm[k / 8] & (1 << (k % 8));
        if (enc_live) {
            if (in.size() < off + t.max_msg_len)
                fail(ErrorKind::decode, "table entry truncated at offset " +
                                            std::to_string(off));
            t.enc_entries[k].assign(in.begin() + off, in.begin() + off + t.max_msg_len);
            off += t.max_msg_len;
        }
        if (mac_live) {
            if (in.size() < off + mac_w)
                fail(ErrorKind::decode, "table entry truncated at offset " +
                                            std::to_string(off));
            t.mac_entries[k].assign(in.begin() + off, in.begin() + off + mac_w);
            off += mac_w;
        }
    }
    if (off != in.size()) fail(ErrorKind::decode, "trailing bytes after table entries");
    return t;
}

}  // namespace graphene

#endif
