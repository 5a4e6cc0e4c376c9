#ifndef GRAPHENE_KEYCHAIN_HPP
#define GRAPHENE_KEYCHAIN_HPP

#include <cstdio>
#include <cstring>

#include "graphene/config.hpp"
#include "graphene/primitives.hpp"

namespace graphene {

/// Evolving private key pair (sk_i, sk_i') plus the absolute index i.
/// Keys live in fixed arrays so evolution never leaves stale heap copies.
struct KeyState {
    std::uint64_t index = 0;
    std::uint32_t kappa = 128;
    std::array<std::uint8_t, 32> sk{};
    std::array<std::uint8_t, 32> sk_prime{};

    std::size_t key_bytes() const { return kappa / 8; }

    ByteView sk_view() const { return ByteView(sk.data(), key_bytes()); }
    ByteView sk_prime_view() const { return ByteView(sk_prime.data(), key_bytes()); }

    /// 16-byte PRF keys; for kappa=256 the chain key is truncated to the
    /// AES-128 width.
    ByteView prf_key() const { return ByteView(sk.data(), 16); }
    ByteView prf_key_prime() const { return ByteView(sk_prime.data(), 16); }

    void wipe() {
        secure_wipe(sk);
        secure_wipe(sk_prime);
        index = 0;
    }

    bool operator==(const KeyState&) const = default;
};

namespace detail {

inline void fill_random(std::uint8_t* out, std::size_t len) {
    std::FILE* f = std::fopen("/dev/urandom", "rb");
    if (!f) fail(ErrorKind::key_generation, "cannot open entropy source");
    std::size_t got = std::fread(out, 1, len, f);
    std::fclose(f);
    if (got != len) fail(ErrorKind::key_generation, "entropy source exhausted");
}

inline void hash_step(std::array<std::uint8_t, 32>& key, std::size_t key_bytes) {
    Digest256 next = sha256(ByteView(key.data(), key_bytes));
    secure_wipe(key);
    std::memcpy(key.data(), next.data(), key_bytes);
    secure_wipe(next);
}

}  // namespace detail

/// Generates the root key pair at index 1 from fresh entropy.
inline KeyState kg(const InstantiationConfig& config) {
    config.validate();
    KeyState s;
    s.kappa = config.kappa;
    s.index = 1;
    detail::fill_random(s.sk.data(), s.key_bytes());
    detail::fill_random(s.sk_prime.data(), s.key_bytes());
    return s;
}

/// Deterministic root key derivation from one seed: the two components are
/// hash(seed || 0x00) and hash(seed || 0x01), truncated to kappa bits.
inline KeyState kg_seeded(const InstantiationConfig& config, ByteView seed) {
    config.validate();
    if (seed.empty()) fail(ErrorKind::key_generation, "empty seed");
    KeyState s;
    s.kappa = config.kappa;
    s.index = 1;
    Bytes buf(seed.begin(), seed.end());
    buf.push_back(0x00);
    Digest256 d0 = sha256(buf);
    buf.back() = 0x01;
    Digest256 d1 = sha256(buf);
    std::memcpy(s.sk.data(), d0.data(), s.key_bytes());
    std::memcpy(s.sk_prime.data(), d1.data(), s.key_bytes());
    secure_wipe(d0);
    secure_wipe(d1);
    secure_wipe(buf);
    return s;
}

/// One-way evolution step: both chain keys are hashed forward, the index
/// advances by one, and the previous key bytes are gone on return.
inline void upd(KeyState& state) {
    if (state.index == UINT64_MAX)
        fail(ErrorKind::chain_exhausted, "key chain index would overflow");
    detail::hash_step(state.sk, state.key_bytes());
    detail::hash_step(state.sk_prime, state.key_bytes());
    state.index += 1;
}

/// Window-granular evolution used on the offline-online path: one hash
/// application per chain, index jumps from i to i + n + 1.
inline void upd_window(KeyState& state, std::uint64_t n) {
    if (state.index > UINT64_MAX - n - 1)
        fail(ErrorKind::chain_exhausted, "key chain index would overflow");
    detail::hash_step(state.sk, state.key_bytes());
    detail::hash_step(state.sk_prime, state.key_bytes());
    state.index += n + 1;
}

enum class KeyRole { enc, mac };

/// Derives per-index one-time key material inside the current window
/// [index, index + n). Width 16 is a single PRF block; width 32 (Poly1305
/// key pairs) uses PRF inputs 2j and 2j+1 so the two widths never collide.
inline Bytes derive_intra(const KeyState& state, const InstantiationConfig& config,
                          std::uint64_t j, KeyRole role, std::size_t width) {
    if (width != 16 && width != 32)
        fail(ErrorKind::invalid_argument, "derive width must be 16 or 32");
    if (j < state.index || j - state.index >= config.n)
        fail(ErrorKind::out_of_window, "index " + std::to_string(j) +
                                           " outside window starting at " +
                                           std::to_string(state.index));
    ByteView key = role == KeyRole::enc ? state.prf_key() : state.prf_key_prime();
    if (width == 16) {
        Block128 b = prf_block(key, j);
        return Bytes(b.begin(), b.end());
    }
    if (j > (UINT64_MAX - 1) / 2)
        fail(ErrorKind::invalid_argument, "index too large for wide derivation");
    Block128 lo = prf_block(key, 2 * j);
    Block128 hi = prf_block(key, 2 * j + 1);
    Bytes out(32);
    std::memcpy(out.data(), lo.data(), 16);
    std::memcpy(out.data() + 16, hi.data(), 16);
    secure_wipe(lo);
    secure_wipe(hi);
    return out;
}

// --- fixed binary record (verifier persistence and tests) ---------------
// "GKS1" | key bytes (1, 16 or 32) | index (8 BE) | sk | sk'

inline Bytes export_key_state(const KeyState& state) {
    Bytes out;
    out.reserve(13 + 2 * state.key_bytes());
    out.insert(out.end(), {'G', 'K', 'S', '1'});
    out.push_back(std::uint8_t(state.key_bytes()));
    std::uint8_t idx[8];
    store64_be(idx, state.index);
    out.insert(out.end(), idx, idx + 8);
    out.insert(out.end(), state.sk.begin(), state.sk.begin() + state.key_bytes());
    out.insert(out.end(), state.sk_prime.begin(),
               state.sk_prime.begin() + state.key_bytes());
    return out;
}

inline KeyState import_key_state(ByteView record) {
    if (record.size() < 13) fail(ErrorKind::decode, "key record truncated");
    if (std::memcmp(record.data(), "GKS1", 4) != 0)
        fail(ErrorKind::decode, "bad key record magic");
    std::size_t kb = record[4];
    if (kb != 16 && kb != 32) fail(ErrorKind::decode, "bad key width");
    if (record.size() != 13 + 2 * kb) fail(ErrorKind::decode, "bad key record length");
    KeyState s;
    s.kappa = std::uint32_t(kb * 8);
    s.index = load64_be(record.data() + 5);
    std::memcpy(s.sk.data(), record.data() + 13, kb);
    std::memcpy(s.sk_prime.data(), record.data() + 13 + kb, kb);
    return s;
}

}  // namespace graphene

#endif
