#ifndef GRAPHENE_ENGINE_HPP
#define GRAPHENE_ENGINE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "graphene/aggregator.hpp"
#include "graphene/ghash.hpp"
#include "graphene/ootable.hpp"
#include "graphene/poly1305.hpp"

namespace graphene {

/// One window of indexed messages; index of items[k] is start_index + k.
struct Batch {
    std::uint64_t start_index = 0;
    std::vector<Bytes> items;
};

/// Ciphertext window plus the compact aggregate authenticating it.
struct SealedBatch {
    Instantiation instantiation = Instantiation::graphene_poly;
    std::uint64_t start_index = 0;
    std::vector<Bytes> items;
    AggregateTag aggregate;
};

inline Block128 mac_oo_poly(const PolyKey& key, ByteView ciphertext) {
    return poly_tag(key, ciphertext);
}

inline Block128 mac_oo_gcm(const Block128& hash_key, const Block128& pad,
                           ByteView ciphertext) {
    return ghash_tag(hash_key, pad, ciphertext);
}

namespace detail {

/// Standard GCM nonce for message index j: 96-bit big-endian j.
inline void index_nonce(std::uint64_t j, std::uint8_t nonce[12]) {
    std::memset(nonce, 0, 4);
    store64_be(nonce + 4, j);
}

struct GcmIndexParams {
    Block128 hash_key;
    Block128 pad;

    /// GHASH key E_K(0) and tag pad E_K(J0) for per-index key s_j.
    GcmIndexParams(ByteView s_j, std::uint64_t j) {
        Aes128 aes(s_j);
        std::uint8_t zero[16] = {};
        aes.encrypt_block(zero, hash_key.data());
        std::uint8_t nonce[12];
        index_nonce(j, nonce);
        pad = gcm_tag_pad(aes, nonce);
    }

    ~GcmIndexParams() {
        secure_wipe(hash_key);
        secure_wipe(pad);
    }
};

}  // namespace detail

/// Sender or verifier state machine for one direction of traffic.
///
/// The offline-online instantiations advance the key chain once per window
/// (at precompute time on the sender, at accept time on the verifier); the
/// standard baseline advances it per message. Either way, nothing in the
/// object can reproduce key material for indices that have already been
/// sealed or verified.
class Engine {
public:
    Engine(const InstantiationConfig& config, KeyState keys,
           bool allow_snapshot = false)
        : cfg_(config), keys_(std::move(keys)), allow_snapshot_(allow_snapshot) {
        cfg_.validate();
        if (cfg_.n > UINT32_MAX)
            fail(ErrorKind::invalid_config, "batch size exceeds the wire format");
        if (keys_.kappa != cfg_.kappa)
            fail(ErrorKind::invalid_config, "key state width does not match config");
        window_start_ = keys_.index;
    }

    const InstantiationConfig& config() const { return cfg_; }
    const KeyState& keys() const { return keys_; }
    std::uint64_t window_start() const { return window_start_; }
    bool has_table() const { return table_.has_value(); }

    /// Offline phase: fills the per-index table for the next window and
    /// retires the window's chain key. Returns the model-accounted table
    /// size in bytes.
    std::size_t precompute_window() {
        require_no_open_seal();
        if (!cfg_.offline_online())
            fail(ErrorKind::invalid_config, "instantiation has no offline phase");
        if (table_)
            fail(ErrorKind::invalid_config, "window already precomputed");
        if (keys_.index != window_start_)
            fail(ErrorKind::sync, "key chain out of step with the window");
        table_ = precompute(keys_, cfg_);
        return table_bytes(*table_);
    }

    /// Online phase, whole window at once.
    SealedBatch seal(const Batch& messages) {
        if (messages.items.size() != cfg_.n)
            fail(ErrorKind::window_mismatch,
                 "batch of " + std::to_string(messages.items.size()) +
                     " messages for a window of " + std::to_string(cfg_.n));
        begin_seal(messages.start_index);
        for (const auto& m : messages.items) seal_next(m);
        return finish_seal();
    }

    // Incremental sealing (same semantics as seal); used by the breach
    // harness to stop mid-window.
    void begin_seal(std::uint64_t start_index) {
        require_no_open_seal();
        if (start_index != window_start_)
            fail(ErrorKind::sync, "batch starts at " + std::to_string(start_index) +
                                      ", expected " + std::to_string(window_start_));
        if (cfg_.offline_online()) {
            if (!table_ || !table_->covers(window_start_, cfg_.n))
                fail(ErrorKind::reuse, "no live precomputed table for this window");
        } else if (keys_.index != window_start_) {
            fail(ErrorKind::sync, "key chain out of step with the window");
        }
        seal_agg_ = agg_init(cfg_.b_agg);
        seal_items_.clear();
        seal_next_ = window_start_;
    }

    const Bytes& seal_next(ByteView message) {
        if (!seal_agg_) fail(ErrorKind::invalid_config, "no seal in progress");
        if (seal_next_ >= window_start_ + cfg_.n)
            fail(ErrorKind::window_mismatch, "window already full");
        if (message.size() > cfg_.max_msg_len)
            fail(ErrorKind::oversize, "message exceeds max_msg_len");
        std::uint64_t j = seal_next_++;

        Bytes c;
        switch (cfg_.instantiation) {
            case Instantiation::graphene_poly: {
                Bytes ks = cfg_.offline_online() ? take_enc(*table_, j)
                                                 : derive_keystream(j);
                c.assign(message.begin(), message.end());
                xor_into(c.data(), ks.data(), c.size());
                secure_wipe(ks);
                Bytes mk = cfg_.offline_online()
                               ? take_mac(*table_, j)
                               : derive_intra(keys_, cfg_, j, KeyRole::mac, 32);
                PolyKey pk = PolyKey::from_bytes(mk);
                secure_wipe(mk);
                Block128 sigma = mac_oo_poly(pk, c);
                pk.wipe();
                agg_fold(*seal_agg_, sigma);
                break;
            }
            case Instantiation::graphene_ae: {
                Bytes ks = cfg_.offline_online() ? take_enc(*table_, j)
                                                 : derive_keystream(j);
                c.assign(message.begin(), message.end());
                xor_into(c.data(), ks.data(), c.size());
                secure_wipe(ks);
                Bytes s_j = cfg_.offline_online()
                                ? take_mac(*table_, j)
                                : derive_intra(keys_, cfg_, j, KeyRole::enc, 16);
                detail::GcmIndexParams gcm(s_j, j);
                secure_wipe(s_j);
                Block128 sigma = mac_oo_gcm(gcm.hash_key, gcm.pad, c);
                agg_fold(*seal_agg_, sigma);
                break;
            }
            case Instantiation::std_faae: {
                Block128 iv = prf_block(keys_.prf_key(), 0);
                c = cbc_encrypt(keys_.prf_key(), iv, message);
                Digest256 sigma = hmac_sha256(keys_.sk_prime_view(), c);
                agg_fold(*seal_agg_, sigma);
                secure_wipe(sigma);
                upd(keys_);
                break;
            }
        }
        seal_items_.push_back(std::move(c));
        return seal_items_.back();
    }

    SealedBatch finish_seal() {
        if (!seal_agg_) fail(ErrorKind::invalid_config, "no seal in progress");
        if (seal_next_ != window_start_ + cfg_.n)
            fail(ErrorKind::window_mismatch, "window not fully sealed");
        SealedBatch out;
        out.instantiation = cfg_.instantiation;
        out.start_index = window_start_;
        out.items = std::move(seal_items_);
        out.aggregate = agg_final(*seal_agg_, window_start_, cfg_.n);
        seal_agg_->wipe();
        seal_agg_.reset();
        seal_items_.clear();
        advance_window();
        return out;
    }

    /// Aggregate verification: recomputes every per-message tag from the
    /// root chain, folds, and compares in constant time. Never advances
    /// state and never decrypts.
    bool aver(const SealedBatch& sealed) const {
        if (sealed.start_index != window_start_)
            fail(ErrorKind::sync, "batch starts at " +
                                      std::to_string(sealed.start_index) +
                                      ", expected " + std::to_string(window_start_));
        if (sealed.instantiation != cfg_.instantiation) return false;
        if (sealed.items.size() != cfg_.n) return false;
        const AggregateTag& agg = sealed.aggregate;
        if (agg.mode != cfg_.b_agg || agg.start_index != sealed.start_index ||
            agg.count != cfg_.n)
            return false;
        if (agg.bytes.size() != agg_tag_width(cfg_.b_agg)) return false;
        for (const auto& c : sealed.items) {
            if (ciphertext_oversized(c.size())) return false;
        }

        AggState st = agg_init(cfg_.b_agg);
        if (cfg_.instantiation == Instantiation::std_faae) {
            KeyState ks = keys_;
            for (const auto& c : sealed.items) {
                Digest256 sigma = hmac_sha256(ks.sk_prime_view(), c);
                agg_fold(st, sigma);
                secure_wipe(sigma);
                upd(ks);
            }
            ks.wipe();
        } else {
            for (std::size_t k = 0; k < sealed.items.size(); ++k) {
                std::uint64_t j = sealed.start_index + k;
                const Bytes& c = sealed.items[k];
                if (cfg_.instantiation == Instantiation::graphene_poly) {
                    Bytes mk = derive_intra(keys_, cfg_, j, KeyRole::mac, 32);
                    PolyKey pk = PolyKey::from_bytes(mk);
                    secure_wipe(mk);
                    Block128 sigma = mac_oo_poly(pk, c);
                    pk.wipe();
                    agg_fold(st, sigma);
                } else {
                    Bytes s_j = derive_intra(keys_, cfg_, j, KeyRole::enc, 16);
                    detail::GcmIndexParams gcm(s_j, j);
                    secure_wipe(s_j);
                    Block128 sigma = mac_oo_gcm(gcm.hash_key, gcm.pad, c);
                    agg_fold(st, sigma);
                }
            }
        }
        AggregateTag recomputed = agg_final(st, sealed.start_index, cfg_.n);
        st.wipe();
        return ct_equal(recomputed.bytes, agg.bytes);
    }

    /// Verifies, then decrypts, then advances. On any verification failure
    /// it aborts before producing a single plaintext byte.
    std::vector<Bytes> verdec(const SealedBatch& sealed) {
        require_no_open_seal();
        if (!aver(sealed))
            fail(ErrorKind::verification_failed, "aggregate tag rejected for window " +
                                                     std::to_string(sealed.start_index));
        std::vector<Bytes> out;
        out.reserve(sealed.items.size());
        if (cfg_.instantiation == Instantiation::std_faae) {
            for (const auto& c : sealed.items) {
                Block128 iv = prf_block(keys_.prf_key(), 0);
                out.push_back(cbc_decrypt(keys_.prf_key(), iv, c));
                upd(keys_);
            }
            window_start_ += cfg_.n;
        } else {
            for (std::size_t k = 0; k < sealed.items.size(); ++k) {
                std::uint64_t j = sealed.start_index + k;
                Bytes ks = derive_keystream(j);
                Bytes m(sealed.items[k]);
                xor_into(m.data(), ks.data(), m.size());
                secure_wipe(ks);
                out.push_back(std::move(m));
            }
            upd_window(keys_, cfg_.n);
            window_start_ += cfg_.n + 1;
        }
        return out;
    }

    /// Serializes exactly the live secrets: current chain keys plus any
    /// unconsumed table entries. Gated by the breach-simulation flag.
    Bytes snapshot_for_breach() const {
        if (!allow_snapshot_)
            fail(ErrorKind::forbidden, "state snapshot requires breach simulation mode");
        Bytes out = export_key_state(keys_);
        if (table_) {
            Bytes t = serialize_table(*table_);
            out.insert(out.end(), t.begin(), t.end());
        }
        return out;
    }

private:
    void require_no_open_seal() const {
        if (seal_agg_) fail(ErrorKind::invalid_config, "a seal is in progress");
    }

    bool ciphertext_oversized(std::size_t len) const {
        if (cfg_.instantiation == Instantiation::std_faae) {
            // CBC: padded to a block multiple, at most one block beyond max
            std::size_t cap = (std::size_t(cfg_.max_msg_len) / 16 + 1) * 16;
            return len == 0 || len % 16 != 0 || len > cap;
        }
        return len > cfg_.max_msg_len;
    }

    /// Per-index keystream for the stream instantiations, derived from the
    /// window's chain key (verifier path and flags-off sender path).
    Bytes derive_keystream(std::uint64_t j) const {
        Bytes s_j = derive_intra(keys_, cfg_, j, KeyRole::enc, 16);
        Bytes ks;
        if (cfg_.instantiation == Instantiation::graphene_ae) {
            Aes128 aes(s_j);
            std::uint8_t nonce[12];
            detail::index_nonce(j, nonce);
            ks = gcm_keystream(aes, nonce, cfg_.max_msg_len);
        } else {
            ks = keystream(s_j, cfg_.max_msg_len);
        }
        secure_wipe(s_j);
        return ks;
    }

    void advance_window() {
        if (cfg_.instantiation == Instantiation::std_faae) {
            // chain already advanced per message during sealing
            window_start_ += cfg_.n;
        } else if (cfg_.offline_online()) {
            table_.reset();
            window_start_ += cfg_.n + 1;
        } else {
            upd_window(keys_, cfg_.n);
            window_start_ += cfg_.n + 1;
        }
    }

    InstantiationConfig cfg_;
    KeyState keys_;
    std::optional<OOTable> table_;
    std::uint64_t window_start_ = 0;
    bool allow_snapshot_ = false;

    std::optional<AggState> seal_agg_;
    std::vector<Bytes> seal_items_;
    std::uint64_t seal_next_ = 0;
};

}  // namespace graphene

#endif
