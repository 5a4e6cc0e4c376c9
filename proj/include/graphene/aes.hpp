#ifndef GRAPHENE_AES_HPP
#define GRAPHENE_AES_HPP

#include <cstring>

#include "graphene/bytes.hpp"
#include "graphene/errors.hpp"

namespace graphene {

namespace detail {

constexpr std::uint8_t gf256_mul(std::uint8_t a, std::uint8_t b) {
    std::uint8_t acc = 0;
    for (int i = 0; i < 8; ++i) {
        if (b & 1) acc ^= a;
        std::uint8_t hi = a & 0x80;
        a = std::uint8_t(a << 1);
        if (hi) a ^= 0x1b;
        b >>= 1;
    }
    return acc;
}

constexpr std::uint8_t gf256_inv(std::uint8_t a) {
    if (a == 0) return 0;
    for (int x = 1; x < 256; ++x) {
        if (gf256_mul(a, std::uint8_t(x)) == 1) return std::uint8_t(x);
    }
    return 0;
}

constexpr std::uint8_t sbox_entry(std::uint8_t i) {
    std::uint8_t x = gf256_inv(i);
    std::uint8_t s = x;
    for (int r = 1; r <= 4; ++r) s ^= std::uint8_t((x << r) | (x >> (8 - r)));
    return std::uint8_t(s ^ 0x63);
}

struct AesTables {
    std::uint8_t sbox[256];
    std::uint8_t inv_sbox[256];
};

constexpr AesTables make_aes_tables() {
    AesTables t{};
    for (int i = 0; i < 256; ++i) {
        std::uint8_t s = sbox_entry(std::uint8_t(i));
        t.sbox[i] = s;
        t.inv_sbox[s] = std::uint8_t(i);
    }
    return t;
}

inline constexpr AesTables aes_tables = make_aes_tables();

constexpr std::uint8_t xtime(std::uint8_t x) {
    return std::uint8_t((x << 1) ^ ((x >> 7) * 0x1b));
}

}  // namespace detail

/// AES-128 block cipher with both directions (FIPS 197).
class Aes128 {
public:
    explicit Aes128(ByteView key) {
        if (key.size() != 16) fail(ErrorKind::invalid_argument, "AES-128 key must be 16 bytes");
        expand(key.data());
    }

    ~Aes128() { secure_wipe(rk_, sizeof rk_); }

    void encrypt_block(const std::uint8_t in[16], std::uint8_t out[16]) const {
        const std::uint8_t* sbox = detail::aes_tables.sbox;
        std::uint8_t s[16];
        for (int i = 0; i < 16; ++i) s[i] = in[i] ^ rk_[i];
        for (int round = 1; round < 10; ++round) {
            sub_shift(s, sbox);
            mix_columns(s);
            add_round_key(s, round);
        }
        sub_shift(s, sbox);
        add_round_key(s, 10);
        std::memcpy(out, s, 16);
    }

    void decrypt_block(const std::uint8_t in[16], std::uint8_t out[16]) const {
        const std::uint8_t* inv = detail::aes_tables.inv_sbox;
        std::uint8_t s[16];
        for (int i = 0; i < 16; ++i) s[i] = in[i] ^ rk_[160 + i];
        for (int round = 9; round >= 1; --round) {
            inv_shift_sub(s, inv);
            add_round_key(s, round);
            inv_mix_columns(s);
        }
        inv_shift_sub(s, inv);
        add_round_key(s, 0);
        std::memcpy(out, s, 16);
    }

private:
    void expand(const std::uint8_t* key) {
        const std::uint8_t* sbox = detail::aes_tables.sbox;
        std::memcpy(rk_, key, 16);
        std::uint8_t rcon = 1;
        for (int i = 16; i < 176; i += 4) {
            std::uint8_t t[4];
            std::memcpy(t, rk_ + i - 4, 4);
            if (i % 16 == 0) {
                std::uint8_t tmp = t[0];
                t[0] = std::uint8_t(sbox[t[1]] ^ rcon);
                t[1] = sbox[t[2]];
                t[2] = sbox[t[3]];
                t[3] = sbox[tmp];
                rcon = detail::xtime(rcon);
            }
            for (int j = 0; j < 4; ++j) rk_[i + j] = rk_[i - 16 + j] ^ t[j];
        }
    }

    void add_round_key(std::uint8_t* s, int round) const {
        const std::uint8_t* rk = rk_ + 16 * round;
        for (int i = 0; i < 16; ++i) s[i] ^= rk[i];
    }

    // SubBytes and ShiftRows fused; state is column-major per FIPS 197.
    static void sub_shift(std::uint8_t* s, const std::uint8_t* sbox) {
        std::uint8_t t[16];
        static constexpr int shift_map[16] = {0, 5, 10, 15, 4, 9, 14, 3,
                                              8, 13, 2, 7, 12, 1, 6, 11};
        for (int i = 0; i < 16; ++i) t[i] = sbox[s[shift_map[i]]];
        std::memcpy(s, t, 16);
    }

    static void inv_shift_sub(std::uint8_t* s, const std::uint8_t* inv) {
        std::uint8_t t[16];
        static constexpr int inv_shift_map[16] = {0, 13, 10, 7, 4, 1, 14, 11,
                                                  8, 5, 2, 15, 12, 9, 6, 3};
        for (int i = 0; i < 16; ++i) t[i] = inv[s[inv_shift_map[i]]];
        std::memcpy(s, t, 16);
    }

    static void mix_columns(std::uint8_t* s) {
        for (int c = 0; c < 4; ++c) {
            std::uint8_t* a = s + 4 * c;
            std::uint8_t all = a[0] ^ a[1] ^ a[2] ^ a[3];
            std::uint8_t a0 = a[0];
            a[0] ^= all ^ detail::xtime(std::uint8_t(a[0] ^ a[1]));
            a[1] ^= all ^ detail::xtime(std::uint8_t(a[1] ^ a[2]));
            a[2] ^= all ^ detail::xtime(std::uint8_t(a[2] ^ a[3]));
            a[3] ^= all ^ detail::xtime(std::uint8_t(a[3] ^ a0));
        }
    }

    static void inv_mix_columns(std::uint8_t* s) {
        using detail::gf256_mul;
        for (int c = 0; c < 4; ++c) {
            std::uint8_t* a = s + 4 * c;
            std::uint8_t b0 = a[0], b1 = a[1], b2 = a[2], b3 = a[3];
            a[0] = gf256_mul(b0, 14) ^ gf256_mul(b1, 11) ^ gf256_mul(b2, 13) ^ gf256_mul(b3, 9);
            a[1] = gf256_mul(b0, 9) ^ gf256_mul(b1, 14) ^ gf256_mul(b2, 11) ^ gf256_mul(b3, 13);
            a[2] = gf256_mul(b0, 13) ^ gf256_mul(b1, 9) ^ gf256_mul(b2, 14) ^ gf256_mul(b3, 11);
            a[3] = gf256_mul(b0, 11) ^ gf256_mul(b1, 13) ^ gf256_mul(b2, 9) ^ gf256_mul(b3, 14);
        }
    }

    std::uint8_t rk_[176];
};

/// AES-128 counter-mode keystream: zero nonce, 128-bit big-endian block
/// counter starting at 0. Each key is single-use, which is what makes the
/// fixed nonce sound.
inline Bytes ctr_keystream(ByteView key, std::size_t length) {
    Aes128 aes(key);
    Bytes out(length);
    std::uint8_t counter[16] = {};
    std::uint8_t block[16];
    std::size_t off = 0;
    std::uint64_t i = 0;
    while (off < length) {
        store64_be(counter + 8, i++);
        aes.encrypt_block(counter, block);
        std::size_t take = std::min(length - off, std::size_t(16));
        std::memcpy(out.data() + off, block, take);
        off += take;
    }
    secure_wipe(block, sizeof block);
    return out;
}

/// GCM-layout keystream: 12-byte nonce, 32-bit counter, encryption counters
/// start at 2 (counter 1 is the tag pad).
inline Bytes gcm_keystream(const Aes128& aes, const std::uint8_t nonce[12],
                           std::size_t length) {
    Bytes out(length);
    std::uint8_t counter[16];
    std::memcpy(counter, nonce, 12);
    std::uint8_t block[16];
    std::size_t off = 0;
    std::uint32_t ctr = 2;
    while (off < length) {
        store32_be(counter + 12, ctr++);
        aes.encrypt_block(counter, block);
        std::size_t take = std::min(length - off, std::size_t(16));
        std::memcpy(out.data() + off, block, take);
        off += take;
    }
    secure_wipe(block, sizeof block);
    return out;
}

/// Tag pad for the GCM layout: E_K(nonce || 0x00000001).
inline Block128 gcm_tag_pad(const Aes128& aes, const std::uint8_t nonce[12]) {
    std::uint8_t j0[16];
    std::memcpy(j0, nonce, 12);
    store32_be(j0 + 12, 1);
    Block128 pad;
    aes.encrypt_block(j0, pad.data());
    return pad;
}

/// AES-128-CBC with PKCS#7 padding. The ciphertext does not include the IV.
inline Bytes cbc_encrypt(ByteView key, const Block128& iv, ByteView plaintext) {
    Aes128 aes(key);
    std::size_t pad = 16 - plaintext.size() % 16;
    Bytes out(plaintext.size() + pad);
    std::memcpy(out.data(), plaintext.data(), plaintext.size());
    std::memset(out.data() + plaintext.size(), int(pad), pad);
    const std::uint8_t* prev = iv.data();
    for (std::size_t off = 0; off < out.size(); off += 16) {
        xor_into(out.data() + off, prev, 16);
        aes.encrypt_block(out.data() + off, out.data() + off);
        prev = out.data() + off;
    }
    return out;
}

inline Bytes cbc_decrypt(ByteView key, const Block128& iv, ByteView ciphertext) {
    if (ciphertext.empty() || ciphertext.size() % 16 != 0)
        fail(ErrorKind::padding, "CBC ciphertext length not a positive block multiple");
    Aes128 aes(key);
    Bytes out(ciphertext.size());
    const std::uint8_t* prev = iv.data();
    for (std::size_t off = 0; off < ciphertext.size(); off += 16) {
        aes.decrypt_block(ciphertext.data() + off, out.data() + off);
        xor_into(out.data() + off, prev, 16);
        prev = ciphertext.data() + off;
    }
    std::uint8_t pad = out.back();
    if (pad == 0 || pad > 16) fail(ErrorKind::padding, "bad PKCS#7 pad byte");
    for (std::size_t i = out.size() - pad; i < out.size(); ++i) {
        if (out[i] != pad) fail(ErrorKind::padding, "inconsistent PKCS#7 padding");
    }
    out.resize(out.size() - pad);
    return out;
}

}  // namespace graphene

#endif
