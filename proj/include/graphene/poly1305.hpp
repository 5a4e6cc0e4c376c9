#ifndef GRAPHENE_POLY1305_HPP
#define GRAPHENE_POLY1305_HPP

#include <cstring>

#include "graphene/bytes.hpp"
#include "graphene/errors.hpp"

namespace graphene {

/// One-time Poly1305 key pair: clamped polynomial key r and pad s.
struct PolyKey {
    Block128 r{};
    Block128 s{};

    /// Builds a key from 32 bytes of derived material, applying the
    /// standard clamp to r so the key is always usable.
    static PolyKey from_bytes(ByteView material) {
        if (material.size() != 32)
            fail(ErrorKind::invalid_argument, "Poly1305 key material must be 32 bytes");
        PolyKey k;
        std::memcpy(k.r.data(), material.data(), 16);
        std::memcpy(k.s.data(), material.data() + 16, 16);
        k.r[3] &= 0x0f;
        k.r[7] &= 0x0f;
        k.r[11] &= 0x0f;
        k.r[15] &= 0x0f;
        k.r[4] &= 0xfc;
        k.r[8] &= 0xfc;
        k.r[12] &= 0xfc;
        return k;
    }

    void wipe() {
        secure_wipe(r);
        secure_wipe(s);
    }
};

/// Poly1305 (RFC 8439): polynomial evaluation over 2^130 - 5 under r,
/// plus s modulo 2^128. 26-bit limb arithmetic.
inline Block128 poly_tag(const PolyKey& key, ByteView data) {
    constexpr std::uint32_t M = 0x3ffffff;

    std::uint32_t t0 = load32_le(key.r.data());
    std::uint32_t t1 = load32_le(key.r.data() + 4);
    std::uint32_t t2 = load32_le(key.r.data() + 8);
    std::uint32_t t3 = load32_le(key.r.data() + 12);

    std::uint32_t r0 = t0 & M;
    std::uint32_t r1 = ((t0 >> 26) | (t1 << 6)) & M;
    std::uint32_t r2 = ((t1 >> 20) | (t2 << 12)) & M;
    std::uint32_t r3 = ((t2 >> 14) | (t3 << 18)) & M;
    std::uint32_t r4 = t3 >> 8;

    std::uint32_t s1 = r1 * 5, s2 = r2 * 5, s3 = r3 * 5, s4 = r4 * 5;

    std::uint32_t h0 = 0, h1 = 0, h2 = 0, h3 = 0, h4 = 0;

    std::size_t off = 0;
    while (off < data.size()) {
        std::size_t take = std::min(data.size() - off, std::size_t(16));
        std::uint8_t block[16];
        std::uint32_t hibit;
        if (take == 16) {
            std::memcpy(block, data.data() + off, 16);
            hibit = std::uint32_t(1) << 24;
        } else {
            std::memcpy(block, data.data() + off, take);
            block[take] = 1;
            std::memset(block + take + 1, 0, 16 - take - 1);
            hibit = 0;
        }
        off += take;

        std::uint32_t b0 = load32_le(block);
        std::uint32_t b1 = load32_le(block + 4);
        std::uint32_t b2 = load32_le(block + 8);
        std::uint32_t b3 = load32_le(block + 12);

        h0 += b0 & M;
        h1 += std::uint32_t(((std::uint64_t(b1) << 32 | b0) >> 26)) & M;
        h2 += std::uint32_t(((std::uint64_t(b2) << 32 | b1) >> 20)) & M;
        h3 += std::uint32_t(((std::uint64_t(b3) << 32 | b2) >> 14)) & M;
        h4 += (b3 >> 8) | hibit;

        auto mul = [](std::uint32_t a, std::uint32_t b) { return std::uint64_t(a) * b; };
        std::uint64_t d0 = mul(h0, r0) + mul(h1, s4) + mul(h2, s3) + mul(h3, s2) + mul(h4, s1);
        std::uint64_t d1 = mul(h0, r1) + mul(h1, r0) + mul(h2, s4) + mul(h3, s3) + mul(h4, s2);
        std::uint64_t d2 = mul(h0, r2) + mul(h1, r1) + mul(h2, r0) + mul(h3, s4) + mul(h4, s3);
        std::uint64_t d3 = mul(h0, r3) + mul(h1, r2) + mul(h2, r1) + mul(h3, r0) + mul(h4, s4);
        std::uint64_t d4 = mul(h0, r4) + mul(h1, r3) + mul(h2, r2) + mul(h3, r1) + mul(h4, r0);

        std::uint64_t c;
        h0 = std::uint32_t(d0) & M; c = d0 >> 26;
        d1 += c; h1 = std::uint32_t(d1) & M; c = d1 >> 26;
        d2 += c; h2 = std::uint32_t(d2) & M; c = d2 >> 26;
        d3 += c; h3 = std::uint32_t(d3) & M; c = d3 >> 26;
        d4 += c; h4 = std::uint32_t(d4) & M; c = d4 >> 26;
        h0 += std::uint32_t(c) * 5;
    }

    std::uint32_t c;
    c = h0 >> 26; h0 &= M; h1 += c;
    c = h1 >> 26; h1 &= M; h2 += c;
    c = h2 >> 26; h2 &= M; h3 += c;
    c = h3 >> 26; h3 &= M; h4 += c;
    c = h4 >> 26; h4 &= M; h0 += c * 5;
    c = h0 >> 26; h0 &= M; h1 += c;

    // conditionally subtract 2^130 - 5
    std::uint32_t g0 = h0 + 5; c = g0 >> 26; g0 &= M;
    std::uint32_t g1 = h1 + c; c = g1 >> 26; g1 &= M;
    std::uint32_t g2 = h2 + c; c = g2 >> 26; g2 &= M;
    std::uint32_t g3 = h3 + c; c = g3 >> 26; g3 &= M;
    std::uint32_t g4 = h4 + c;

    std::uint32_t sel = std::uint32_t(0) - (g4 >> 26);  // all-ones iff h >= p
    h0 = (h0 & ~sel) | (g0 & sel);
    h1 = (h1 & ~sel) | (g1 & sel);
    h2 = (h2 & ~sel) | (g2 & sel);
    h3 = (h3 & ~sel) | (g3 & sel);
    h4 = (h4 & ~sel) | (g4 & M & sel);

    std::uint32_t w0 = h0 | (h1 << 26);
    std::uint32_t w1 = (h1 >> 6) | (h2 << 20);
    std::uint32_t w2 = (h2 >> 12) | (h3 << 14);
    std::uint32_t w3 = (h3 >> 18) | (h4 << 8);

    std::uint64_t f;
    f = std::uint64_t(w0) + load32_le(key.s.data()); w0 = std::uint32_t(f);
    f = std::uint64_t(w1) + load32_le(key.s.data() + 4) + (f >> 32); w1 = std::uint32_t(f);
    f = std::uint64_t(w2) + load32_le(key.s.data() + 8) + (f >> 32); w2 = std::uint32_t(f);
    f = std::uint64_t(w3) + load32_le(key.s.data() + 12) + (f >> 32); w3 = std::uint32_t(f);

    Block128 out;
    for (int i = 0; i < 4; ++i) {
        std::uint32_t w = i == 0 ? w0 : i == 1 ? w1 : i == 2 ? w2 : w3;
        out[4 * i + 0] = std::uint8_t(w);
        out[4 * i + 1] = std::uint8_t(w >> 8);
        out[4 * i + 2] = std::uint8_t(w >> 16);
        out[4 * i + 3] = std::uint8_t(w >> 24);
    }
    return out;
}

}  // namespace graphene

#endif
