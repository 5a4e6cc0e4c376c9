#ifndef GRAPHENE_GHASH_HPP
#define GRAPHENE_GHASH_HPP

#include <cstring>

#include "graphene/bytes.hpp"

namespace graphene {

namespace detail {

struct Gf128 {
    std::uint64_t hi = 0;  // bytes 0..7, big-endian bit order
    std::uint64_t lo = 0;  // bytes 8..15
};

inline Gf128 gf128_load(const std::uint8_t* p) {
    return {load64_be(p), load64_be(p + 8)};
}

inline void gf128_store(const Gf128& v, std::uint8_t* p) {
    store64_be(p, v.hi);
    store64_be(p + 8, v.lo);
}

// Carry-less multiply in GCM's reflected GF(2^128), NIST SP 800-38D style:
// walk the bits of x MSB-first while shifting y toward the reduction poly.
inline Gf128 gf128_mul(const Gf128& x, const Gf128& y) {
    Gf128 z{};
    Gf128 v = y;
    for (int half = 0; half < 2; ++half) {
        std::uint64_t bits = half == 0 ? x.hi : x.lo;
        for (int i = 63; i >= 0; --i) {
            std::uint64_t mask = std::uint64_t(0) - ((bits >> i) & 1);
            z.hi ^= v.hi & mask;
            z.lo ^= v.lo & mask;
            std::uint64_t carry = std::uint64_t(0) - (v.lo & 1);
            v.lo = (v.lo >> 1) | (v.hi << 63);
            v.hi = (v.hi >> 1) ^ (carry & 0xe100000000000000ULL);
        }
    }
    return z;
}

}  // namespace detail

/// GHASH-based one-time tag: GHASH of `data` under `hash_key` (empty
/// associated data, standard zero padding and length block), XORed with
/// `pad`. With hash_key = E_K(0) and pad = E_K(J0) this is the AES-GCM tag.
inline Block128 ghash_tag(const Block128& hash_key, const Block128& pad, ByteView data) {
    using detail::Gf128;
    Gf128 h = detail::gf128_load(hash_key.data());
    Gf128 y{};
    std::size_t off = 0;
    while (off < data.size()) {
        std::uint8_t block[16] = {};
        std::size_t take = std::min(data.size() - off, std::size_t(16));
        std::memcpy(block, data.data() + off, take);
        Gf128 b = detail::gf128_load(block);
        y.hi ^= b.hi;
        y.lo ^= b.lo;
        y = detail::gf128_mul(y, h);
        off += take;
    }
    // length block: 64-bit AAD bit length (always zero here) || data bit length
    y.lo ^= std::uint64_t(data.size()) * 8;
    y = detail::gf128_mul(y, h);

    Block128 out;
    detail::gf128_store(y, out.data());
    xor_into(out.data(), pad.data(), 16);
    return out;
}

}  // namespace graphene

#endif
