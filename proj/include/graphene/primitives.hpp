#ifndef GRAPHENE_PRIMITIVES_HPP
#define GRAPHENE_PRIMITIVES_HPP

#include "graphene/aes.hpp"
#include "graphene/bytes.hpp"
#include "graphene/errors.hpp"
#include "graphene/ghash.hpp"
#include "graphene/poly1305.hpp"
#include "graphene/sha256.hpp"

namespace graphene {

/// Keyed PRF: AES-128 over the 16-byte block encoding of `index`
/// (big-endian in the last 8 bytes, zero elsewhere).
inline Block128 prf_block(ByteView key, std::uint64_t index) {
    Aes128 aes(key);
    std::uint8_t in[16] = {};
    store64_be(in + 8, index);
    Block128 out;
    aes.encrypt_block(in, out.data());
    return out;
}

inline Digest256 hash(ByteView data) { return sha256(data); }

/// Counter-mode keystream under a single-use key; block i of the stream
/// equals prf_block(key, i).
inline Bytes keystream(ByteView key, std::size_t length) {
    return ctr_keystream(key, length);
}

/// Zeroizes a buffer; the stores are not elided by optimization.
inline void zeroize(std::uint8_t* data, std::size_t len) { secure_wipe(data, len); }
inline void zeroize(Bytes& b) { secure_wipe(b); }
template <std::size_t N>
inline void zeroize(std::array<std::uint8_t, N>& a) { secure_wipe(a); }

}  // namespace graphene

#endif
