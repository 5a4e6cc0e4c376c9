#ifndef GRAPHENE_BYTES_HPP
#define GRAPHENE_BYTES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace graphene {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 16-byte cipher block / short tag.
using Block128 = std::array<std::uint8_t, 16>;
/// 32-byte hash digest / long tag.
using Digest256 = std::array<std::uint8_t, 32>;

inline std::uint32_t load32_be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

inline std::uint64_t load64_be(const std::uint8_t* p) {
    return (std::uint64_t(load32_be(p)) << 32) | load32_be(p + 4);
}

inline void store32_be(std::uint8_t* p, std::uint32_t v) {
    p[0] = std::uint8_t(v >> 24);
    p[1] = std::uint8_t(v >> 16);
    p[2] = std::uint8_t(v >> 8);
    p[3] = std::uint8_t(v);
}

inline void store64_be(std::uint8_t* p, std::uint64_t v) {
    store32_be(p, std::uint32_t(v >> 32));
    store32_be(p + 4, std::uint32_t(v));
}

inline std::uint32_t load32_le(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
           (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

inline std::uint64_t load64_le(const std::uint8_t* p) {
    return std::uint64_t(load32_le(p)) | (std::uint64_t(load32_le(p + 4)) << 32);
}

inline void store64_le(std::uint8_t* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = std::uint8_t(v >> (8 * i));
}

/// Overwrites a buffer with zeros through a volatile pointer so the
/// stores survive optimization.
inline void secure_wipe(void* data, std::size_t len) {
    volatile std::uint8_t* p = static_cast<volatile std::uint8_t*>(data);
    for (std::size_t i = 0; i < len; ++i) p[i] = 0;
}

inline void secure_wipe(Bytes& b) {
    secure_wipe(b.data(), b.size());
}

template <std::size_t N>
inline void secure_wipe(std::array<std::uint8_t, N>& a) {
    secure_wipe(a.data(), a.size());
}

/// Constant-time equality; both inputs must be the same length.
inline bool ct_equal(ByteView a, ByteView b) {
    if (a.size() != b.size()) return false;
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc |= a[i] ^ b[i];
    return acc == 0;
}

inline void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] ^= src[i];
}

inline std::string to_hex(ByteView data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out;
    if (hex.size() % 2 != 0) return out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return {};
        out.push_back(std::uint8_t(hi << 4 | lo));
    }
    return out;
}

}  // namespace graphene

#endif
