#ifndef GRAPHENE_AGGREGATOR_HPP
#define GRAPHENE_AGGREGATOR_HPP

#include <cstring>

#include "graphene/config.hpp"
#include "graphene/sha256.hpp"

namespace graphene {

/// Width of a finalized aggregate: 32-byte digest, 16-byte XOR fold, or
/// 17-byte little-endian canonical value below 2^130 - 5.
inline std::size_t agg_tag_width(AggMode mode) {
    switch (mode) {
        case AggMode::hash: return 32;
        case AggMode::xor_fold: return 16;
        case AggMode::add_q: return 17;
    }
    fail(ErrorKind::invalid_argument, "unknown aggregation mode");
}

/// Running fold over per-message tags. The add_q accumulator keeps the
/// two bits above 2^128 in a separate limb.
struct AggState {
    AggMode mode = AggMode::xor_fold;
    std::uint64_t folded = 0;
    Digest256 acc_hash{};
    Block128 acc_xor{};
    std::uint64_t acc_q_lo = 0;   // bits 0..63
    std::uint64_t acc_q_mid = 0;  // bits 64..127
    std::uint32_t acc_q_hi = 0;   // bits 128..129

    void wipe() {
        secure_wipe(acc_hash);
        secure_wipe(acc_xor);
        acc_q_lo = acc_q_mid = 0;
        acc_q_hi = 0;
        folded = 0;
    }
};

/// Compact per-window tag plus the window it authenticates.
struct AggregateTag {
    AggMode mode = AggMode::xor_fold;
    Bytes bytes;
    std::uint64_t start_index = 0;
    std::uint64_t count = 0;

    bool operator==(const AggregateTag&) const = default;
};

inline AggState agg_init(AggMode mode) {
    if (mode != AggMode::hash && mode != AggMode::xor_fold && mode != AggMode::add_q)
        fail(ErrorKind::invalid_argument, "unknown aggregation mode");
    AggState s;
    s.mode = mode;
    return s;
}

namespace detail {

// acc += v (mod 2^130 - 5), v < 2^128 little-endian
inline void add_q_fold(AggState& s, const std::uint8_t v[16]) {
    std::uint64_t t_lo = load64_le(v);
    std::uint64_t t_mid = load64_le(v + 8);

    std::uint64_t lo = s.acc_q_lo + t_lo;
    std::uint64_t carry = lo < t_lo ? 1 : 0;
    std::uint64_t mid = s.acc_q_mid + t_mid + carry;
    carry = (mid < t_mid || (carry && mid == t_mid)) ? 1 : 0;
    std::uint32_t hi = s.acc_q_hi + std::uint32_t(carry);

    // conditional subtract of q = 2^130 - 5: acc stays below 2q here
    bool ge_q = hi > 3 || (hi == 3 && mid == UINT64_MAX && lo >= UINT64_MAX - 4);
    if (ge_q) {
        std::uint64_t new_lo = lo + 5;
        std::uint64_t c = new_lo < 5 ? 1 : 0;
        std::uint64_t new_mid = mid + c;
        std::uint64_t c2 = (c && new_mid == 0) ? 1 : 0;
        lo = new_lo;
        mid = new_mid;
        hi = hi - 4 + std::uint32_t(c2);
    }
    s.acc_q_lo = lo;
    s.acc_q_mid = mid;
    s.acc_q_hi = hi;
}

}  // namespace detail

/// Folds one per-message tag (16 bytes, or a 32-byte digest tag). Hash mode
/// absorbs the full tag; the 16-byte modes truncate 32-byte tags first.
inline void agg_fold(AggState& s, ByteView tag) {
    if (tag.size() != 16 && tag.size() != 32)
        fail(ErrorKind::invalid_argument, "per-message tag must be 16 or 32 bytes");
    switch (s.mode) {
        case AggMode::hash: {
            Sha256 h;
            h.update(s.acc_hash).update(tag);
            s.acc_hash = h.finalize();
            break;
        }
        case AggMode::xor_fold:
            xor_into(s.acc_xor.data(), tag.data(), 16);
            break;
        case AggMode::add_q:
            detail::add_q_fold(s, tag.data());
            break;
    }
    s.folded += 1;
}

/// Packages the accumulator for a window; the fold count must equal the
/// window size (the mix-and-match guard).
inline AggregateTag agg_final(const AggState& s, std::uint64_t start_index,
                              std::uint64_t count) {
    if (s.folded != count)
        fail(ErrorKind::window_mismatch,
             "folded " + std::to_string(s.folded) + " tags for a window of " +
                 std::to_string(count));
    AggregateTag out;
    out.mode = s.mode;
    out.start_index = start_index;
    out.count = count;
    switch (s.mode) {
        case AggMode::hash:
            out.bytes.assign(s.acc_hash.begin(), s.acc_hash.end());
            break;
        case AggMode::xor_fold:
            out.bytes.assign(s.acc_xor.begin(), s.acc_xor.end());
            break;
        case AggMode::add_q:
            out.bytes.resize(17);
            store64_le(out.bytes.data(), s.acc_q_lo);
            store64_le(out.bytes.data() + 8, s.acc_q_mid);
            out.bytes[16] = std::uint8_t(s.acc_q_hi);
            break;
    }
    return out;
}

}  // namespace graphene

#endif
