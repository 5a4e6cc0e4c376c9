#ifndef GRAPHENE_WIRE_HPP
#define GRAPHENE_WIRE_HPP

#include "graphene/engine.hpp"

namespace graphene {

inline constexpr std::uint8_t kWireVersion = 0x01;

// WireBatch layout, all integers big-endian:
//   version (1) | instantiation (1) | agg_mode (1) | start_index (8) |
//   count (4) | uniform flag (1) | lengths (4, or 4 * count) |
//   ciphertexts | aggregate tag (width fixed by agg_mode)
// Uniform-length batches must use the one-length form; the parser rejects
// the expanded form when all lengths agree, so decode(encode(x)) and
// encode(decode(b)) are both identities.

inline Bytes encode_batch(const SealedBatch& sealed) {
    if (sealed.items.size() > UINT32_MAX)
        fail(ErrorKind::encode, "batch count exceeds the wire format");
    if (sealed.items.empty())
        fail(ErrorKind::encode, "empty batch");
    if (sealed.aggregate.bytes.size() != agg_tag_width(sealed.aggregate.mode))
        fail(ErrorKind::encode, "aggregate width does not match its mode");

    bool uniform = true;
    for (const auto& c : sealed.items) {
        if (c.size() != sealed.items.front().size()) {
            uniform = false;
            break;
        }
        if (c.size() > UINT32_MAX) fail(ErrorKind::encode, "ciphertext too long");
    }

    Bytes out;
    out.push_back(kWireVersion);
    out.push_back(std::uint8_t(sealed.instantiation));
    out.push_back(std::uint8_t(sealed.aggregate.mode));
    std::uint8_t buf[8];
    store64_be(buf, sealed.start_index);
    out.insert(out.end(), buf, buf + 8);
    store32_be(buf, std::uint32_t(sealed.items.size()));
    out.insert(out.end(), buf, buf + 4);
    out.push_back(uniform ? 1 : 0);
    if (uniform) {
        store32_be(buf, std::uint32_t(sealed.items.front().size()));
        out.insert(out.end(), buf, buf + 4);
    } else {
        for (const auto& c : sealed.items) {
            store32_be(buf, std::uint32_t(c.size()));
            out.insert(out.end(), buf, buf + 4);
        }
    }
    for (const auto& c : sealed.items) out.insert(out.end(), c.begin(), c.end());
    out.insert(out.end(), sealed.aggregate.bytes.begin(), sealed.aggregate.bytes.end());
    return out;
}

namespace detail {

struct WireReader {
    ByteView in;
    std::size_t pos = 0;

    [[noreturn]] void reject(const std::string& what) const {
        fail(ErrorKind::decode, what + " at offset " + std::to_string(pos));
    }

    void need(std::size_t n, const char* what) const {
        if (in.size() - pos < n) {
            fail(ErrorKind::decode, std::string("truncated ") + what + " at offset " +
                                        std::to_string(pos));
        }
    }

    std::uint8_t u8(const char* what) {
        need(1, what);
        return in[pos++];
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = load32_be(in.data() + pos);
        pos += 4;
        return v;
    }

    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = load64_be(in.data() + pos);
        pos += 8;
        return v;
    }

    Bytes take(std::size_t n, const char* what) {
        need(n, what);
        Bytes out(in.begin() + pos, in.begin() + pos + n);
        pos += n;
        return out;
    }
};

}  // namespace detail

inline SealedBatch decode_batch(ByteView wire) {
    detail::WireReader r{wire};

    std::uint8_t version = r.u8("version");
    if (version != kWireVersion) r.reject("unknown version");
    std::uint8_t inst = r.u8("instantiation");
    if (inst < 1 || inst > 3) r.reject("unknown instantiation");
    std::uint8_t mode = r.u8("aggregation mode");
    if (mode < 1 || mode > 3) r.reject("unknown aggregation mode");
    std::uint64_t start_index = r.u64("start index");
    std::uint32_t count = r.u32("count");
    if (count == 0) r.reject("empty batch");
    std::uint8_t uniform = r.u8("uniform flag");
    if (uniform > 1) r.reject("bad uniform flag");

    std::vector<std::uint32_t> lengths;
    if (uniform) {
        lengths.assign(1, r.u32("length"));
    } else {
        lengths.reserve(count);
        bool all_equal = true;
        for (std::uint32_t k = 0; k < count; ++k) {
            lengths.push_back(r.u32("length table"));
            if (lengths[k] != lengths[0]) all_equal = false;
        }
        if (all_equal) r.reject("non-canonical length table");
    }

    SealedBatch out;
    out.instantiation = Instantiation(inst);
    out.start_index = start_index;
    out.items.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        std::uint32_t len = uniform ? lengths[0] : lengths[k];
        out.items.push_back(r.take(len, "ciphertext"));
    }

    out.aggregate.mode = AggMode(mode);
    out.aggregate.start_index = start_index;
    out.aggregate.count = count;
    out.aggregate.bytes = r.take(agg_tag_width(AggMode(mode)), "aggregate tag");
    if (r.pos != wire.size()) r.reject("trailing bytes");
    return out;
}

// Standalone aggregate-tag record: mode (1) | width (1) | bytes. The window
// binding travels with the batch header, not this record.
inline Bytes encode_aggregate_tag(const AggregateTag& tag) {
    if (tag.bytes.size() != agg_tag_width(tag.mode))
        fail(ErrorKind::encode, "aggregate width does not match its mode");
    Bytes out;
    out.push_back(std::uint8_t(tag.mode));
    out.push_back(std::uint8_t(tag.bytes.size()));
    out.insert(out.end(), tag.bytes.begin(), tag.bytes.end());
    return out;
}

inline AggregateTag decode_aggregate_tag(ByteView wire) {
    detail::WireReader r{wire};
    std::uint8_t mode = r.u8("mode");
    if (mode < 1 || mode > 3) r.reject("unknown aggregation mode");
    std::uint8_t width = r.u8("width");
    if (width != agg_tag_width(AggMode(mode))) r.reject("width does not match mode");
    AggregateTag out;
    out.mode = AggMode(mode);
    out.bytes = r.take(width, "tag bytes");
    if (r.pos != wire.size()) r.reject("trailing bytes");
    return out;
}

}  // namespace graphene

#endif
