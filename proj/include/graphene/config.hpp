#ifndef GRAPHENE_CONFIG_HPP
#define GRAPHENE_CONFIG_HPP

#include <cstdint>

#include "graphene/errors.hpp"

namespace graphene {

enum class Instantiation : std::uint8_t {
    std_faae = 1,      // AES-CBC-128 + HMAC-SHA-256, per-message key update
    graphene_ae = 2,   // AES-GCM per-index keys, hash aggregation
    graphene_poly = 3  // AES-CTR + Poly1305, XOR aggregation
};

enum class AggMode : std::uint8_t {
    hash = 1,   // 32-byte SHA-256 accumulator, order-sensitive
    xor_fold = 2,  // 16-byte XOR accumulator
    add_q = 3   // addition mod 2^130 - 5, 17-byte canonical form
};

inline const char* instantiation_name(Instantiation inst) {
    switch (inst) {
        case Instantiation::std_faae: return "std-faae";
        case Instantiation::graphene_ae: return "graphene-ae";
        case Instantiation::graphene_poly: return "graphene-poly";
    }
    return "unknown";
}

/// Scheme selection tuple: security bits, batch size, offline-online flags,
/// aggregation mode, batch-verification hint, and the per-message size cap
/// the precomputed tables are dimensioned for.
struct InstantiationConfig {
    Instantiation instantiation = Instantiation::graphene_poly;
    std::uint32_t kappa = 128;
    std::uint64_t n = 1;
    bool b_enc_oo = true;
    bool b_mac_oo = true;
    AggMode b_agg = AggMode::xor_fold;
    bool b_bver = false;  // batch-verification capability; verification
                          // always recomputes and aggregates
    std::uint32_t max_msg_len = 16;

    std::size_t key_bytes() const { return kappa / 8; }

    void validate() const {
        if (kappa != 128 && kappa != 256)
            fail(ErrorKind::invalid_config, "kappa must be 128 or 256");
        if (n < 1) fail(ErrorKind::invalid_config, "batch size n must be >= 1");
        if (max_msg_len < 1)
            fail(ErrorKind::invalid_config, "max_msg_len must be >= 1");
        if (b_agg != AggMode::hash && b_agg != AggMode::xor_fold && b_agg != AggMode::add_q)
            fail(ErrorKind::invalid_config, "unknown aggregation mode");
        switch (instantiation) {
            case Instantiation::std_faae:
                if (b_enc_oo || b_mac_oo)
                    fail(ErrorKind::invalid_config,
                         "std-faae primitives admit no offline-online split");
                break;
            case Instantiation::graphene_ae:
            case Instantiation::graphene_poly:
                if (b_enc_oo != b_mac_oo)
                    fail(ErrorKind::invalid_config,
                         "enc/mac offline-online flags must match");
                break;
            default:
                fail(ErrorKind::invalid_config, "unknown instantiation");
        }
    }

    bool offline_online() const { return b_enc_oo && b_mac_oo; }

    static InstantiationConfig defaults(Instantiation inst, std::uint64_t n,
                                        std::uint32_t max_msg_len) {
        InstantiationConfig c;
        c.instantiation = inst;
        c.n = n;
        c.max_msg_len = max_msg_len;
        switch (inst) {
            case Instantiation::std_faae:
                c.b_enc_oo = false;
                c.b_mac_oo = false;
                c.b_agg = AggMode::hash;
                break;
            case Instantiation::graphene_ae:
                c.b_enc_oo = true;
                c.b_mac_oo = true;
                c.b_agg = AggMode::hash;
                break;
            case Instantiation::graphene_poly:
                c.b_enc_oo = true;
                c.b_mac_oo = true;
                c.b_agg = AggMode::xor_fold;
                break;
        }
        c.validate();
        return c;
    }
};

}  // namespace graphene

#endif
