// Minimal end-to-end walkthrough: a sensor seals one window of telemetry
// during its online phase, ships one wire frame, and the gateway verifies
// the aggregate before decrypting anything.

#include <cstdio>

#include "graphene/graphene.hpp"

using namespace graphene;

int main() {
    constexpr std::uint64_t kBatch = 16;
    constexpr std::uint32_t kMsgLen = 16;

    auto cfg = InstantiationConfig::defaults(Instantiation::graphene_poly, kBatch,
                                             kMsgLen);
    KeyState root = kg(cfg);  // pre-shared out of band
    Engine sensor(cfg, root);
    Engine gateway(cfg, root);

    // offline phase: run while charging / idle
    std::size_t stored = sensor.precompute_window();
    std::printf("precomputed %zu bytes of per-index material\n", stored);

    // online phase: XOR + one short MAC per reading
    Batch readings;
    readings.start_index = sensor.window_start();
    for (std::uint64_t k = 0; k < kBatch; ++k) {
        Bytes sample(kMsgLen);
        for (std::uint32_t b = 0; b < kMsgLen; ++b)
            sample[b] = std::uint8_t(k * 7 + b);
        readings.items.push_back(std::move(sample));
    }
    SealedBatch sealed = sensor.seal(readings);
    Bytes frame = encode_batch(sealed);
    std::printf("window %llu sealed: %zu messages, %zu-byte frame, %zu-byte aggregate\n",
                static_cast<unsigned long long>(sealed.start_index),
                sealed.items.size(), frame.size(), sealed.aggregate.bytes.size());

    // receiver: one aggregate check gates the whole window
    SealedBatch received = decode_batch(frame);
    std::vector<Bytes> plain = gateway.verdec(received);
    bool intact = plain == readings.items;
    std::printf("gateway verified and decrypted %zu messages: %s\n", plain.size(),
                intact ? "intact" : "MISMATCH");
    return intact ? 0 : 1;
}
