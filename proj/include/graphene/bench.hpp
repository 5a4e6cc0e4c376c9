#ifndef GRAPHENE_BENCH_HPP
#define GRAPHENE_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "graphene/graphene.hpp"

namespace graphene {

enum class BenchPhase { offline, online_encmac, online_verify };

inline const char* bench_phase_name(BenchPhase p) {
    switch (p) {
        case BenchPhase::offline: return "offline";
        case BenchPhase::online_encmac: return "online_encmac";
        case BenchPhase::online_verify: return "online_verify";
    }
    return "unknown";
}

/// One measured cell: median-of-means nanoseconds per message.
struct BenchRecord {
    Instantiation instantiation;
    BenchPhase phase;
    std::uint32_t msg_len = 0;
    std::uint64_t n = 0;
    double ns_per_op = 0.0;
    std::size_t table_bytes = 0;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

}  // namespace detail

/// Times one (instantiation, msg_len, n) cell: per repetition the sender
/// precomputes (offline), seals (online EncMac) and the verifier runs
/// verify-and-decrypt (online verification), one window each. Precompute
/// time never counts toward the online phases.
inline std::vector<BenchRecord> bench_cell(Instantiation inst, std::uint32_t msg_len,
                                           std::uint64_t n, std::size_t reps,
                                           std::uint64_t seed = 7) {
    if (reps < 1) fail(ErrorKind::invalid_argument, "repetitions must be >= 1");
    using Clock = std::chrono::steady_clock;

    auto cfg = InstantiationConfig::defaults(inst, n, msg_len);
    Bytes seed_bytes(8);
    store64_be(seed_bytes.data(), seed);
    KeyState root = kg_seeded(cfg, seed_bytes);
    Engine sender(cfg, root);
    Engine verifier(cfg, root);

    std::vector<Bytes> msgs(n, Bytes(msg_len, 0));
    for (std::uint64_t k = 0; k < n; ++k)
        for (std::uint32_t b = 0; b < msg_len; ++b)
            msgs[k][b] = std::uint8_t(seed + k * 131 + b * 17);

    std::size_t tbl_bytes = 0;
    std::vector<double> offline_ns, seal_ns, verify_ns;
    offline_ns.reserve(reps);
    seal_ns.reserve(reps);
    verify_ns.reserve(reps);

    auto one_rep = [&](bool record) {
        double off = 0.0;
        if (cfg.offline_online()) {
            auto t0 = Clock::now();
            tbl_bytes = sender.precompute_window();
            off = double(std::chrono::duration_cast<std::chrono::nanoseconds>(
                             Clock::now() - t0)
                             .count());
        }
        Batch batch{sender.window_start(), msgs};
        auto t1 = Clock::now();
        SealedBatch sealed = sender.seal(batch);
        auto t2 = Clock::now();
        auto plain = verifier.verdec(sealed);
        auto t3 = Clock::now();
        if (plain != msgs) fail(ErrorKind::verification_failed, "bench round trip broke");
        if (record) {
            offline_ns.push_back(off / double(n));
            seal_ns.push_back(
                double(std::chrono::duration_cast<std::chrono::nanoseconds>(t2 - t1)
                           .count()) /
                double(n));
            verify_ns.push_back(
                double(std::chrono::duration_cast<std::chrono::nanoseconds>(t3 - t2)
                           .count()) /
                double(n));
        }
    };

    std::size_t warmup = std::max<std::size_t>(2, reps / 20);
    for (std::size_t i = 0; i < warmup; ++i) one_rep(false);
    for (std::size_t i = 0; i < reps; ++i) one_rep(true);

    std::vector<BenchRecord> out;
    out.push_back({inst, BenchPhase::offline, msg_len, n,
                   cfg.offline_online() ? detail::median(offline_ns) : 0.0, tbl_bytes});
    out.push_back({inst, BenchPhase::online_encmac, msg_len, n,
                   detail::median(seal_ns), tbl_bytes});
    out.push_back({inst, BenchPhase::online_verify, msg_len, n,
                   detail::median(verify_ns), tbl_bytes});
    return out;
}

/// Full grid run. Records come back grouped per cell in phase order.
inline std::vector<BenchRecord> bench_grid(const std::vector<Instantiation>& insts,
                                           const std::vector<std::uint32_t>& msg_lens,
                                           const std::vector<std::uint64_t>& ns,
                                           std::size_t reps) {
    std::vector<BenchRecord> out;
    for (auto len : msg_lens)
        for (auto n : ns)
            for (auto inst : insts) {
                auto cell = bench_cell(inst, len, n, reps);
                out.insert(out.end(), cell.begin(), cell.end());
            }
    return out;
}

/// Speedup of `inst` over the std-faae row with the same phase and shape;
/// 0 when no counterpart exists.
inline double ratio_vs_std(const std::vector<BenchRecord>& records,
                           const BenchRecord& row) {
    if (row.instantiation == Instantiation::std_faae) return 1.0;
    for (const auto& r : records) {
        if (r.instantiation == Instantiation::std_faae && r.phase == row.phase &&
            r.msg_len == row.msg_len && r.n == row.n && r.ns_per_op > 0.0)
            return r.ns_per_op / (row.ns_per_op > 0.0 ? row.ns_per_op : 1.0);
    }
    return 0.0;
}

}  // namespace graphene

#endif
