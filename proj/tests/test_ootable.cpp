#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "graphene/ootable.hpp"

using namespace graphene;

namespace {

InstantiationConfig cfg_of(Instantiation inst, std::uint64_t n, std::uint32_t len) {
    return InstantiationConfig::defaults(inst, n, len);
}

}  // namespace

TEST_CASE("precompute fills one window and advances the chain") {
    auto cfg = cfg_of(Instantiation::graphene_poly, 8, 16);
    KeyState s = kg_seeded(cfg, Bytes{1});
    std::uint64_t start = s.index;
    OOTable t = precompute(s, cfg);

    CHECK(t.start_index == start);
    CHECK(t.count == 8);
    CHECK(s.index == start + 9);  // window plus the skipped update slot
    for (const auto& e : t.enc_entries) CHECK(e.size() == 16);
    for (const auto& e : t.mac_entries) CHECK(e.size() == 32);

    SECTION("n=1 degenerate window") {
        auto cfg1 = cfg_of(Instantiation::graphene_poly, 1, 16);
        KeyState s1 = kg_seeded(cfg1, Bytes{2});
        OOTable t1 = precompute(s1, cfg1);
        CHECK(t1.enc_entries.size() == 1);
        CHECK(t1.mac_entries.size() == 1);
    }

    SECTION("flags are required") {
        auto off = cfg;
        off.b_enc_oo = off.b_mac_oo = false;
        KeyState s2 = kg_seeded(cfg, Bytes{3});
        CHECK_THROWS_AS(precompute(s2, off), Error);
        auto std_cfg = cfg_of(Instantiation::std_faae, 8, 16);
        CHECK_THROWS_AS(precompute(s2, std_cfg), Error);
    }
}

TEST_CASE("paper storage figures at n=1024, 16-byte messages") {
    auto ae = cfg_of(Instantiation::graphene_ae, 1024, 16);
    KeyState sa = kg_seeded(ae, Bytes{4});
    OOTable ta = precompute(sa, ae);
    CHECK(table_bytes(ta) == 16384);

    auto poly = cfg_of(Instantiation::graphene_poly, 1024, 16);
    KeyState sp = kg_seeded(poly, Bytes{5});
    OOTable tp = precompute(sp, poly);
    CHECK(table_bytes(tp) == 32768);
}

TEST_CASE("storage formula grid") {
    for (auto inst : {Instantiation::graphene_ae, Instantiation::graphene_poly}) {
        for (std::uint64_t n : {std::uint64_t(1), std::uint64_t(16), std::uint64_t(1024)}) {
            for (std::uint32_t len : {16u, 32u, 128u, 256u}) {
                auto cfg = cfg_of(inst, n, len);
                KeyState s = kg_seeded(cfg, Bytes{std::uint8_t(n & 0xff), std::uint8_t(len)});
                OOTable t = precompute(s, cfg);
                std::size_t want = inst == Instantiation::graphene_poly
                                       ? std::size_t(n) * (len + 16)
                                       : std::size_t(n) * len;
                CHECK(table_bytes(t) == want);
            }
        }
    }
}

TEST_CASE("take is consume-once and window-checked") {
    auto cfg = cfg_of(Instantiation::graphene_poly, 4, 16);
    KeyState s = kg_seeded(cfg, Bytes{6});
    OOTable t = precompute(s, cfg);
    std::uint64_t i = t.start_index;

    Bytes first = take_enc(t, i + 1);
    CHECK(first.size() == 16);
    CHECK_THROWS_AS(take_enc(t, i + 1), Error);
    try {
        take_enc(t, i + 1);
        FAIL("expected reuse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::reuse);
    }

    CHECK_THROWS_AS(take_enc(t, i + 4), Error);      // one past the window
    CHECK_THROWS_AS(take_enc(t, i + 5), Error);      // start + n + 1
    CHECK_THROWS_AS(take_mac(t, i - 1), Error);

    SECTION("random interleaving never yields a duplicate") {
        std::mt19937_64 rng(7);
        std::vector<std::pair<int, std::uint64_t>> order;
        for (std::uint64_t j = i; j < i + 4; ++j) {
            order.push_back({0, j});
            order.push_back({1, j});
        }
        std::shuffle(order.begin(), order.end(), rng);
        std::set<Bytes> seen;
        for (auto [side, j] : order) {
            if (side == 0 && j == i + 1) continue;  // already consumed above
            Bytes e = side == 0 ? take_enc(t, j) : take_mac(t, j);
            CHECK(seen.insert(e).second);
        }
        CHECK(table_bytes(t) == 0);
        CHECK(live_bytes(t) == 0);
    }
}

TEST_CASE("offline path computes exactly what the direct path computes") {
    auto cfg = cfg_of(Instantiation::graphene_poly, 8, 48);
    KeyState s = kg_seeded(cfg, Bytes{8});
    KeyState pristine = s;  // window-start snapshot for direct derivation
    OOTable t = precompute(s, cfg);

    for (std::uint64_t j = t.start_index; j < t.start_index + t.count; ++j) {
        Bytes s_j = derive_intra(pristine, cfg, j, KeyRole::enc, 16);
        Bytes direct = keystream(s_j, cfg.max_msg_len);
        CHECK(take_enc(t, j) == direct);
        CHECK(take_mac(t, j) == derive_intra(pristine, cfg, j, KeyRole::mac, 32));
    }
}

TEST_CASE("gcm-instantiation entries carry the tag-derivation key") {
    auto cfg = cfg_of(Instantiation::graphene_ae, 2, 32);
    KeyState s = kg_seeded(cfg, Bytes{9});
    KeyState pristine = s;
    OOTable t = precompute(s, cfg);

    std::uint64_t j = t.start_index;
    Bytes s_j = derive_intra(pristine, cfg, j, KeyRole::enc, 16);
    CHECK(take_mac(t, j) == s_j);

    Aes128 aes(s_j);
    std::uint8_t nonce[12] = {};
    store64_be(nonce + 4, j);
    CHECK(take_enc(t, j) == gcm_keystream(aes, nonce, 32));
}

TEST_CASE("table serialization round trip") {
    auto cfg = cfg_of(Instantiation::graphene_poly, 5, 24);
    KeyState s = kg_seeded(cfg, Bytes{10});
    OOTable t = precompute(s, cfg);

    Bytes wire = serialize_table(t);
    CHECK(serialize_table(deserialize_table(wire)) == wire);

    SECTION("behavioral equivalence after a round trip") {
        OOTable back = deserialize_table(wire);
        std::uint64_t j = t.start_index + 2;
        CHECK(take_enc(back, j) == take_enc(t, j));
        CHECK(take_mac(back, j) == take_mac(t, j));
    }

    SECTION("consumed entries serialize as absent") {
        Bytes taken = take_enc(t, t.start_index);
        Bytes after = serialize_table(t);
        CHECK(after.size() == wire.size() - cfg.max_msg_len);
        CHECK(std::search(after.begin(), after.end(), taken.begin(), taken.end()) ==
              after.end());
        OOTable back = deserialize_table(after);
        CHECK_THROWS_AS(take_enc(back, t.start_index), Error);
        CHECK(take_mac(back, t.start_index) == take_mac(t, t.start_index));
    }

    SECTION("malformed input is rejected") {
        for (std::size_t cut : {std::size_t(0), std::size_t(3), std::size_t(20),
                                wire.size() - 1}) {
            Bytes trunc(wire.begin(), wire.begin() + cut);
            CHECK_THROWS_AS(deserialize_table(trunc), Error);
        }
        Bytes bad = wire;
        bad[0] = 'X';
        CHECK_THROWS_AS(deserialize_table(bad), Error);
        bad = wire;
        bad[4] = 1;  // std-faae has no table form
        CHECK_THROWS_AS(deserialize_table(bad), Error);
        bad = wire;
        bad.push_back(0);
        CHECK_THROWS_AS(deserialize_table(bad), Error);
    }
}
