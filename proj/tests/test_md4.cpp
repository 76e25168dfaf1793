#include <doctest.h>

#include <random>
#include <stdexcept>

#include "mdsat/md4.hpp"
#include "reference_md4.hpp"

using namespace mdsat;

namespace {

MessageBlock padded_block(const std::string& msg) {
    REQUIRE(msg.size() <= 55);
    unsigned char raw[64] = {0};
    std::memcpy(raw, msg.data(), msg.size());
    raw[msg.size()] = 0x80;
    std::uint64_t bits = msg.size() * 8;
    for (int i = 0; i < 8; ++i)
        raw[56 + i] = static_cast<unsigned char>(bits >> (8 * i));
    MessageBlock b;
    for (int w = 0; w < 16; ++w)
        b.words[w] = static_cast<std::uint32_t>(raw[4 * w]) |
                     static_cast<std::uint32_t>(raw[4 * w + 1]) << 8 |
                     static_cast<std::uint32_t>(raw[4 * w + 2]) << 16 |
                     static_cast<std::uint32_t>(raw[4 * w + 3]) << 24;
    return b;
}

MessageBlock random_block(std::mt19937_64& rng) {
    MessageBlock b;
    for (auto& w : b.words) w = static_cast<std::uint32_t>(rng());
    return b;
}

Digest reference_digest(const MessageBlock& b) {
    unsigned char raw[64];
    for (int w = 0; w < 16; ++w)
        for (int i = 0; i < 4; ++i)
            raw[4 * w + i] = static_cast<unsigned char>(b.words[w] >> (8 * i));
    Digest d;
    refmd4::compress(raw, d.regs.data());
    return d;
}

} // namespace

TEST_CASE("RFC 1320 single-block test vectors") {
    CHECK(md4_k(padded_block(""), 48).to_hex() ==
          "31d6cfe0d16ae931b73c59d7e0c089c0");
    CHECK(md4_k(padded_block("a"), 48).to_hex() ==
          "bde52cb31de33e46245e05fbdbd6fb24");
    CHECK(md4_k(padded_block("abc"), 48).to_hex() ==
          "a448017aaf21d8525fc10ae87aa6729d");
    CHECK(md4_k(padded_block("message digest"), 48).to_hex() ==
          "d9130a8164549fe818874806e1c7014b");
    CHECK(md4_k(padded_block("abcdefghijklmnopqrstuvwxyz"), 48).to_hex() ==
          "d79e1c308aa5bbcdeea8ed63df412da9");
}

TEST_CASE("k=48 agrees with the independent oracle on random blocks") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        MessageBlock b = random_block(rng);
        CHECK(md4_k(b, 48) == reference_digest(b));
    }
}

TEST_CASE("digest is deterministic") {
    std::mt19937_64 rng(2);
    MessageBlock b = random_block(rng);
    for (int k : {1, 5, 39, 48}) CHECK(md4_k(b, k) == md4_k(b, k));
}

TEST_CASE("chaining trace length and prefix property") {
    std::mt19937_64 rng(3);
    MessageBlock b = random_block(rng);
    ChainingTrace t39 = chaining_trace(b, 39);
    CHECK(t39.size() == 39);
    ChainingTrace t48 = chaining_trace(b, 48);
    for (int i = 0; i < 39; ++i) CHECK(t39[i] == t48[i]);
}

TEST_CASE("digest reconstructs from the final trace entries") {
    std::mt19937_64 rng(4);
    MessageBlock b = random_block(rng);
    ChainingTrace t = chaining_trace(b, 48);
    std::uint32_t regs[4] = {0x67452301u, 0xefcdab89u, 0x98badcfeu,
                             0x10325476u};
    std::uint32_t iv[4] = {regs[0], regs[1], regs[2], regs[3]};
    for (int step = 0; step < 48; ++step)
        regs[(4 - step % 4) % 4] = t[step];
    Digest d;
    for (int i = 0; i < 4; ++i) d.regs[i] = regs[i] + iv[i];
    CHECK(d == md4_k(b, 48));
}

TEST_CASE("register digest differs from the final digest by the IV addition") {
    constexpr std::uint32_t iv[4] = {0x67452301u, 0xefcdab89u, 0x98badcfeu,
                                     0x10325476u};
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        MessageBlock b = random_block(rng);
        for (int k : {5, 39, 48}) {
            Digest raw = md4_k_registers(b, k);
            Digest fin = md4_k(b, k);
            for (int w = 0; w < 4; ++w)
                CHECK(fin.regs[w] == raw.regs[w] + iv[w]);
        }
    }
}

TEST_CASE("single-bit flips change the digest (avalanche sanity)") {
    std::mt19937_64 rng(5);
    int changed = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        MessageBlock b = random_block(rng);
        Digest base = md4_k(b, 48);
        MessageBlock m = b;
        int pos = static_cast<int>(rng() % 512);
        m.set_bit(pos, !m.bit(pos));
        if (md4_k(m, 48) != base) ++changed;
    }
    CHECK(changed >= trials * 99 / 100);
}

TEST_CASE("k out of range is rejected") {
    MessageBlock b{};
    CHECK_THROWS_AS(md4_k(b, 0), std::invalid_argument);
    CHECK_THROWS_AS(md4_k(b, 49), std::invalid_argument);
    CHECK_THROWS_AS(chaining_trace(b, -1), std::invalid_argument);
}

TEST_CASE("hex round trips") {
    std::mt19937_64 rng(6);
    MessageBlock b = random_block(rng);
    CHECK(MessageBlock::from_hex(b.to_hex()) == b);
    Digest d = md4_k(b, 48);
    CHECK(Digest::from_hex(d.to_hex()) == d);
    CHECK_THROWS_AS(MessageBlock::from_hex("ab"), std::invalid_argument);
    CHECK_THROWS_AS(Digest::from_hex(std::string(32, 'g')),
                    std::invalid_argument);
}
