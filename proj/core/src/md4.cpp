#include "mdsat/md4.hpp"

#include <stdexcept>

namespace mdsat {
namespace {

constexpr std::uint32_t kIv[4] = {0x67452301u, 0xefcdab89u, 0x98badcfeu,
                                  0x10325476u};

constexpr std::uint32_t rotl(std::uint32_t x, int s) {
    return (x << s) | (x >> (32 - s));
}

constexpr std::uint32_t f_choice(std::uint32_t x, std::uint32_t y,
                                 std::uint32_t z) {
    return (x & y) | (~x & z);
}
constexpr std::uint32_t g_major(std::uint32_t x, std::uint32_t y,
                                std::uint32_t z) {
    return (x & y) | (x & z) | (y & z);
}
constexpr std::uint32_t h_parity(std::uint32_t x, std::uint32_t y,
                                 std::uint32_t z) {
    return x ^ y ^ z;
}

// Message word index per step (1-based step s -> kSchedule[s-1]).
constexpr int kSchedule[48] = {
    0, 1, 2,  3,  4, 5, 6,  7,  8, 9, 10, 11, 12, 13, 14, 15, // round 1
    0, 4, 8,  12, 1, 5, 9,  13, 2, 6, 10, 14, 3,  7,  11, 15, // round 2
    0, 8, 4,  12, 2, 10, 6, 14, 1, 9, 5,  13, 3,  11, 7,  15, // round 3
};

constexpr int kRot[3][4] = {{3, 7, 11, 19}, {3, 5, 9, 13}, {3, 9, 11, 15}};

constexpr std::uint32_t kRoundConst[3] = {0u, 0x5a827999u, 0x6ed9eba1u};

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex character");
}

void words_from_hex(const std::string& hex, std::uint32_t* words, int n) {
    if (static_cast<int>(hex.size()) != n * 8)
        throw std::invalid_argument("hex string has wrong length");
    for (int i = 0; i < n; ++i) {
        std::uint32_t w = 0;
        for (int b = 0; b < 4; ++b) {
            int hi = hex_nibble(hex[i * 8 + 2 * b]);
            int lo = hex_nibble(hex[i * 8 + 2 * b + 1]);
            w |= static_cast<std::uint32_t>(hi << 4 | lo) << (8 * b);
        }
        words[i] = w;
    }
}

std::string words_to_hex(const std::uint32_t* words, int n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(n * 8);
    for (int i = 0; i < n; ++i) {
        for (int b = 0; b < 4; ++b) {
            std::uint32_t byte = (words[i] >> (8 * b)) & 0xffu;
            out.push_back(digits[byte >> 4]);
            out.push_back(digits[byte & 0xf]);
        }
    }
    return out;
}

void check_k(int k) {
    if (k < 1 || k > kMd4FullSteps)
        throw std::invalid_argument("step count k must be in [1,48]");
}

} // namespace

bool MessageBlock::bit(int pos) const {
    return (words[pos / 32] >> (pos % 32)) & 1u;
}

void MessageBlock::set_bit(int pos, bool v) {
    std::uint32_t mask = 1u << (pos % 32);
    if (v)
        words[pos / 32] |= mask;
    else
        words[pos / 32] &= ~mask;
}

MessageBlock MessageBlock::from_hex(const std::string& hex) {
    MessageBlock b;
    words_from_hex(hex, b.words.data(), 16);
    return b;
}

std::string MessageBlock::to_hex() const { return words_to_hex(words.data(), 16); }

bool Digest::bit(int pos) const { return (regs[pos / 32] >> (pos % 32)) & 1u; }

void Digest::set_bit(int pos, bool v) {
    std::uint32_t mask = 1u << (pos % 32);
    if (v)
        regs[pos / 32] |= mask;
    else
        regs[pos / 32] &= ~mask;
}

Digest Digest::from_hex(const std::string& hex) {
    Digest d;
    words_from_hex(hex, d.regs.data(), 4);
    return d;
}

std::string Digest::to_hex() const { return words_to_hex(regs.data(), 4); }

ChainingTrace chaining_trace(const MessageBlock& block, int k) {
    check_k(k);
    std::uint32_t r[4] = {kIv[0], kIv[1], kIv[2], kIv[3]};
    ChainingTrace trace;
    trace.reserve(k);
    for (int step = 0; step < k; ++step) {
        int round = step / 16;
        // Steps cycle through registers A, D, C, B.
        int tgt = (4 - step % 4) % 4;
        std::uint32_t x = r[(tgt + 1) % 4];
        std::uint32_t y = r[(tgt + 2) % 4];
        std::uint32_t z = r[(tgt + 3) % 4];
        std::uint32_t mix = round == 0   ? f_choice(x, y, z)
                            : round == 1 ? g_major(x, y, z)
                                         : h_parity(x, y, z);
        std::uint32_t sum = r[tgt] + mix + block.words[kSchedule[step]] +
                            kRoundConst[round];
        r[tgt] = rotl(sum, kRot[round][step % 4]);
        trace.push_back(r[tgt]);
    }
    return trace;
}

namespace {

Digest digest_from_registers(const MessageBlock& block, int k, bool feedforward) {
    check_k(k);
    ChainingTrace trace = chaining_trace(block, k);
    std::uint32_t r[4] = {kIv[0], kIv[1], kIv[2], kIv[3]};
    for (int step = 0; step < k; ++step)
        r[(4 - step % 4) % 4] = trace[step];
    Digest d;
    for (int i = 0; i < 4; ++i) d.regs[i] = feedforward ? r[i] + kIv[i] : r[i];
    return d;
}

} // namespace

Digest md4_k(const MessageBlock& block, int k) {
    return digest_from_registers(block, k, true);
}

Digest md4_k_registers(const MessageBlock& block, int k) {
    return digest_from_registers(block, k, false);
}

} // namespace mdsat
