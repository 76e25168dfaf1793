#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mdsat {

// One 512-bit message block, stored as sixteen 32-bit words m[0..15].
// Bit j of word i sits at global bit position 32*i + j (j = 0 is the LSB).
struct MessageBlock {
    std::array<std::uint32_t, 16> words{};

    bool bit(int pos) const;       // pos in [0, 512)
    void set_bit(int pos, bool v); // pos in [0, 512)

    // 128 hex chars, bytes in memory order (little-endian words).
    static MessageBlock from_hex(const std::string& hex);
    std::string to_hex() const;

    bool operator==(const MessageBlock&) const = default;
};

// 128-bit digest: registers A, B, C, D serialized little-endian.
struct Digest {
    std::array<std::uint32_t, 4> regs{};

    bool bit(int pos) const; // pos in [0, 128), 32*reg + bit
    void set_bit(int pos, bool v);

    // 32 hex chars, bytes in memory order.
    static Digest from_hex(const std::string& hex);
    std::string to_hex() const;

    bool operator==(const Digest&) const = default;
};

// Chaining values: entry i-1 is the 32-bit register value freshly written
// at step i (after rotation).
using ChainingTrace = std::vector<std::uint32_t>;

inline constexpr int kMd4FullSteps = 48;

// MD4 truncated to the first k steps, final feedforward addition retained.
// Throws std::invalid_argument unless 1 <= k <= 48.
Digest md4_k(const MessageBlock& block, int k);

// Same truncation, but the digest is taken directly from the registers after
// step k, without the final IV feedforward addition.
Digest md4_k_registers(const MessageBlock& block, int k);

// Per-step chaining values consumed by md4_k; length == k.
ChainingTrace chaining_trace(const MessageBlock& block, int k);

} // namespace mdsat
