// Test-only MD4 oracle, transcribed from the RFC 1320 reference description.
// Deliberately independent of the library implementation: operates on a raw
// 64-byte buffer with the classic macro formulation.
#pragma once

#include <cstdint>
#include <cstring>

namespace refmd4 {

inline void compress(const unsigned char block[64], std::uint32_t digest[4]) {
    std::uint32_t x[16];
    for (int i = 0; i < 16; ++i)
        x[i] = static_cast<std::uint32_t>(block[4 * i]) |
               static_cast<std::uint32_t>(block[4 * i + 1]) << 8 |
               static_cast<std::uint32_t>(block[4 * i + 2]) << 16 |
               static_cast<std::uint32_t>(block[4 * i + 3]) << 24;

    std::uint32_t a = 0x67452301u, b = 0xefcdab89u, c = 0x98badcfeu,
                  d = 0x10325476u;

#define REF_F(x, y, z) (((x) & (y)) | ((~(x)) & (z)))
#define REF_G(x, y, z) (((x) & (y)) | ((x) & (z)) | ((y) & (z)))
#define REF_H(x, y, z) ((x) ^ (y) ^ (z))
#define REF_ROT(v, n) (((v) << (n)) | ((v) >> (32 - (n))))
#define REF_FF(a, b, c, d, k, s) \
    (a) = REF_ROT((a) + REF_F(b, c, d) + x[k], s)
#define REF_GG(a, b, c, d, k, s) \
    (a) = REF_ROT((a) + REF_G(b, c, d) + x[k] + 0x5a827999u, s)
#define REF_HH(a, b, c, d, k, s) \
    (a) = REF_ROT((a) + REF_H(b, c, d) + x[k] + 0x6ed9eba1u, s)

    REF_FF(a, b, c, d, 0, 3);   REF_FF(d, a, b, c, 1, 7);
    REF_FF(c, d, a, b, 2, 11);  REF_FF(b, c, d, a, 3, 19);
    REF_FF(a, b, c, d, 4, 3);   REF_FF(d, a, b, c, 5, 7);
    REF_FF(c, d, a, b, 6, 11);  REF_FF(b, c, d, a, 7, 19);
    REF_FF(a, b, c, d, 8, 3);   REF_FF(d, a, b, c, 9, 7);
    REF_FF(c, d, a, b, 10, 11); REF_FF(b, c, d, a, 11, 19);
    REF_FF(a, b, c, d, 12, 3);  REF_FF(d, a, b, c, 13, 7);
    REF_FF(c, d, a, b, 14, 11); REF_FF(b, c, d, a, 15, 19);

    REF_GG(a, b, c, d, 0, 3);   REF_GG(d, a, b, c, 4, 5);
    REF_GG(c, d, a, b, 8, 9);   REF_GG(b, c, d, a, 12, 13);
    REF_GG(a, b, c, d, 1, 3);   REF_GG(d, a, b, c, 5, 5);
    REF_GG(c, d, a, b, 9, 9);   REF_GG(b, c, d, a, 13, 13);
    REF_GG(a, b, c, d, 2, 3);   REF_GG(d, a, b, c, 6, 5);
    REF_GG(c, d, a, b, 10, 9);  REF_GG(b, c, d, a, 14, 13);
    REF_GG(a, b, c, d, 3, 3);   REF_GG(d, a, b, c, 7, 5);
    REF_GG(c, d, a, b, 11, 9);  REF_GG(b, c, d, a, 15, 13);

    REF_HH(a, b, c, d, 0, 3);   REF_HH(d, a, b, c, 8, 9);
    REF_HH(c, d, a, b, 4, 11);  REF_HH(b, c, d, a, 12, 15);
    REF_HH(a, b, c, d, 2, 3);   REF_HH(d, a, b, c, 10, 9);
    REF_HH(c, d, a, b, 6, 11);  REF_HH(b, c, d, a, 14, 15);
    REF_HH(a, b, c, d, 1, 3);   REF_HH(d, a, b, c, 9, 9);
    REF_HH(c, d, a, b, 5, 11);  REF_HH(b, c, d, a, 13, 15);
    REF_HH(a, b, c, d, 3, 3);   REF_HH(d, a, b, c, 11, 9);
    REF_HH(c, d, a, b, 7, 11);  REF_HH(b, c, d, a, 15, 15);

#undef REF_F
#undef REF_G
#undef REF_H
#undef REF_ROT
#undef REF_FF
#undef REF_GG
#undef REF_HH

    digest[0] = a + 0x67452301u;
    digest[1] = b + 0xefcdab89u;
    digest[2] = c + 0x98badcfeu;
    digest[3] = d + 0x10325476u;
}

// Single-block MD4 of a short message (<= 55 bytes) with RFC padding.
inline void md4_short(const unsigned char* msg, std::size_t len,
                      std::uint32_t digest[4]) {
    unsigned char block[64];
    std::memset(block, 0, sizeof(block));
    std::memcpy(block, msg, len);
    block[len] = 0x80;
    std::uint64_t bits = static_cast<std::uint64_t>(len) * 8;
    for (int i = 0; i < 8; ++i)
        block[56 + i] = static_cast<unsigned char>(bits >> (8 * i));
    compress(block, digest);
}

} // namespace refmd4
