// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstring>

#include <solvkit/hash.hpp>

namespace solvkit {

namespace {

constexpr int kRounds = 24;
constexpr std::size_t kRate = 136;  // 1088-bit rate for 256-bit output

constexpr std::uint64_t kRoundConstants[kRounds] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int kRotations[5][5] = {
    {0, 36, 3, 41, 18},
    {1, 44, 10, 45, 2},
    {62, 6, 43, 15, 61},
    {28, 55, 25, 21, 56},
    {27, 20, 39, 8, 14},
};

inline std::uint64_t rol(std::uint64_t v, int n) {
    return n == 0 ? v : (v << n) | (v >> (64 - n));
}

void keccak_f(std::uint64_t a[5][5]) {
    // a[x][y], lane (x, y) = state lane index x + 5y
    for (int round = 0; round < kRounds; ++round) {
        std::uint64_t c[5];
        for (int x = 0; x < 5; ++x) {
            c[x] = a[x][0] ^ a[x][1] ^ a[x][2] ^ a[x][3] ^ a[x][4];
        }
        std::uint64_t d[5];
        for (int x = 0; x < 5; ++x) {
            d[x] = c[(x + 4) % 5] ^ rol(c[(x + 1) % 5], 1);
        }
        for (int x = 0; x < 5; ++x) {
            for (int y = 0; y < 5; ++y) a[x][y] ^= d[x];
        }
        std::uint64_t b[5][5];
        for (int x = 0; x < 5; ++x) {
            for (int y = 0; y < 5; ++y) {
                b[y][(2 * x + 3 * y) % 5] = rol(a[x][y], kRotations[x][y]);
            }
        }
        for (int x = 0; x < 5; ++x) {
            for (int y = 0; y < 5; ++y) {
                a[x][y] = b[x][y] ^ ((~b[(x + 1) % 5][y]) & b[(x + 2) % 5][y]);
            }
        }
        a[0][0] ^= kRoundConstants[round];
    }
}

struct Sponge {
    std::uint64_t state[5][5] = {};
    std::uint8_t block[kRate];
    std::size_t fill = 0;

    void absorb(ByteView data) {
        for (std::uint8_t byte : data) {
            block[fill++] = byte;
            if (fill == kRate) {
                xor_block();
                keccak_f(state);
                fill = 0;
            }
        }
    }

    void xor_block() {
        for (std::size_t lane = 0; lane < kRate / 8; ++lane) {
            std::uint64_t word;
            std::memcpy(&word, block + 8 * lane, 8);  // little-endian host
            state[lane % 5][lane / 5] ^= word;
        }
    }

    Digest32 finish() {
        std::memset(block + fill, 0, kRate - fill);
        block[fill] ^= 0x01;  // original Keccak multi-rate padding
        block[kRate - 1] ^= 0x80;
        xor_block();
        keccak_f(state);
        Digest32 out;
        for (std::size_t lane = 0; lane < 4; ++lane) {
            std::uint64_t word = state[lane % 5][lane / 5];
            std::memcpy(out.data() + 8 * lane, &word, 8);
        }
        return out;
    }
};

}  // namespace

Digest32 keccak256(ByteView data) {
    Sponge s;
    s.absorb(data);
    return s.finish();
}

Digest32 keccak256(std::initializer_list<ByteView> parts) {
    Sponge s;
    for (ByteView part : parts) s.absorb(part);
    return s.finish();
}

}  // namespace solvkit
