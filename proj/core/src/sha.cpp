// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <openssl/sha.h>

#include <solvkit/hash.hpp>

namespace solvkit {

Digest32 sha256(ByteView data) {
    Digest32 out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

Digest32 sha256d(ByteView data) {
    const Digest32 inner = sha256(data);
    return sha256(view(inner));
}

std::array<std::uint8_t, 20> hash160(ByteView data) {
    const Digest32 inner = sha256(data);
    return ripemd160(view(inner));
}

}  // namespace solvkit
