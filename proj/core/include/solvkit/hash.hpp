// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <initializer_list>

#include <solvkit/bytes.hpp>

namespace solvkit {

// Keccak-256 with the original 0x01 domain padding (Ethereum), not SHA-3.
Digest32 keccak256(ByteView data);
// Hashes the concatenation of the parts without materializing it.
Digest32 keccak256(std::initializer_list<ByteView> parts);

Digest32 sha256(ByteView data);
Digest32 sha256d(ByteView data);  // sha256(sha256(data))

std::array<std::uint8_t, 20> ripemd160(ByteView data);
std::array<std::uint8_t, 20> hash160(ByteView data);  // ripemd160(sha256(data))

}  // namespace solvkit
