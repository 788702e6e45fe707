// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>

#include <solvkit/bytes.hpp>

namespace solvkit {
namespace ecdsa {

// Compact secp256k1 signature: r || s (each 32 bytes) plus a recovery id.
// s is always in the low half of the group order.
struct RecoverableSig {
    std::array<std::uint8_t, 64> rs{};
    std::uint8_t recid = 0;

    bool operator==(const RecoverableSig& other) const = default;
};

using PubKeyUncompressed = std::array<std::uint8_t, 65>;  // 0x04 || X || Y
using PubKeyCompressed = std::array<std::uint8_t, 33>;    // 0x02/0x03 || X

// Deterministic nonce per RFC 6979 (HMAC-SHA256).  Throws
// Error("InvalidKey") when the secret is 0 or >= the group order.
RecoverableSig sign_recoverable(const Digest32& secret, const Digest32& digest);

// nullopt when the signature does not recover to a valid point.
std::optional<PubKeyUncompressed> recover_pubkey(const RecoverableSig& sig,
                                                 const Digest32& digest);

PubKeyUncompressed derive_pubkey(const Digest32& secret);
PubKeyCompressed compress_pubkey(const PubKeyUncompressed& pub);

// last 20 bytes of keccak256(X || Y)
Address eth_address_of(const PubKeyUncompressed& pub);
// OP_DUP OP_HASH160 <hash160(compressed pub)> OP_EQUALVERIFY OP_CHECKSIG
Bytes p2pkh_script_of(const PubKeyCompressed& pub);

}  // namespace ecdsa
}  // namespace solvkit
