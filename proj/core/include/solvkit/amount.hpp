// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <solvkit/bytes.hpp>

namespace solvkit {

// Non-negative integer in an asset's minimal unit, canonically a 32-byte
// big-endian string.  Values needing more than 32 bytes are unrepresentable.
class Amount {
  public:
    Amount() { be_.fill(0); }

    static Amount from_u64(std::uint64_t value);
    // Throws Error("InvalidAmount") on non-digits, empty input, or overflow.
    static Amount from_decimal(std::string_view text);
    // Big-endian input of at most 32 bytes; longer throws Error("InvalidAmount").
    static Amount from_be(ByteView data);
    // Minimal big-endian (no leading zero) as used by RLP scalars; a leading
    // zero byte throws Error("InvalidAmount").
    static Amount from_minimal_be(ByteView data);

    const Digest32& be32() const { return be_; }
    Bytes minimal_be() const;
    std::string to_decimal() const;
    bool is_zero() const;
    // Low 8 bytes as u64; throws Error("InvalidAmount") if the value exceeds 64 bits.
    std::uint64_t to_u64() const;

    // nullopt when the sum exceeds 32 bytes
    static std::optional<Amount> checked_add(const Amount& a, const Amount& b);

    std::strong_ordering operator<=>(const Amount& other) const;
    bool operator==(const Amount& other) const = default;

  private:
    Digest32 be_;
};

}  // namespace solvkit
