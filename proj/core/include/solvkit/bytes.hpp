// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace solvkit {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Digest32 = std::array<std::uint8_t, 32>;
using Address = std::array<std::uint8_t, 20>;

inline ByteView view(const Bytes& b) { return {b.data(), b.size()}; }

template <std::size_t N>
inline ByteView view(const std::array<std::uint8_t, N>& a) {
    return {a.data(), N};
}

inline ByteView view(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(ByteView v) { return Bytes(v.begin(), v.end()); }

inline void append(Bytes& out, ByteView v) { out.insert(out.end(), v.begin(), v.end()); }

inline void append_u8(Bytes& out, std::uint8_t b) { out.push_back(b); }

// big-endian fixed-width integer append
void append_be32(Bytes& out, std::uint32_t v);
void append_be64(Bytes& out, std::uint64_t v);
void append_le16(Bytes& out, std::uint16_t v);
void append_le32(Bytes& out, std::uint32_t v);
void append_le64(Bytes& out, std::uint64_t v);

// Lowercase hex without prefix.
std::string to_hex(ByteView data);
std::string to_hex_prefixed(ByteView data);

// Accepts an optional 0x/0X prefix; throws Error("BadHex") otherwise strict.
Bytes from_hex(std::string_view hex);

// from_hex with an exact-length requirement.
Digest32 digest_from_hex(std::string_view hex);
Address address_from_hex(std::string_view hex);

Digest32 digest_from(ByteView data);  // requires size 32
Address address_from(ByteView data);  // requires size 20

// Error with a stable machine-readable code plus a human detail string.
class Error : public std::exception {
  public:
    Error(std::string code, std::string detail);
    const char* what() const noexcept override { return message_.c_str(); }
    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    std::string code_;
    std::string detail_;
    std::string message_;
};

}  // namespace solvkit
