// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <solvkit/bytes.hpp>

#include <algorithm>

namespace solvkit {

void append_be32(Bytes& out, std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_be64(Bytes& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_le16(Bytes& out, std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_le32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_le64(Bytes& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int nibble_of(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(ByteView data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0F]);
    }
    return out;
}

std::string to_hex_prefixed(ByteView data) { return "0x" + to_hex(data); }

Bytes from_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
        hex.remove_prefix(2);
    }
    if (hex.size() % 2 != 0) throw Error("BadHex", "odd number of hex digits");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble_of(hex[i]);
        const int lo = nibble_of(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error("BadHex", "invalid hex digit");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Digest32 digest_from(ByteView data) {
    if (data.size() != 32) throw Error("BadLength", "expected 32 bytes");
    Digest32 d;
    std::copy(data.begin(), data.end(), d.begin());
    return d;
}

Address address_from(ByteView data) {
    if (data.size() != 20) throw Error("BadLength", "expected 20 bytes");
    Address a;
    std::copy(data.begin(), data.end(), a.begin());
    return a;
}

Digest32 digest_from_hex(std::string_view hex) { return digest_from(view(from_hex(hex))); }

Address address_from_hex(std::string_view hex) { return address_from(view(from_hex(hex))); }

Error::Error(std::string code, std::string detail)
    : code_(std::move(code)), detail_(std::move(detail)) {
    message_ = code_;
    if (!detail_.empty()) {
        message_ += ": ";
        message_ += detail_;
    }
}

}  // namespace solvkit
