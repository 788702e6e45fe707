// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <solvkit/amount.hpp>

namespace solvkit {

Amount Amount::from_u64(std::uint64_t value) {
    Amount a;
    for (int i = 0; i < 8; ++i) {
        a.be_[31 - i] = static_cast<std::uint8_t>(value >> (8 * i));
    }
    return a;
}

Amount Amount::from_decimal(std::string_view text) {
    if (text.empty()) throw Error("InvalidAmount", "empty decimal string");
    Amount a;
    for (char c : text) {
        if (c < '0' || c > '9') throw Error("InvalidAmount", "non-digit in decimal string");
        // a = a * 10 + digit, big-endian schoolbook
        unsigned carry = static_cast<unsigned>(c - '0');
        for (int i = 31; i >= 0; --i) {
            const unsigned v = static_cast<unsigned>(a.be_[i]) * 10 + carry;
            a.be_[i] = static_cast<std::uint8_t>(v & 0xFF);
            carry = v >> 8;
        }
        if (carry != 0) throw Error("InvalidAmount", "value exceeds 32 bytes");
    }
    return a;
}

Amount Amount::from_be(ByteView data) {
    if (data.size() > 32) throw Error("InvalidAmount", "value exceeds 32 bytes");
    Amount a;
    std::copy(data.begin(), data.end(), a.be_.begin() + (32 - data.size()));
    return a;
}

Amount Amount::from_minimal_be(ByteView data) {
    if (!data.empty() && data[0] == 0) {
        throw Error("InvalidAmount", "scalar has leading zero");
    }
    return from_be(data);
}

Bytes Amount::minimal_be() const {
    std::size_t first = 0;
    while (first < 32 && be_[first] == 0) ++first;
    return Bytes(be_.begin() + first, be_.end());
}

bool Amount::is_zero() const {
    return std::all_of(be_.begin(), be_.end(), [](std::uint8_t b) { return b == 0; });
}

std::uint64_t Amount::to_u64() const {
    for (int i = 0; i < 24; ++i) {
        if (be_[i] != 0) throw Error("InvalidAmount", "value exceeds 64 bits");
    }
    std::uint64_t v = 0;
    for (int i = 24; i < 32; ++i) v = (v << 8) | be_[i];
    return v;
}

std::string Amount::to_decimal() const {
    Digest32 work = be_;
    std::string digits;
    bool nonzero = true;
    while (nonzero) {
        unsigned rem = 0;
        nonzero = false;
        for (int i = 0; i < 32; ++i) {
            const unsigned v = (rem << 8) | work[i];
            work[i] = static_cast<std::uint8_t>(v / 10);
            rem = v % 10;
            if (work[i] != 0) nonzero = true;
        }
        digits.push_back(static_cast<char>('0' + rem));
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

std::optional<Amount> Amount::checked_add(const Amount& a, const Amount& b) {
    Amount out;
    unsigned carry = 0;
    for (int i = 31; i >= 0; --i) {
        const unsigned v = static_cast<unsigned>(a.be_[i]) + b.be_[i] + carry;
        out.be_[i] = static_cast<std::uint8_t>(v & 0xFF);
        carry = v >> 8;
    }
    if (carry != 0) return std::nullopt;
    return out;
}

std::strong_ordering Amount::operator<=>(const Amount& other) const {
    for (int i = 0; i < 32; ++i) {
        if (be_[i] != other.be_[i]) return be_[i] <=> other.be_[i];
    }
    return std::strong_ordering::equal;
}

}  // namespace solvkit
