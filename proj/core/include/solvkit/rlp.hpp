// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <solvkit/bytes.hpp>

namespace solvkit {
namespace rlp {

// Tree form of one RLP item: a byte string or a list of items.
struct Item {
    bool is_list = false;
    Bytes str;
    std::vector<Item> list;

    static Item string(ByteView data) {
        Item it;
        it.str = to_bytes(data);
        return it;
    }
    // Minimal big-endian scalar; zero encodes as the empty string.
    static Item scalar(std::uint64_t value);
    static Item items(std::vector<Item> children) {
        Item it;
        it.is_list = true;
        it.list = std::move(children);
        return it;
    }

    bool operator==(const Item& other) const = default;
};

Bytes encode(const Item& item);
Bytes encode_string(ByteView data);

// Wraps pre-encoded child payloads in a list header.
Bytes wrap_list(ByteView concatenated_payload);

// Strict canonical decoder; rejects non-minimal forms and trailing bytes
// with Error("MalformedRlp").
Item decode(ByteView data);

// Scalar view of a decoded string: big-endian, no leading zero, fits u64.
std::uint64_t to_u64(const Item& item);

}  // namespace rlp
}  // namespace solvkit
