// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <solvkit/rlp.hpp>

namespace solvkit {
namespace rlp {

namespace {

void append_length(Bytes& out, std::size_t n, std::uint8_t short_offset) {
    // short_offset is 0x80 for strings, 0xc0 for lists
    if (n < 56) {
        out.push_back(static_cast<std::uint8_t>(short_offset + n));
        return;
    }
    Bytes be;
    for (std::size_t v = n; v > 0; v >>= 8) be.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(short_offset + 55 + be.size()));
    out.insert(out.end(), be.rbegin(), be.rend());
}

void encode_into(Bytes& out, const Item& item) {
    if (!item.is_list) {
        if (item.str.size() == 1 && item.str[0] < 0x80) {
            out.push_back(item.str[0]);
            return;
        }
        append_length(out, item.str.size(), 0x80);
        append(out, view(item.str));
        return;
    }
    Bytes payload;
    for (const Item& child : item.list) encode_into(payload, child);
    append_length(out, payload.size(), 0xC0);
    append(out, view(payload));
}

struct Cursor {
    ByteView data;
    std::size_t pos = 0;

    std::uint8_t peek() const {
        if (pos >= data.size()) throw Error("MalformedRlp", "unexpected end of input");
        return data[pos];
    }
    ByteView take(std::size_t n) {
        if (data.size() - pos < n) throw Error("MalformedRlp", "unexpected end of input");
        ByteView out = data.subspan(pos, n);
        pos += n;
        return out;
    }
};

std::size_t read_long_length(Cursor& cur, std::size_t len_of_len) {
    ByteView be = cur.take(len_of_len);
    if (be[0] == 0) throw Error("MalformedRlp", "length has leading zero byte");
    if (len_of_len > sizeof(std::size_t)) throw Error("MalformedRlp", "length too large");
    std::size_t n = 0;
    for (std::uint8_t b : be) n = (n << 8) | b;
    if (n < 56) throw Error("MalformedRlp", "long form used for short length");
    return n;
}

Item decode_one(Cursor& cur) {
    const std::uint8_t prefix = cur.peek();
    cur.pos += 1;
    if (prefix < 0x80) {
        Item it;
        it.str.push_back(prefix);
        return it;
    }
    if (prefix <= 0xB7) {
        const std::size_t n = prefix - 0x80;
        ByteView payload = cur.take(n);
        if (n == 1 && payload[0] < 0x80) {
            throw Error("MalformedRlp", "single byte below 0x80 must self-encode");
        }
        Item it;
        it.str = to_bytes(payload);
        return it;
    }
    if (prefix <= 0xBF) {
        const std::size_t n = read_long_length(cur, prefix - 0xB7);
        Item it;
        it.str = to_bytes(cur.take(n));
        return it;
    }
    std::size_t n;
    if (prefix <= 0xF7) {
        n = prefix - 0xC0;
    } else {
        n = read_long_length(cur, prefix - 0xF7);
    }
    Cursor inner{cur.take(n), 0};
    Item it;
    it.is_list = true;
    while (inner.pos < inner.data.size()) {
        it.list.push_back(decode_one(inner));
    }
    return it;
}

}  // namespace

Item Item::scalar(std::uint64_t value) {
    Item it;
    for (std::uint64_t v = value; v > 0; v >>= 8) {
        it.str.insert(it.str.begin(), static_cast<std::uint8_t>(v & 0xFF));
    }
    return it;
}

Bytes encode(const Item& item) {
    Bytes out;
    encode_into(out, item);
    return out;
}

Bytes encode_string(ByteView data) {
    Bytes out;
    if (data.size() == 1 && data[0] < 0x80) {
        out.push_back(data[0]);
        return out;
    }
    append_length(out, data.size(), 0x80);
    append(out, data);
    return out;
}

Bytes wrap_list(ByteView concatenated_payload) {
    Bytes out;
    append_length(out, concatenated_payload.size(), 0xC0);
    append(out, concatenated_payload);
    return out;
}

Item decode(ByteView data) {
    Cursor cur{data, 0};
    Item item = decode_one(cur);
    if (cur.pos != data.size()) throw Error("MalformedRlp", "trailing bytes after item");
    return item;
}

std::uint64_t to_u64(const Item& item) {
    if (item.is_list) throw Error("MalformedRlp", "scalar expected, found list");
    if (item.str.size() > 8) throw Error("MalformedRlp", "scalar exceeds 64 bits");
    if (!item.str.empty() && item.str[0] == 0) {
        throw Error("MalformedRlp", "scalar has leading zero");
    }
    std::uint64_t v = 0;
    for (std::uint8_t b : item.str) v = (v << 8) | b;
    return v;
}

}  // namespace rlp
}  // namespace solvkit
