// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>

#include <solvkit/ethstate.hpp>
#include <solvkit/hash.hpp>
#include <solvkit/rlp.hpp>

namespace solvkit {

namespace {

std::vector<std::uint8_t> nibbles_of(ByteView data) {
    std::vector<std::uint8_t> out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(b >> 4);
        out.push_back(b & 0x0F);
    }
    return out;
}

struct HexPrefix {
    bool is_leaf = false;
    std::vector<std::uint8_t> nibbles;
};

HexPrefix decode_hex_prefix(const Bytes& hp) {
    if (hp.empty()) throw Error("InvalidProof", "empty hex-prefix path");
    const std::uint8_t flag = hp[0] >> 4;
    if (flag > 3) throw Error("InvalidProof", "bad hex-prefix flag");
    HexPrefix out;
    out.is_leaf = (flag & 2) != 0;
    const bool odd = (flag & 1) != 0;
    if (!odd && (hp[0] & 0x0F) != 0) {
        throw Error("InvalidProof", "even hex-prefix path with nonzero pad nibble");
    }
    auto nibs = nibbles_of(view(hp));
    out.nibbles.assign(nibs.begin() + (odd ? 1 : 2), nibs.end());
    return out;
}

// keccak256(rlp("")), the root of an empty trie
const Digest32 kEmptyTrieRoot = keccak256(view(rlp::encode_string({})));

}  // namespace

std::optional<Bytes> verify_mpt_proof(const Digest32& expected_root, ByteView key,
                                      const std::vector<Bytes>& proof_nodes) {
    if (proof_nodes.empty()) {
        if (expected_root == kEmptyTrieRoot) return std::nullopt;
        throw Error("InvalidProof", "no proof nodes");
    }

    const Digest32 hashed_key = keccak256(key);
    const std::vector<std::uint8_t> path = nibbles_of(view(hashed_key));
    std::size_t pos = 0;

    std::map<Digest32, const Bytes*> by_hash;
    for (std::size_t i = 1; i < proof_nodes.size(); ++i) {
        by_hash.emplace(keccak256(view(proof_nodes[i])), &proof_nodes[i]);
    }
    if (by_hash.size() != proof_nodes.size() - 1) {
        throw Error("InvalidProof", "duplicate proof node");
    }
    std::size_t used = 0;

    if (keccak256(view(proof_nodes[0])) != expected_root) {
        throw Error("InvalidProof", "first node does not hash to the expected root");
    }

    const auto finish = [&](std::optional<Bytes> result) -> std::optional<Bytes> {
        if (used != proof_nodes.size() - 1) {
            throw Error("InvalidProof", "unused trailing proof nodes");
        }
        return result;
    };

    rlp::Item node;
    try {
        node = rlp::decode(view(proof_nodes[0]));
    } catch (const Error&) {
        throw Error("InvalidProof", "undecodable proof node");
    }

    while (true) {
        if (!node.is_list) throw Error("InvalidProof", "node is not a list");

        const rlp::Item* child = nullptr;
        if (node.list.size() == 17) {
            if (pos == path.size()) {
                const rlp::Item& value = node.list[16];
                if (value.is_list) throw Error("InvalidProof", "branch value is a list");
                if (value.str.empty()) return finish(std::nullopt);
                return finish(value.str);
            }
            child = &node.list[path[pos]];
            ++pos;
            if (!child->is_list && child->str.empty()) {
                // path ends at an empty branch slot: proven absent
                return finish(std::nullopt);
            }
        } else if (node.list.size() == 2) {
            if (node.list[0].is_list) throw Error("InvalidProof", "path item is a list");
            const HexPrefix hp = decode_hex_prefix(node.list[0].str);
            const std::vector<std::uint8_t>& nibs = hp.nibbles;
            const bool prefix_matches =
                path.size() - pos >= nibs.size() &&
                std::equal(nibs.begin(), nibs.end(), path.begin() + pos);
            if (hp.is_leaf) {
                if (node.list[1].is_list) throw Error("InvalidProof", "leaf value is a list");
                if (prefix_matches && pos + nibs.size() == path.size()) {
                    return finish(node.list[1].str);
                }
                // diverging leaf: proven absent
                return finish(std::nullopt);
            }
            if (!prefix_matches) return finish(std::nullopt);
            pos += nibs.size();
            child = &node.list[1];
            if (!child->is_list && child->str.empty()) {
                throw Error("InvalidProof", "extension with empty child");
            }
        } else {
            throw Error("InvalidProof", "node arity is neither 2 nor 17");
        }

        if (child->is_list) {
            node = *child;  // inlined node, embedded structurally
            continue;
        }
        if (child->str.size() != 32) {
            throw Error("InvalidProof", "child reference is neither empty, 32 bytes, nor inlined");
        }
        const auto it = by_hash.find(digest_from(view(child->str)));
        if (it == by_hash.end()) {
            throw Error("InvalidProof", "proof truncated: referenced node missing");
        }
        const Bytes* next_bytes = it->second;
        by_hash.erase(it);
        ++used;
        try {
            node = rlp::decode(view(*next_bytes));
        } catch (const Error&) {
            throw Error("InvalidProof", "undecodable proof node");
        }
    }
}

}  // namespace solvkit
