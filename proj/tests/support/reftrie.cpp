// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "reftrie.hpp"

#include <algorithm>
#include <array>

#include <solvkit/hash.hpp>
#include <solvkit/rlp.hpp>

namespace testsupport {

using solvkit::keccak256;
using solvkit::view;
namespace rlp = solvkit::rlp;

std::vector<std::uint8_t> nibbles_of(ByteView data) {
    std::vector<std::uint8_t> out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(b >> 4);
        out.push_back(b & 0x0F);
    }
    return out;
}

namespace {

Bytes hex_prefix(const std::vector<std::uint8_t>& path, bool is_leaf) {
    const std::uint8_t flag = is_leaf ? 2 : 0;
    Bytes out;
    std::size_t i = 0;
    if (path.size() % 2 != 0) {
        out.push_back(static_cast<std::uint8_t>(((flag | 1) << 4) | path[0]));
        i = 1;
    } else {
        out.push_back(static_cast<std::uint8_t>(flag << 4));
    }
    for (; i < path.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>((path[i] << 4) | path[i + 1]));
    }
    return out;
}

}  // namespace

struct RefTrie::Node {
    enum Kind { Leaf, Ext, Branch } kind = Leaf;
    std::vector<std::uint8_t> path;  // Leaf/Ext
    Bytes value;                     // Leaf, or Branch terminal value
    std::array<std::unique_ptr<Node>, 16> children;
    std::unique_ptr<Node> child;  // Ext

    static std::unique_ptr<Node> build(
        std::vector<std::pair<std::vector<std::uint8_t>, Bytes>> pairs) {
        auto node = std::make_unique<Node>();
        if (pairs.size() == 1) {
            node->kind = Leaf;
            node->path = std::move(pairs[0].first);
            node->value = std::move(pairs[0].second);
            return node;
        }
        const std::vector<std::uint8_t>& first = pairs[0].first;
        std::size_t prefix_len = 0;
        while (prefix_len < first.size() &&
               std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) {
                   return p.first.size() > prefix_len &&
                          p.first[prefix_len] == first[prefix_len];
               })) {
            ++prefix_len;
        }
        if (prefix_len > 0) {
            node->kind = Ext;
            node->path.assign(first.begin(), first.begin() + prefix_len);
            for (auto& p : pairs) {
                p.first.erase(p.first.begin(), p.first.begin() + prefix_len);
            }
            node->child = build(std::move(pairs));
            return node;
        }
        node->kind = Branch;
        std::array<std::vector<std::pair<std::vector<std::uint8_t>, Bytes>>, 16> groups;
        for (auto& p : pairs) {
            if (p.first.empty()) {
                node->value = std::move(p.second);
                continue;
            }
            const std::uint8_t nib = p.first[0];
            p.first.erase(p.first.begin());
            groups[nib].push_back(std::move(p));
        }
        for (int nib = 0; nib < 16; ++nib) {
            if (!groups[nib].empty()) node->children[nib] = build(std::move(groups[nib]));
        }
        return node;
    }

    Bytes encode() const {
        return rlp::encode(item());
    }

    rlp::Item item() const {
        if (kind == Leaf) {
            return rlp::Item::items(
                {rlp::Item::string(view(hex_prefix(path, true))), rlp::Item::string(view(value))});
        }
        if (kind == Ext) {
            return rlp::Item::items(
                {rlp::Item::string(view(hex_prefix(path, false))), child->ref()});
        }
        std::vector<rlp::Item> items;
        for (const auto& c : children) {
            items.push_back(c ? c->ref() : rlp::Item::string({}));
        }
        items.push_back(rlp::Item::string(view(value)));
        return rlp::Item::items(std::move(items));
    }

    rlp::Item ref() const {
        const Bytes enc = encode();
        if (enc.size() < 32) return item();  // structural inlining
        const Digest32 h = keccak256(view(enc));
        return rlp::Item::string(view(h));
    }
};

RefTrie::RefTrie(const std::map<Bytes, Bytes>& items_by_path) {
    if (items_by_path.empty()) return;
    std::vector<std::pair<std::vector<std::uint8_t>, Bytes>> pairs;
    pairs.reserve(items_by_path.size());
    for (const auto& [key, value] : items_by_path) {
        pairs.emplace_back(nibbles_of(view(key)), value);
    }
    root_ = Node::build(std::move(pairs));
}

RefTrie::~RefTrie() = default;
RefTrie::RefTrie(RefTrie&&) noexcept = default;
RefTrie& RefTrie::operator=(RefTrie&&) noexcept = default;

Digest32 RefTrie::root_hash() const {
    if (!root_) return keccak256(view(rlp::encode_string({})));
    return keccak256(view(root_->encode()));
}

std::vector<Bytes> RefTrie::prove(ByteView path_key) const {
    std::vector<Bytes> proof;
    if (!root_) return proof;
    std::vector<std::uint8_t> path = nibbles_of(path_key);
    std::size_t pos = 0;
    const Node* node = root_.get();
    proof.push_back(node->encode());
    while (true) {
        const Node* next = nullptr;
        if (node->kind == Node::Leaf) return proof;
        if (node->kind == Node::Ext) {
            if (path.size() - pos < node->path.size() ||
                !std::equal(node->path.begin(), node->path.end(), path.begin() + pos)) {
                return proof;
            }
            pos += node->path.size();
            next = node->child.get();
        } else {
            if (pos == path.size()) return proof;
            next = node->children[path[pos]].get();
            if (next == nullptr) return proof;
            ++pos;
        }
        if (next->encode().size() >= 32) proof.push_back(next->encode());
        node = next;
    }
}

std::optional<Bytes> RefTrie::get(ByteView path_key) const {
    if (!root_) return std::nullopt;
    std::vector<std::uint8_t> path = nibbles_of(path_key);
    std::size_t pos = 0;
    const Node* node = root_.get();
    while (true) {
        switch (node->kind) {
            case Node::Leaf:
                if (path.size() - pos == node->path.size() &&
                    std::equal(node->path.begin(), node->path.end(), path.begin() + pos)) {
                    return node->value;
                }
                return std::nullopt;
            case Node::Ext:
                if (path.size() - pos < node->path.size() ||
                    !std::equal(node->path.begin(), node->path.end(), path.begin() + pos)) {
                    return std::nullopt;
                }
                pos += node->path.size();
                node = node->child.get();
                break;
            case Node::Branch: {
                if (pos == path.size()) {
                    if (node->value.empty()) return std::nullopt;
                    return node->value;
                }
                const Node* next = node->children[path[pos]].get();
                if (next == nullptr) return std::nullopt;
                ++pos;
                node = next;
                break;
            }
        }
    }
}

}  // namespace testsupport
