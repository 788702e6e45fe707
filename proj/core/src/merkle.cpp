// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <solvkit/merkle.hpp>

#include <json.hpp>

namespace solvkit {

namespace {

constexpr std::uint8_t kLeafPrefix = 0x00;
constexpr std::uint8_t kInternalPrefix = 0x01;

std::size_t next_pow2(std::size_t n) {
    std::size_t w = 1;
    while (w < n) w <<= 1;
    return w;
}

}  // namespace

Digest32 MerkleTree::leaf_digest(ByteView leaf_bytes) {
    return keccak256({ByteView(&kLeafPrefix, 1), leaf_bytes});
}

Digest32 MerkleTree::internal_digest(const Digest32& left, const Digest32& right) {
    return keccak256({ByteView(&kInternalPrefix, 1), view(left), view(right)});
}

Digest32 MerkleTree::empty_leaf_digest() { return leaf_digest({}); }

MerkleTree MerkleTree::build(const std::vector<Bytes>& leaves) {
    if (leaves.empty()) throw Error("EmptyInput", "tree needs at least one leaf");
    MerkleTree t;
    t.real_leaf_count_ = leaves.size();
    const std::size_t width = next_pow2(leaves.size());

    std::vector<Digest32> level;
    level.reserve(width);
    for (const Bytes& leaf : leaves) level.push_back(leaf_digest(view(leaf)));
    level.resize(width, empty_leaf_digest());
    t.levels_.push_back(std::move(level));

    while (t.levels_.back().size() > 1) {
        const std::vector<Digest32>& below = t.levels_.back();
        std::vector<Digest32> above;
        above.reserve(below.size() / 2);
        for (std::size_t i = 0; i < below.size(); i += 2) {
            above.push_back(internal_digest(below[i], below[i + 1]));
        }
        t.levels_.push_back(std::move(above));
    }
    return t;
}

MerklePath MerkleTree::prove(std::uint64_t index) const {
    if (index >= width()) throw Error("IndexOutOfRange", "leaf index beyond padded width");
    MerklePath path;
    path.leaf_index = index;
    std::uint64_t pos = index;
    for (std::size_t level = 0; level < depth(); ++level) {
        path.siblings.push_back(levels_[level][pos ^ 1]);
        pos >>= 1;
    }
    return path;
}

bool MerkleTree::verify(const Digest32& root, ByteView leaf_bytes, const MerklePath& path) {
    if (path.siblings.size() >= 64) return false;
    if (path.leaf_index >> path.siblings.size() != 0) return false;
    Digest32 node = leaf_digest(leaf_bytes);
    std::uint64_t pos = path.leaf_index;
    for (const Digest32& sibling : path.siblings) {
        node = pos & 1 ? internal_digest(sibling, node) : internal_digest(node, sibling);
        pos >>= 1;
    }
    return node == root;
}

std::string merkle_path_to_json(const MerklePath& path) {
    nlohmann::ordered_json j;
    j["leaf_index"] = path.leaf_index;
    auto& siblings = j["siblings"] = nlohmann::json::array();
    for (const Digest32& s : path.siblings) siblings.push_back(to_hex_prefixed(view(s)));
    return j.dump();
}

MerklePath merkle_path_from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("leaf_index") ||
        !j.contains("siblings") || !j["siblings"].is_array()) {
        throw Error("MalformedPath", "bad merkle path record");
    }
    MerklePath path;
    path.leaf_index = j["leaf_index"].get<std::uint64_t>();
    for (const auto& s : j["siblings"]) {
        path.siblings.push_back(digest_from_hex(s.get<std::string>()));
    }
    return path;
}

}  // namespace solvkit
