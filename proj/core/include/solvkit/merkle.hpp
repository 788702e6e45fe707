// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <solvkit/bytes.hpp>
#include <solvkit/hash.hpp>

namespace solvkit {

struct MerklePath {
    std::uint64_t leaf_index = 0;
    std::vector<Digest32> siblings;  // bottom-up

    bool operator==(const MerklePath& other) const = default;
};

std::string merkle_path_to_json(const MerklePath& path);
MerklePath merkle_path_from_json(std::string_view text);

// Padded binary Merkle tree with domain-separated hashing:
//   leaf     = keccak256(0x00 || leaf_bytes)
//   internal = keccak256(0x01 || left || right)
// Leaves are padded to the next power of two with keccak256(0x00).
class MerkleTree {
  public:
    static MerkleTree build(const std::vector<Bytes>& leaves);

    static Digest32 leaf_digest(ByteView leaf_bytes);
    static Digest32 internal_digest(const Digest32& left, const Digest32& right);
    static Digest32 empty_leaf_digest();

    const Digest32& root() const { return levels_.back()[0]; }
    std::size_t depth() const { return levels_.size() - 1; }
    std::size_t width() const { return levels_[0].size(); }
    std::size_t real_leaf_count() const { return real_leaf_count_; }
    const std::vector<std::vector<Digest32>>& levels() const { return levels_; }

    MerklePath prove(std::uint64_t index) const;

    static bool verify(const Digest32& root, ByteView leaf_bytes, const MerklePath& path);

  private:
    MerkleTree() = default;

    std::vector<std::vector<Digest32>> levels_;  // levels_[0] = leaves, back = root
    std::size_t real_leaf_count_ = 0;
};

}  // namespace solvkit
