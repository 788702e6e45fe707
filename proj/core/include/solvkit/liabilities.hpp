// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <solvkit/amount.hpp>
#include <solvkit/bytes.hpp>
#include <solvkit/merkle.hpp>
#include <solvkit/verdict.hpp>

namespace solvkit {

// (network, asset) pair; asset is all-zero for the network's native asset.
struct AssetKey {
    std::string network;
    Address asset{};

    std::strong_ordering operator<=>(const AssetKey& other) const = default;
};

using BalanceEntry = std::pair<AssetKey, Amount>;

struct UserLeaf {
    Digest32 user_id_commitment{};
    Digest32 salt{};
    std::vector<BalanceEntry> balances;  // sorted by (network, asset)

    // 0x4c || commitment || 4-byte count || entries
    // entry = 1-byte network length || network || 20-byte asset || 32-byte amount
    Bytes canonical_bytes() const;
};

struct SumLeaf {
    std::vector<BalanceEntry> totals;  // sorted by (network, asset)

    // 0x53 || 4-byte count || entries as in UserLeaf
    Bytes canonical_bytes() const;
};

struct LiabilityTree {
    MerkleTree tree;
    std::vector<UserLeaf> user_leaves;
    SumLeaf sum_leaf;
    std::size_t sum_leaf_index = 0;  // == user_leaves.size()

    const Digest32& root() const { return tree.root(); }
};

// Validates the balances (DuplicateAsset, InvalidAsset) and sorts them.
UserLeaf make_user_leaf(ByteView user_id, std::vector<BalanceEntry> balances,
                        const Digest32& salt);

// Appends the per-asset sum leaf at index N and builds the padded tree.
// Throws Error("EmptyInput") and Error("SumOverflow").
LiabilityTree build_liability_tree(std::vector<UserLeaf> user_leaves);

struct UserProofBundle {
    Bytes leaf_bytes;
    Digest32 salt{};
    MerklePath path;
    Digest32 root{};
};

UserProofBundle export_user_proof(const LiabilityTree& tree, std::size_t user_index);
bool verify_user_proof(const UserProofBundle& bundle);

std::string user_proof_to_json(const UserProofBundle& bundle);
UserProofBundle user_proof_from_json(std::string_view text);

struct LiabilityStatement {
    Digest32 root{};
    std::uint64_t sum_leaf_index = 0;
};

// Witness entries keep raw amount bytes so malformed encodings stay
// representable; the relation rejects them instead of the parser.
struct RawBalanceEntry {
    AssetKey key;
    Bytes amount_be;
};

struct RawLeaf {
    Digest32 user_id_commitment{};
    std::vector<RawBalanceEntry> entries;
};

struct LiabilityWitness {
    std::vector<RawLeaf> user_leaves;
    std::vector<RawBalanceEntry> sum_entries;
};

RelationVerdict check_liability_relation(const LiabilityStatement& statement,
                                         const LiabilityWitness& witness);

LiabilityWitness witness_of(const LiabilityTree& tree);

// Canonical statement/witness byte forms (compact JSON, fixed key order).
Bytes liability_statement_bytes(const LiabilityStatement& statement);
LiabilityStatement parse_liability_statement(ByteView data);
Bytes liability_witness_bytes(const LiabilityWitness& witness);
LiabilityWitness parse_liability_witness(ByteView data);

}  // namespace solvkit
