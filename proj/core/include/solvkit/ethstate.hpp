// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <solvkit/amount.hpp>
#include <solvkit/bytes.hpp>
#include <solvkit/verdict.hpp>

namespace solvkit {

// Walks a hexary trie proof: nodes in order, root node first, every
// hash-referenced node present, nodes < 32 bytes encoded inlined in their
// parent.  The path is the 64 nibbles of keccak256(key) (secure-trie form).
// Returns the value bytes, or nullopt when the proof shows the key absent.
// Throws Error("InvalidProof") on hash mismatch, malformed nodes, truncated
// paths, or unused trailing nodes.
std::optional<Bytes> verify_mpt_proof(const Digest32& expected_root, ByteView key,
                                      const std::vector<Bytes>& proof_nodes);

struct AccountState {
    std::uint64_t nonce = 0;
    Amount balance;
    Digest32 storage_root{};
    Digest32 code_hash{};

    Bytes rlp() const;
    bool operator==(const AccountState& other) const = default;
};

// Throws Error("MalformedAccount") on wrong arity, non-canonical scalars,
// or digest fields that are not 32 bytes.
AccountState decode_account(ByteView data);

struct HeaderInfo {
    Digest32 block_hash{};
    Digest32 state_root{};
};

// Header is an opaque RLP list of >= 15 items; the state root sits at
// index 3.  Throws Error("MalformedHeader").
HeaderInfo header_hash(ByteView header_rlp);

// keccak256(pad32(holder) || pad32(mapping_slot)): the standard storage key
// of mapping[holder] at the given slot.
Digest32 storage_slot_key(const Address& holder, const Amount& mapping_slot);

struct StorageProof {
    Digest32 slot_key{};
    Bytes value;  // RLP-encoded trie value; empty when the slot is absent
    std::vector<Bytes> proof_nodes;

    bool operator==(const StorageProof& other) const = default;
};

struct AccountProofBundle {
    Bytes header_rlp;
    Address address{};
    AccountState account;
    std::vector<Bytes> proof_nodes;
    std::vector<StorageProof> storage_proofs;

    bool operator==(const AccountProofBundle& other) const = default;
};

struct EthReserveStatement {
    Amount min_amount;
    Digest32 block_hash{};
};

struct Erc20ReserveStatement {
    Amount min_amount;
    Digest32 block_hash{};
    Address token_contract{};
    Amount mapping_slot;
};

struct Erc20Witness {
    AccountProofBundle bundle;
    Address holder{};  // stays private; the statement never carries it
};

RelationVerdict check_eth_min_balance_relation(const EthReserveStatement& statement,
                                               const AccountProofBundle& witness);

RelationVerdict check_erc20_min_balance_relation(const Erc20ReserveStatement& statement,
                                                 const Erc20Witness& witness);

// Canonical statement bytes plus witness serialization, as used by the
// attestor and the CLI file handoff.
Bytes eth_statement_bytes(const EthReserveStatement& statement);
EthReserveStatement parse_eth_statement(ByteView data);
Bytes erc20_statement_bytes(const Erc20ReserveStatement& statement);
Erc20ReserveStatement parse_erc20_statement(ByteView data);

Bytes eth_witness_bytes(const AccountProofBundle& bundle);
AccountProofBundle parse_eth_witness(ByteView data);
Bytes erc20_witness_bytes(const Erc20Witness& witness);
Erc20Witness parse_erc20_witness(ByteView data);

}  // namespace solvkit
