// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <vector>

#include <solvkit/amount.hpp>
#include <solvkit/bytes.hpp>
#include <solvkit/merkle.hpp>
#include <solvkit/verdict.hpp>

namespace solvkit {

struct Utxo {
    Digest32 txid{};  // internal byte order
    std::uint32_t vout = 0;
    std::uint64_t amount_sats = 0;
    Bytes script_pubkey;

    // txid || 4-byte LE vout || 8-byte LE amount || 2-byte LE script length || script
    Bytes leaf_bytes() const;

    bool operator==(const Utxo& other) const = default;
};

struct UtxoSnapshot {
    Digest32 block_hash{};
    std::vector<Utxo> utxos;  // sorted ascending by (txid, vout), no duplicates
};

struct UtxoTree {
    MerkleTree tree;
    Digest32 snapshot_block{};
    std::size_t utxo_count = 0;

    const Digest32& root() const { return tree.root(); }
};

// Reads the dump stream: a {block_hash_hex} preamble line, then one
// {txid_hex, vout, amount_sats, script_hex} record per line.  Sorts and
// rejects duplicates.  Throws Error("MalformedRecord"), Error("DuplicateOutpoint").
UtxoSnapshot ingest_chainstate(std::istream& dump);

// Canonicalizes an in-memory record list the same way.
UtxoSnapshot make_snapshot(const Digest32& block_hash, std::vector<Utxo> utxos);

// Throws Error("EmptyInput") on a snapshot with no UTXOs.
UtxoTree build_utxo_tree(const UtxoSnapshot& snapshot);

std::string snapshot_to_json(const UtxoSnapshot& snapshot);
UtxoSnapshot snapshot_from_json(std::string_view text);

struct BtcReserveStatement {
    Digest32 utxo_root{};
    Digest32 snapshot_block{};
    Amount min_amount;
};

struct BtcReserveWitness {
    std::vector<Utxo> utxos;
    std::vector<MerklePath> paths;
    Bytes script_template;  // the one locking script all witness UTXOs share
};

RelationVerdict check_btc_reserve_relation(const BtcReserveStatement& statement,
                                           const BtcReserveWitness& witness);

Bytes btc_statement_bytes(const BtcReserveStatement& statement);
BtcReserveStatement parse_btc_statement(ByteView data);
Bytes btc_witness_bytes(const BtcReserveWitness& witness);
BtcReserveWitness parse_btc_witness(ByteView data);

}  // namespace solvkit
