// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <solvkit/btcstate.hpp>
#include <solvkit/ecdsa.hpp>
#include <solvkit/ethstate.hpp>
#include <solvkit/liabilities.hpp>

namespace solvkit {

enum class SigScheme { EthKeccak, BtcSha256d };

std::string to_string(SigScheme scheme);
SigScheme sig_scheme_from_string(std::string_view name);

struct OwnershipSignature {
    ecdsa::RecoverableSig sig;
    SigScheme scheme = SigScheme::EthKeccak;
};

// "PPOS-v1" || 8-byte big-endian round id || liabilities root ||
// 1-byte chain tag length || chain tag.  Binding round and root blocks
// replaying old ownership proofs.
Bytes ownership_message(std::uint64_t round_id, const Digest32& liabilities_root,
                        std::string_view chain_tag);

OwnershipSignature sign_ownership(const Digest32& secret, SigScheme scheme,
                                  ByteView message);

// claimed: 20-byte address under EthKeccak, locking script under BtcSha256d.
bool verify_ownership(ByteView claimed, const OwnershipSignature& sig, ByteView message);

struct SolvencyStatement {
    std::uint64_t round_id = 0;
    Digest32 liabilities_root{};
    std::uint64_t liabilities_sum_leaf_index = 0;
    std::optional<Digest32> eth_block_hash;
    std::optional<Digest32> btc_utxo_root;
    std::optional<Digest32> btc_snapshot_block;
};

struct ReserveClaim {
    AssetKey asset;
    Amount amount;            // claimed reserve, the inner relation's minimum
    std::string relation;     // eth-reserve-v1 | erc20-reserve-v1 | btc-reserve-v1
    Bytes inner_statement;    // canonical statement bytes of that relation
    Bytes inner_witness;      // canonical witness bytes of that relation
    OwnershipSignature ownership;
};

struct SolvencyWitness {
    std::vector<RawBalanceEntry> sum_entries;  // the sum leaf, opened
    MerklePath sum_leaf_path;
    std::vector<ReserveClaim> claims;
};

RelationVerdict check_solvency_relation(const SolvencyStatement& statement,
                                        const SolvencyWitness& witness);

Bytes solvency_statement_bytes(const SolvencyStatement& statement);
SolvencyStatement parse_solvency_statement(ByteView data);
Bytes solvency_witness_bytes(const SolvencyWitness& witness);
SolvencyWitness parse_solvency_witness(ByteView data);

}  // namespace solvkit
