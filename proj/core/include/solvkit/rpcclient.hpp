// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <solvkit/bytes.hpp>
#include <solvkit/ethstate.hpp>

namespace solvkit {

struct RpcConfig {
    std::string url;
    int timeout_ms = 10000;
    int max_retries = 2;  // total attempts = max_retries + 1
};

// Reads {url, timeout_ms, max_retries} from a JSON config file; the
// SOLVKIT_RPC_URL environment variable overrides the url.
RpcConfig load_rpc_config(const std::string& path);
RpcConfig rpc_config_from_env(std::optional<std::string> url_flag);

// Fetches the account proof and the matching block header, re-encodes the
// header, and verifies everything locally before returning.  Throws
// Error("Transport"), Error("RpcError"), Error("HeaderReencodeMismatch"),
// Error("SelfValidationFailed").
AccountProofBundle fetch_account_proof(const RpcConfig& config, const Address& address,
                                       const std::vector<Digest32>& storage_keys,
                                       const std::string& block_id);

// Fetches header fields, re-encodes per the fork-schema table, and requires
// keccak256(encoding) to equal the node-reported hash.
Bytes fetch_block_header(const RpcConfig& config, const std::string& block_id);

// Re-encodes a block-by-number response's header fields; exposed so the
// fixture path and tests share the schema table.
Bytes encode_header_from_fields(const std::string& header_fields_json);

void record_fixture(const AccountProofBundle& bundle, const std::string& path);
// Loads and re-validates; throws Error("IoError"), Error("FixtureCorrupt").
AccountProofBundle load_fixture(const std::string& path);

// Self-validation used by both fetch and load: header binds, account proof
// walks to the account bytes (or proves absence of an empty account), every
// storage proof walks to its recorded value.
void validate_bundle(const AccountProofBundle& bundle);

}  // namespace solvkit
