// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <solvkit/attestor.hpp>
#include <solvkit/bytes.hpp>

namespace solvkit {

enum class RoundStatus { Open, LiabilitiesSet, Finalized };

std::string to_string(RoundStatus status);

struct SnapshotCommitments {
    std::optional<Digest32> eth_block_hash;
    std::optional<Digest32> btc_utxo_root;
    std::optional<Digest32> btc_snapshot_block;

    bool operator==(const SnapshotCommitments& other) const = default;
};

struct StoredAttestation {
    Bytes statement;  // the exact statement bytes the attestation binds
    Attestation attestation;

    bool operator==(const StoredAttestation& other) const = default;
};

struct Round {
    std::uint64_t round_id = 0;
    RoundStatus status = RoundStatus::Open;
    bool finalized_accepted = false;
    SnapshotCommitments commitments;
    std::optional<Digest32> liabilities_root;
    std::optional<std::uint64_t> sum_leaf_index;
    std::optional<StoredAttestation> liability_attestation;
    std::vector<StoredAttestation> reserve_attestations;
    std::optional<StoredAttestation> solvency_attestation;

    bool operator==(const Round& other) const = default;
};

// Where the append-only event log lives.  Each record is one line; the
// registry adds a per-line digest and verifies it on replay.
class LogStorage {
  public:
    virtual ~LogStorage() = default;
    virtual void append_line(const std::string& line) = 0;
    virtual std::vector<std::string> read_lines() = 0;
};

std::unique_ptr<LogStorage> make_file_log(const std::string& path);
std::unique_ptr<LogStorage> make_memory_log();

// Forward-only round state machine: Open -> LiabilitiesSet -> Finalized,
// round ids strictly increasing from 1.  Every mutating call verifies the
// offered attestation before appending its event.  Single writer; reads
// return copies.
class Registry {
  public:
    explicit Registry(std::unique_ptr<LogStorage> storage);

    // Replays the log on construction; throws Error("LogCorrupt") when a
    // line fails its digest or the events do not replay.
    Round open_round(const SnapshotCommitments& commitments);
    Round submit_liabilities(std::uint64_t round_id, const Digest32& liabilities_root,
                             ByteView statement_bytes, const Attestation& attestation);
    Round submit_reserve(std::uint64_t round_id, ByteView statement_bytes,
                         const Attestation& attestation);
    Round finalize_round(std::uint64_t round_id, ByteView statement_bytes,
                         const Attestation& attestation);

    Round get_round(std::uint64_t round_id) const;
    std::vector<Round> list_rounds() const;

    // Re-verifies every stored attestation against its stored statement.
    bool audit() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;

  public:
    ~Registry();
};

// Compact JSON view of a round, shared by the HTTP surface and the CLI.
std::string round_to_json(const Round& round);

// Optional local HTTP surface mirroring the five operations.
class RegistryServer {
  public:
    RegistryServer(Registry& registry, const std::string& host, int port);
    ~RegistryServer();

    int port() const;
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace solvkit
