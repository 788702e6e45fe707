// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <solvkit/bytes.hpp>
#include <solvkit/verdict.hpp>

namespace solvkit {

// The closed set of relation names this build knows.
bool is_known_relation(std::string_view name);

struct Attestation {
    std::string relation;
    Digest32 statement_digest{};  // keccak256 of the canonical statement bytes
    std::string backend;          // "transparent-v1"
    Bytes payload;                // transparent backend: the sealed witness bytes

    bool operator==(const Attestation& other) const = default;
};

// Runs the named relation over (statement, witness); returns an attestation
// only on accept.  Throws Error("UnknownRelation"), Error("ParseError"),
// Error("RelationRejected") — the latter's detail carries "reason: detail"
// of the verdict.
Attestation attest(std::string_view relation, ByteView statement_bytes,
                   ByteView witness_bytes);

// Recomputes the statement digest and re-runs the relation over the sealed
// witness.  All failures come back as verdicts (reason StatementMismatch,
// UnknownRelation, UnknownBackend, ParseError, or the relation's own code).
RelationVerdict verify_attestation(ByteView statement_bytes, const Attestation& attestation);

// Runs the named relation directly; same dispatch attest uses.
RelationVerdict run_relation(std::string_view relation, ByteView statement_bytes,
                             ByteView witness_bytes);

// File form: {relation, backend, statement_digest_hex, payload_base64}
std::string attestation_to_json(const Attestation& attestation);
Attestation attestation_from_json(std::string_view text);

std::string base64_encode(ByteView data);
Bytes base64_decode(std::string_view text);

}  // namespace solvkit
