// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace solvkit {

// Outcome of a relation check: accepted, or rejected with a stable reason
// code and a human-readable detail.  Rejection is a value, not an error.
struct RelationVerdict {
    bool accepted = false;
    std::string reason;
    std::string detail;

    static RelationVerdict ok() { return {true, "ok", ""}; }
    static RelationVerdict reject(std::string reason, std::string detail = "") {
        return {false, std::move(reason), std::move(detail)};
    }
};

}  // namespace solvkit
