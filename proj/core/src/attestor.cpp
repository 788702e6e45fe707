// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "solvkit/attestor.hpp"

#include <openssl/evp.h>

#include <json.hpp>

#include <array>
#include <string>

#include "solvkit/btcstate.hpp"
#include "solvkit/ethstate.hpp"
#include "solvkit/hash.hpp"
#include "solvkit/liabilities.hpp"
#include "solvkit/solvency.hpp"

namespace solvkit {

namespace {

constexpr const char* kBackend = "transparent-v1";

constexpr std::array<std::string_view, 5> kRelations = {
    "liability-v1", "eth-reserve-v1", "erc20-reserve-v1", "btc-reserve-v1",
    "solvency-v1",
};

bool valid_base64_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '+' || c == '/';
}

}  // namespace

bool is_known_relation(std::string_view name) {
    for (std::string_view known : kRelations) {
        if (name == known) return true;
    }
    return false;
}

RelationVerdict run_relation(std::string_view relation, ByteView statement_bytes,
                             ByteView witness_bytes) {
    if (relation == "liability-v1") {
        return check_liability_relation(parse_liability_statement(statement_bytes),
                                        parse_liability_witness(witness_bytes));
    }
    if (relation == "eth-reserve-v1") {
        return check_eth_min_balance_relation(parse_eth_statement(statement_bytes),
                                              parse_eth_witness(witness_bytes));
    }
    if (relation == "erc20-reserve-v1") {
        return check_erc20_min_balance_relation(parse_erc20_statement(statement_bytes),
                                                parse_erc20_witness(witness_bytes));
    }
    if (relation == "btc-reserve-v1") {
        return check_btc_reserve_relation(parse_btc_statement(statement_bytes),
                                          parse_btc_witness(witness_bytes));
    }
    if (relation == "solvency-v1") {
        return check_solvency_relation(parse_solvency_statement(statement_bytes),
                                       parse_solvency_witness(witness_bytes));
    }
    throw Error("UnknownRelation", std::string(relation));
}

Attestation attest(std::string_view relation, ByteView statement_bytes,
                   ByteView witness_bytes) {
    const RelationVerdict verdict = run_relation(relation, statement_bytes, witness_bytes);
    if (!verdict.accepted) {
        throw Error("RelationRejected", verdict.reason + ": " + verdict.detail);
    }
    Attestation out;
    out.relation = std::string(relation);
    out.statement_digest = keccak256(statement_bytes);
    out.backend = kBackend;
    out.payload = to_bytes(witness_bytes);
    return out;
}

RelationVerdict verify_attestation(ByteView statement_bytes, const Attestation& attestation) {
    if (attestation.backend != kBackend) {
        return RelationVerdict::reject("UnknownBackend", attestation.backend);
    }
    if (!is_known_relation(attestation.relation)) {
        return RelationVerdict::reject("UnknownRelation", attestation.relation);
    }
    if (keccak256(statement_bytes) != attestation.statement_digest) {
        return RelationVerdict::reject("StatementMismatch",
                                       "attestation binds different statement bytes");
    }
    try {
        return run_relation(attestation.relation, statement_bytes,
                            view(attestation.payload));
    } catch (const Error& e) {
        return RelationVerdict::reject(e.code(), e.detail());
    }
}

std::string attestation_to_json(const Attestation& attestation) {
    nlohmann::ordered_json j;
    j["relation"] = attestation.relation;
    j["backend"] = attestation.backend;
    j["statement_digest_hex"] = to_hex(view(attestation.statement_digest));
    j["payload_base64"] = base64_encode(view(attestation.payload));
    return j.dump();
}

Attestation attestation_from_json(std::string_view text) {
    auto j = nlohmann::ordered_json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error("ParseError", "bad attestation document");
    }
    try {
        Attestation out;
        out.relation = j.at("relation").get<std::string>();
        out.backend = j.at("backend").get<std::string>();
        out.statement_digest =
            digest_from_hex(j.at("statement_digest_hex").get<std::string>());
        out.payload = base64_decode(j.at("payload_base64").get<std::string>());
        return out;
    } catch (const Error& e) {
        throw Error("ParseError", e.detail().empty() ? e.code() : e.detail());
    } catch (const std::exception& e) {
        throw Error("ParseError", e.what());
    }
}

std::string base64_encode(ByteView data) {
    if (data.empty()) return "";
    std::string out((data.size() + 2) / 3 * 4, '\0');
    const int written =
        EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(),
                        static_cast<int>(data.size()));
    out.resize(static_cast<std::size_t>(written));
    return out;
}

Bytes base64_decode(std::string_view text) {
    if (text.empty()) return {};
    if (text.size() % 4 != 0) {
        throw Error("ParseError", "base64 length must be a multiple of 4");
    }
    std::size_t pad = 0;
    if (text.back() == '=') {
        ++pad;
        if (text[text.size() - 2] == '=') ++pad;
    }
    for (std::size_t i = 0; i < text.size() - pad; ++i) {
        if (!valid_base64_char(text[i])) {
            throw Error("ParseError", "invalid base64 character");
        }
    }
    Bytes buf(text.size() / 4 * 3);
    const int written =
        EVP_DecodeBlock(buf.data(), reinterpret_cast<const unsigned char*>(text.data()),
                        static_cast<int>(text.size()));
    if (written < 0) throw Error("ParseError", "invalid base64");
    buf.resize(static_cast<std::size_t>(written) - pad);
    return buf;
}

}  // namespace solvkit
