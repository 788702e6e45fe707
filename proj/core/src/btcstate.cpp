// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "solvkit/btcstate.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace solvkit {

using nlohmann::ordered_json;

namespace {

std::pair<const Digest32&, std::uint32_t> outpoint_of(const Utxo& u) {
    return {u.txid, u.vout};
}

bool outpoint_less(const Utxo& a, const Utxo& b) { return outpoint_of(a) < outpoint_of(b); }

Utxo utxo_from_json(const ordered_json& j) {
    if (!j.is_object()) throw Error("MalformedRecord", "record is not an object");
    try {
        Utxo u;
        u.txid = digest_from_hex(j.at("txid_hex").get<std::string>());
        if (!j.at("vout").is_number_unsigned()) {
            throw Error("MalformedRecord", "vout must be a non-negative integer");
        }
        std::uint64_t vout = j.at("vout").get<std::uint64_t>();
        if (vout > 0xffffffffull) throw Error("MalformedRecord", "vout exceeds 32 bits");
        u.vout = static_cast<std::uint32_t>(vout);
        if (!j.at("amount_sats").is_number_unsigned()) {
            throw Error("MalformedRecord", "amount_sats must be a non-negative integer");
        }
        u.amount_sats = j.at("amount_sats").get<std::uint64_t>();
        u.script_pubkey = from_hex(j.at("script_hex").get<std::string>());
        if (u.script_pubkey.size() > 0xffff) {
            throw Error("MalformedRecord", "script longer than 65535 bytes");
        }
        return u;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error("MalformedRecord", e.what());
    }
}

ordered_json utxo_to_json(const Utxo& u) {
    ordered_json j;
    j["txid_hex"] = to_hex(view(u.txid));
    j["vout"] = u.vout;
    j["amount_sats"] = u.amount_sats;
    j["script_hex"] = to_hex(view(u.script_pubkey));
    return j;
}

UtxoSnapshot canonicalize(const Digest32& block_hash, std::vector<Utxo> utxos) {
    std::sort(utxos.begin(), utxos.end(), outpoint_less);
    for (std::size_t i = 1; i < utxos.size(); ++i) {
        if (outpoint_of(utxos[i - 1]) == outpoint_of(utxos[i])) {
            throw Error("DuplicateOutpoint",
                        to_hex(view(utxos[i].txid)) + ":" + std::to_string(utxos[i].vout));
        }
    }
    return UtxoSnapshot{block_hash, std::move(utxos)};
}

}  // namespace

Bytes Utxo::leaf_bytes() const {
    Bytes out;
    out.reserve(32 + 4 + 8 + 2 + script_pubkey.size());
    append(out, view(txid));
    append_le32(out, vout);
    append_le64(out, amount_sats);
    append_le16(out, static_cast<std::uint16_t>(script_pubkey.size()));
    append(out, view(script_pubkey));
    return out;
}

UtxoSnapshot ingest_chainstate(std::istream& dump) {
    std::string line;
    bool have_preamble = false;
    Digest32 block_hash{};
    std::vector<Utxo> utxos;
    while (std::getline(dump, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw Error("MalformedRecord", "line is not a json object");
        }
        if (!have_preamble) {
            if (!j.contains("block_hash_hex")) {
                throw Error("MalformedRecord", "first record must carry block_hash_hex");
            }
            try {
                block_hash = digest_from_hex(j.at("block_hash_hex").get<std::string>());
            } catch (const std::exception& e) {
                throw Error("MalformedRecord", e.what());
            }
            have_preamble = true;
            continue;
        }
        utxos.push_back(utxo_from_json(j));
    }
    if (!have_preamble) throw Error("MalformedRecord", "missing block hash preamble");
    return canonicalize(block_hash, std::move(utxos));
}

UtxoSnapshot make_snapshot(const Digest32& block_hash, std::vector<Utxo> utxos) {
    return canonicalize(block_hash, std::move(utxos));
}

UtxoTree build_utxo_tree(const UtxoSnapshot& snapshot) {
    if (snapshot.utxos.empty()) throw Error("EmptyInput", "snapshot holds no utxos");
    std::vector<Bytes> leaves;
    leaves.reserve(snapshot.utxos.size());
    for (const Utxo& u : snapshot.utxos) leaves.push_back(u.leaf_bytes());
    return UtxoTree{MerkleTree::build(leaves), snapshot.block_hash, snapshot.utxos.size()};
}

std::string snapshot_to_json(const UtxoSnapshot& snapshot) {
    ordered_json j;
    j["block_hash_hex"] = to_hex(view(snapshot.block_hash));
    auto& arr = j["utxos"] = ordered_json::array();
    for (const Utxo& u : snapshot.utxos) arr.push_back(utxo_to_json(u));
    return j.dump();
}

UtxoSnapshot snapshot_from_json(std::string_view text) {
    auto j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("block_hash_hex") ||
        !j.contains("utxos") || !j.at("utxos").is_array()) {
        throw Error("MalformedRecord", "bad snapshot document");
    }
    Digest32 block_hash;
    try {
        block_hash = digest_from_hex(j.at("block_hash_hex").get<std::string>());
    } catch (const std::exception& e) {
        throw Error("MalformedRecord", e.what());
    }
    std::vector<Utxo> utxos;
    utxos.reserve(j.at("utxos").size());
    for (const auto& rec : j.at("utxos")) utxos.push_back(utxo_from_json(rec));
    return canonicalize(block_hash, std::move(utxos));
}

RelationVerdict check_btc_reserve_relation(const BtcReserveStatement& statement,
                                           const BtcReserveWitness& witness) {
    if (witness.utxos.empty() || witness.paths.empty()) {
        return RelationVerdict::reject("EmptyWitness", "no utxos in witness");
    }
    if (witness.utxos.size() != witness.paths.size()) {
        return RelationVerdict::reject("BadPath", "utxo and path counts differ");
    }
    for (std::size_t i = 0; i < witness.utxos.size(); ++i) {
        if (!MerkleTree::verify(statement.utxo_root, view(witness.utxos[i].leaf_bytes()),
                                witness.paths[i])) {
            return RelationVerdict::reject("BadPath",
                                           "leaf " + std::to_string(i) +
                                               " fails against the utxo root");
        }
    }
    for (std::size_t i = 0; i < witness.utxos.size(); ++i) {
        if (witness.utxos[i].script_pubkey != witness.script_template) {
            return RelationVerdict::reject("MixedScripts",
                                           "utxo " + std::to_string(i) +
                                               " is locked by a different script");
        }
    }
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < witness.paths.size(); ++i) {
        if (!seen.insert(witness.paths[i].leaf_index).second) {
            return RelationVerdict::reject("DuplicateLeaf",
                                           "leaf index " +
                                               std::to_string(witness.paths[i].leaf_index) +
                                               " counted twice");
        }
    }
    Amount sum;
    for (const Utxo& u : witness.utxos) {
        auto next = Amount::checked_add(sum, Amount::from_u64(u.amount_sats));
        if (!next) {
            return RelationVerdict::reject("InsufficientBalance", "sum overflow");
        }
        sum = *next;
    }
    if (sum < statement.min_amount) {
        return RelationVerdict::reject("InsufficientBalance",
                                       "sum " + sum.to_decimal() + " below minimum " +
                                           statement.min_amount.to_decimal());
    }
    return RelationVerdict::ok();
}

Bytes btc_statement_bytes(const BtcReserveStatement& statement) {
    ordered_json j;
    j["relation"] = "btc-reserve-v1";
    j["min_amount"] = statement.min_amount.to_decimal();
    j["utxo_root_hex"] = to_hex(view(statement.utxo_root));
    j["snapshot_block_hex"] = to_hex(view(statement.snapshot_block));
    std::string text = j.dump();
    return Bytes(text.begin(), text.end());
}

BtcReserveStatement parse_btc_statement(ByteView data) {
    auto j = ordered_json::parse(data.begin(), data.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error("ParseError", "bad btc reserve statement");
    }
    if (j.value("relation", "") != "btc-reserve-v1") {
        throw Error("ParseError", "bad btc reserve statement relation");
    }
    try {
        BtcReserveStatement s;
        s.min_amount = Amount::from_decimal(j.at("min_amount").get<std::string>());
        s.utxo_root = digest_from_hex(j.at("utxo_root_hex").get<std::string>());
        s.snapshot_block = digest_from_hex(j.at("snapshot_block_hex").get<std::string>());
        return s;
    } catch (const std::exception& e) {
        throw Error("ParseError", e.what());
    }
}

Bytes btc_witness_bytes(const BtcReserveWitness& witness) {
    ordered_json j;
    auto& utxos = j["utxos"] = ordered_json::array();
    for (const Utxo& u : witness.utxos) utxos.push_back(utxo_to_json(u));
    auto& paths = j["paths"] = ordered_json::array();
    for (const MerklePath& p : witness.paths) {
        paths.push_back(ordered_json::parse(merkle_path_to_json(p)));
    }
    j["script_template_hex"] = to_hex(view(witness.script_template));
    std::string text = j.dump();
    return Bytes(text.begin(), text.end());
}

BtcReserveWitness parse_btc_witness(ByteView data) {
    auto j = ordered_json::parse(data.begin(), data.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("utxos") ||
        !j.at("utxos").is_array() || !j.contains("paths") || !j.at("paths").is_array()) {
        throw Error("ParseError", "bad btc witness document");
    }
    try {
        BtcReserveWitness w;
        for (const auto& rec : j.at("utxos")) w.utxos.push_back(utxo_from_json(rec));
        for (const auto& p : j.at("paths")) {
            w.paths.push_back(merkle_path_from_json(p.dump()));
        }
        w.script_template = from_hex(j.at("script_template_hex").get<std::string>());
        return w;
    } catch (const Error& e) {
        throw Error("ParseError", e.detail().empty() ? e.code() : e.detail());
    } catch (const std::exception& e) {
        throw Error("ParseError", e.what());
    }
}

}  // namespace solvkit
