// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "solvkit/solvency.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "solvkit/hash.hpp"

namespace solvkit {

using nlohmann::ordered_json;

namespace {

constexpr std::string_view kProtocolTag = "PPOS-v1";

Digest32 scheme_digest(SigScheme scheme, ByteView message) {
    return scheme == SigScheme::EthKeccak ? keccak256(message) : sha256d(message);
}

bool all_zero(const Address& a) {
    return std::all_of(a.begin(), a.end(), [](std::uint8_t b) { return b == 0; });
}

// Sum-leaf canonical bytes rebuilt from raw entries; nullopt when an entry
// cannot be encoded (bad amount width or network length).
std::optional<Bytes> sum_leaf_bytes_of(const std::vector<RawBalanceEntry>& entries) {
    Bytes out;
    append_u8(out, 0x53);
    append_be32(out, static_cast<std::uint32_t>(entries.size()));
    for (const RawBalanceEntry& e : entries) {
        if (e.amount_be.size() != 32) return std::nullopt;
        if (e.key.network.empty() || e.key.network.size() > 255) return std::nullopt;
        append_u8(out, static_cast<std::uint8_t>(e.key.network.size()));
        append(out, view(e.key.network));
        append(out, view(e.key.asset));
        append(out, view(e.amount_be));
    }
    return out;
}

struct InnerCheck {
    RelationVerdict verdict;
    Bytes owner;  // address or script the ownership signature must bind
    // Units of reserve the claim counts: the account address for native and
    // token claims, one txid||vout per UTXO for btc claims.  The outer
    // relation rejects any unit counted twice for the same asset.
    std::vector<Bytes> counted;
};

// Runs the claim's inner relation and surfaces the private owner identity
// for the ownership check.  Rejections come back as InnerRelationFailed.
InnerCheck check_inner(const SolvencyStatement& statement, const ReserveClaim& claim) {
    auto inner_reject = [](const std::string& detail) {
        return InnerCheck{RelationVerdict::reject("InnerRelationFailed", detail), {}};
    };
    try {
        if (claim.relation == "eth-reserve-v1") {
            if (claim.asset.network != "eth") {
                return inner_reject("claim network must be eth");
            }
            EthReserveStatement inner = parse_eth_statement(view(claim.inner_statement));
            if (!statement.eth_block_hash || inner.block_hash != *statement.eth_block_hash) {
                return inner_reject("inner block hash is not the public snapshot");
            }
            if (inner.min_amount != claim.amount) {
                return inner_reject("inner minimum differs from the claimed amount");
            }
            if (!all_zero(claim.asset.asset)) {
                return inner_reject("native claim must use the all-zero asset id");
            }
            AccountProofBundle bundle = parse_eth_witness(view(claim.inner_witness));
            RelationVerdict v = check_eth_min_balance_relation(inner, bundle);
            if (!v.accepted) {
                return inner_reject(v.reason + ": " + v.detail);
            }
            Bytes owner(bundle.address.begin(), bundle.address.end());
            return InnerCheck{RelationVerdict::ok(), owner, {owner}};
        }
        if (claim.relation == "erc20-reserve-v1") {
            if (claim.asset.network != "eth") {
                return inner_reject("claim network must be eth");
            }
            Erc20ReserveStatement inner = parse_erc20_statement(view(claim.inner_statement));
            if (!statement.eth_block_hash || inner.block_hash != *statement.eth_block_hash) {
                return inner_reject("inner block hash is not the public snapshot");
            }
            if (inner.min_amount != claim.amount) {
                return inner_reject("inner minimum differs from the claimed amount");
            }
            if (claim.asset.asset != inner.token_contract) {
                return inner_reject("claim asset must be the token contract");
            }
            Erc20Witness w = parse_erc20_witness(view(claim.inner_witness));
            RelationVerdict v = check_erc20_min_balance_relation(inner, w);
            if (!v.accepted) {
                return inner_reject(v.reason + ": " + v.detail);
            }
            Bytes owner(w.holder.begin(), w.holder.end());
            return InnerCheck{RelationVerdict::ok(), owner, {owner}};
        }
        if (claim.relation == "btc-reserve-v1") {
            if (claim.asset.network != "btc") {
                return inner_reject("claim network must be btc");
            }
            BtcReserveStatement inner = parse_btc_statement(view(claim.inner_statement));
            if (!statement.btc_utxo_root || inner.utxo_root != *statement.btc_utxo_root ||
                !statement.btc_snapshot_block ||
                inner.snapshot_block != *statement.btc_snapshot_block) {
                return inner_reject("inner utxo commitment is not the public snapshot");
            }
            if (inner.min_amount != claim.amount) {
                return inner_reject("inner minimum differs from the claimed amount");
            }
            if (!all_zero(claim.asset.asset)) {
                return inner_reject("native claim must use the all-zero asset id");
            }
            BtcReserveWitness w = parse_btc_witness(view(claim.inner_witness));
            RelationVerdict v = check_btc_reserve_relation(inner, w);
            if (!v.accepted) {
                return inner_reject(v.reason + ": " + v.detail);
            }
            std::vector<Bytes> outpoints;
            for (const Utxo& u : w.utxos) {
                Bytes op(u.txid.begin(), u.txid.end());
                append_le32(op, u.vout);
                outpoints.push_back(std::move(op));
            }
            return InnerCheck{RelationVerdict::ok(), w.script_template,
                              std::move(outpoints)};
        }
        return inner_reject("unknown inner relation " + claim.relation);
    } catch (const Error& e) {
        return inner_reject(std::string(e.code()) + ": " + e.detail());
    }
}

SigScheme required_scheme(const std::string& relation) {
    return relation == "btc-reserve-v1" ? SigScheme::BtcSha256d : SigScheme::EthKeccak;
}

ordered_json sig_to_json(const OwnershipSignature& sig) {
    ordered_json j;
    j["scheme"] = to_string(sig.scheme);
    j["rs_hex"] = to_hex(ByteView(sig.sig.rs.data(), sig.sig.rs.size()));
    j["recid"] = sig.sig.recid;
    return j;
}

OwnershipSignature sig_from_json(const ordered_json& j) {
    OwnershipSignature sig;
    sig.scheme = sig_scheme_from_string(j.at("scheme").get<std::string>());
    Bytes rs = from_hex(j.at("rs_hex").get<std::string>());
    if (rs.size() != 64) throw Error("ParseError", "signature must be 64 bytes");
    std::copy(rs.begin(), rs.end(), sig.sig.rs.begin());
    std::uint64_t recid = j.at("recid").get<std::uint64_t>();
    if (recid > 3) throw Error("ParseError", "recovery id out of range");
    sig.sig.recid = static_cast<std::uint8_t>(recid);
    return sig;
}

}  // namespace

std::string to_string(SigScheme scheme) {
    return scheme == SigScheme::EthKeccak ? "eth-keccak" : "btc-sha256d";
}

SigScheme sig_scheme_from_string(std::string_view name) {
    if (name == "eth-keccak") return SigScheme::EthKeccak;
    if (name == "btc-sha256d") return SigScheme::BtcSha256d;
    throw Error("ParseError", "unknown signature scheme: " + std::string(name));
}

Bytes ownership_message(std::uint64_t round_id, const Digest32& liabilities_root,
                        std::string_view chain_tag) {
    if (chain_tag.empty() || chain_tag.size() > 255) {
        throw Error("InvalidAsset", "chain tag length must be 1..255");
    }
    Bytes out;
    append(out, view(kProtocolTag));
    append_be64(out, round_id);
    append(out, view(liabilities_root));
    append_u8(out, static_cast<std::uint8_t>(chain_tag.size()));
    append(out, view(chain_tag));
    return out;
}

OwnershipSignature sign_ownership(const Digest32& secret, SigScheme scheme,
                                  ByteView message) {
    OwnershipSignature out;
    out.scheme = scheme;
    out.sig = ecdsa::sign_recoverable(secret, scheme_digest(scheme, message));
    return out;
}

bool verify_ownership(ByteView claimed, const OwnershipSignature& sig, ByteView message) {
    auto pub = ecdsa::recover_pubkey(sig.sig, scheme_digest(sig.scheme, message));
    if (!pub) return false;
    if (sig.scheme == SigScheme::EthKeccak) {
        Address derived = ecdsa::eth_address_of(*pub);
        return claimed.size() == derived.size() &&
               std::equal(derived.begin(), derived.end(), claimed.begin());
    }
    Bytes script = ecdsa::p2pkh_script_of(ecdsa::compress_pubkey(*pub));
    return claimed.size() == script.size() &&
           std::equal(script.begin(), script.end(), claimed.begin());
}

RelationVerdict check_solvency_relation(const SolvencyStatement& statement,
                                        const SolvencyWitness& witness) {
    auto leaf_bytes = sum_leaf_bytes_of(witness.sum_entries);
    if (!leaf_bytes) {
        return RelationVerdict::reject("BadSumLeafPath",
                                       "sum leaf entries are not encodable");
    }
    if (witness.sum_leaf_path.leaf_index != statement.liabilities_sum_leaf_index) {
        return RelationVerdict::reject("BadSumLeafPath",
                                       "path opens a different leaf index");
    }
    if (!MerkleTree::verify(statement.liabilities_root, view(*leaf_bytes),
                            witness.sum_leaf_path)) {
        return RelationVerdict::reject("BadSumLeafPath",
                                       "sum leaf does not open the liabilities root");
    }

    std::map<AssetKey, Amount> claimed;
    std::set<std::pair<AssetKey, Bytes>> counted_units;
    for (std::size_t i = 0; i < witness.claims.size(); ++i) {
        const ReserveClaim& claim = witness.claims[i];
        InnerCheck inner = check_inner(statement, claim);
        if (!inner.verdict.accepted) {
            inner.verdict.detail =
                "claim " + std::to_string(i) + ": " + inner.verdict.detail;
            return inner.verdict;
        }
        for (const Bytes& unit : inner.counted) {
            if (!counted_units.emplace(claim.asset, unit).second) {
                return RelationVerdict::reject(
                    "BadOwnership", "claim " + std::to_string(i) +
                                        ": reserve already counted for this asset");
            }
        }

        if (claim.ownership.scheme != required_scheme(claim.relation)) {
            return RelationVerdict::reject(
                "BadOwnership",
                "claim " + std::to_string(i) + ": wrong signature scheme");
        }
        if (claim.asset.network.empty() || claim.asset.network.size() > 255) {
            return RelationVerdict::reject(
                "BadOwnership", "claim " + std::to_string(i) + ": invalid chain tag");
        }
        Bytes message = ownership_message(statement.round_id, statement.liabilities_root,
                                          claim.asset.network);
        if (!verify_ownership(view(inner.owner), claim.ownership, view(message))) {
            return RelationVerdict::reject(
                "BadOwnership",
                "claim " + std::to_string(i) + ": signature does not bind the owner");
        }

        auto [it, inserted] = claimed.emplace(claim.asset, claim.amount);
        if (!inserted) {
            auto sum = Amount::checked_add(it->second, claim.amount);
            if (!sum) {
                return RelationVerdict::reject("AssetShortfall",
                                               "claimed reserve sum overflows");
            }
            it->second = *sum;
        }
    }

    std::map<AssetKey, Amount> owed;
    for (const RawBalanceEntry& e : witness.sum_entries) {
        Amount total = Amount::from_be(view(e.amount_be));
        auto [it, inserted] = owed.emplace(e.key, total);
        if (!inserted) {
            auto sum = Amount::checked_add(it->second, total);
            if (!sum) {
                return RelationVerdict::reject("BadSumLeafPath", "liability sum overflows");
            }
            it->second = *sum;
        }
    }
    for (const auto& [asset, total] : owed) {
        Amount have;  // zero when the asset was never claimed
        auto it = claimed.find(asset);
        if (it != claimed.end()) have = it->second;
        if (have < total) {
            return RelationVerdict::reject(
                "AssetShortfall", asset.network + " reserves " + have.to_decimal() +
                                      " below liabilities " + total.to_decimal());
        }
    }
    return RelationVerdict::ok();
}

Bytes solvency_statement_bytes(const SolvencyStatement& statement) {
    ordered_json j;
    j["relation"] = "solvency-v1";
    j["round_id"] = statement.round_id;
    j["liabilities_root_hex"] = to_hex(view(statement.liabilities_root));
    j["liabilities_sum_leaf_index"] = statement.liabilities_sum_leaf_index;
    if (statement.eth_block_hash) {
        j["eth_block_hash_hex"] = to_hex(view(*statement.eth_block_hash));
    }
    if (statement.btc_utxo_root) {
        j["btc_utxo_root_hex"] = to_hex(view(*statement.btc_utxo_root));
    }
    if (statement.btc_snapshot_block) {
        j["btc_snapshot_block_hex"] = to_hex(view(*statement.btc_snapshot_block));
    }
    std::string text = j.dump();
    return Bytes(text.begin(), text.end());
}

SolvencyStatement parse_solvency_statement(ByteView data) {
    auto j = ordered_json::parse(data.begin(), data.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error("ParseError", "bad solvency statement");
    }
    if (j.value("relation", "") != "solvency-v1") {
        throw Error("ParseError", "bad solvency statement relation");
    }
    try {
        SolvencyStatement s;
        s.round_id = j.at("round_id").get<std::uint64_t>();
        s.liabilities_root = digest_from_hex(j.at("liabilities_root_hex").get<std::string>());
        s.liabilities_sum_leaf_index =
            j.at("liabilities_sum_leaf_index").get<std::uint64_t>();
        if (j.contains("eth_block_hash_hex")) {
            s.eth_block_hash = digest_from_hex(j.at("eth_block_hash_hex").get<std::string>());
        }
        if (j.contains("btc_utxo_root_hex")) {
            s.btc_utxo_root = digest_from_hex(j.at("btc_utxo_root_hex").get<std::string>());
        }
        if (j.contains("btc_snapshot_block_hex")) {
            s.btc_snapshot_block =
                digest_from_hex(j.at("btc_snapshot_block_hex").get<std::string>());
        }
        return s;
    } catch (const std::exception& e) {
        throw Error("ParseError", e.what());
    }
}

Bytes solvency_witness_bytes(const SolvencyWitness& witness) {
    ordered_json j;
    auto& entries = j["sum_entries"] = ordered_json::array();
    for (const RawBalanceEntry& e : witness.sum_entries) {
        ordered_json entry;
        entry["network"] = e.key.network;
        entry["asset_hex"] = to_hex(view(e.key.asset));
        entry["amount_hex"] = to_hex(view(e.amount_be));
        entries.push_back(std::move(entry));
    }
    j["sum_leaf_path"] = ordered_json::parse(merkle_path_to_json(witness.sum_leaf_path));
    auto& claims = j["claims"] = ordered_json::array();
    for (const ReserveClaim& c : witness.claims) {
        ordered_json claim;
        claim["network"] = c.asset.network;
        claim["asset_hex"] = to_hex(view(c.asset.asset));
        claim["amount"] = c.amount.to_decimal();
        claim["relation"] = c.relation;
        claim["inner_statement_hex"] = to_hex(view(c.inner_statement));
        claim["inner_witness_hex"] = to_hex(view(c.inner_witness));
        claim["ownership"] = sig_to_json(c.ownership);
        claims.push_back(std::move(claim));
    }
    std::string text = j.dump();
    return Bytes(text.begin(), text.end());
}

SolvencyWitness parse_solvency_witness(ByteView data) {
    auto j = ordered_json::parse(data.begin(), data.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("sum_entries") ||
        !j.at("sum_entries").is_array() || !j.contains("sum_leaf_path") ||
        !j.contains("claims") || !j.at("claims").is_array()) {
        throw Error("ParseError", "bad solvency witness document");
    }
    try {
        SolvencyWitness w;
        for (const auto& entry : j.at("sum_entries")) {
            RawBalanceEntry e;
            e.key.network = entry.at("network").get<std::string>();
            e.key.asset = address_from_hex(entry.at("asset_hex").get<std::string>());
            e.amount_be = from_hex(entry.at("amount_hex").get<std::string>());
            w.sum_entries.push_back(std::move(e));
        }
        w.sum_leaf_path = merkle_path_from_json(j.at("sum_leaf_path").dump());
        for (const auto& claim : j.at("claims")) {
            ReserveClaim c;
            c.asset.network = claim.at("network").get<std::string>();
            c.asset.asset = address_from_hex(claim.at("asset_hex").get<std::string>());
            c.amount = Amount::from_decimal(claim.at("amount").get<std::string>());
            c.relation = claim.at("relation").get<std::string>();
            c.inner_statement = from_hex(claim.at("inner_statement_hex").get<std::string>());
            c.inner_witness = from_hex(claim.at("inner_witness_hex").get<std::string>());
            c.ownership = sig_from_json(claim.at("ownership"));
            w.claims.push_back(std::move(c));
        }
        return w;
    } catch (const Error& e) {
        throw Error("ParseError", e.detail().empty() ? e.code() : e.detail());
    } catch (const std::exception& e) {
        throw Error("ParseError", e.what());
    }
}

}  // namespace solvkit
