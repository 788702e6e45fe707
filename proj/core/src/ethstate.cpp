// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <json.hpp>

#include <solvkit/ethstate.hpp>
#include <solvkit/hash.hpp>
#include <solvkit/rlp.hpp>

namespace solvkit {

namespace {

using nlohmann::ordered_json;

Bytes json_bytes(const ordered_json& j) {
    const std::string s = j.dump();
    return Bytes(s.begin(), s.end());
}

ordered_json parse_json(ByteView data, const char* what) {
    auto j = ordered_json::parse(data.begin(), data.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("ParseError", what);
    return j;
}

ordered_json bundle_to_json(const AccountProofBundle& bundle) {
    ordered_json j;
    j["header_rlp_hex"] = to_hex(view(bundle.header_rlp));
    j["address_hex"] = to_hex(view(bundle.address));
    ordered_json account;
    account["nonce"] = bundle.account.nonce;
    account["balance"] = bundle.account.balance.to_decimal();
    account["storage_root"] = to_hex(view(bundle.account.storage_root));
    account["code_hash"] = to_hex(view(bundle.account.code_hash));
    j["account"] = std::move(account);
    auto& proof = j["account_proof"] = ordered_json::array();
    for (const Bytes& node : bundle.proof_nodes) proof.push_back(to_hex(view(node)));
    auto& storage = j["storage_proofs"] = ordered_json::array();
    for (const StorageProof& sp : bundle.storage_proofs) {
        ordered_json s;
        s["key_hex"] = to_hex(view(sp.slot_key));
        s["value_hex"] = to_hex(view(sp.value));
        auto& nodes = s["proof"] = ordered_json::array();
        for (const Bytes& node : sp.proof_nodes) nodes.push_back(to_hex(view(node)));
        storage.push_back(std::move(s));
    }
    return j;
}

AccountProofBundle bundle_from_json(const ordered_json& j) {
    AccountProofBundle bundle;
    bundle.header_rlp = from_hex(j.at("header_rlp_hex").get<std::string>());
    bundle.address = address_from_hex(j.at("address_hex").get<std::string>());
    const auto& account = j.at("account");
    bundle.account.nonce = account.at("nonce").get<std::uint64_t>();
    bundle.account.balance = Amount::from_decimal(account.at("balance").get<std::string>());
    bundle.account.storage_root = digest_from_hex(account.at("storage_root").get<std::string>());
    bundle.account.code_hash = digest_from_hex(account.at("code_hash").get<std::string>());
    for (const auto& node : j.at("account_proof")) {
        bundle.proof_nodes.push_back(from_hex(node.get<std::string>()));
    }
    for (const auto& s : j.at("storage_proofs")) {
        StorageProof sp;
        sp.slot_key = digest_from_hex(s.at("key_hex").get<std::string>());
        sp.value = from_hex(s.at("value_hex").get<std::string>());
        for (const auto& node : s.at("proof")) {
            sp.proof_nodes.push_back(from_hex(node.get<std::string>()));
        }
        bundle.storage_proofs.push_back(std::move(sp));
    }
    return bundle;
}

// Shared first half of both relations: header binds to the statement's
// block hash, the account proof walks to exactly the witness account bytes.
RelationVerdict check_account_against_header(const Digest32& statement_block_hash,
                                             const AccountProofBundle& witness) {
    HeaderInfo header;
    try {
        header = header_hash(view(witness.header_rlp));
    } catch (const Error& e) {
        return RelationVerdict::reject("BadHeader", e.detail());
    }
    if (header.block_hash != statement_block_hash) {
        return RelationVerdict::reject("BadHeader",
                                       "header does not hash to the statement block hash");
    }

    std::optional<Bytes> proven;
    try {
        proven = verify_mpt_proof(header.state_root, view(witness.address),
                                  witness.proof_nodes);
    } catch (const Error& e) {
        return RelationVerdict::reject("BadProof", e.detail());
    }
    if (!proven.has_value()) {
        return RelationVerdict::reject("AccountMismatch", "account proven absent");
    }
    if (*proven != witness.account.rlp()) {
        return RelationVerdict::reject("AccountMismatch",
                                       "proven value differs from the witness account");
    }
    return RelationVerdict::ok();
}

}  // namespace

Bytes AccountState::rlp() const {
    std::vector<rlp::Item> items;
    items.push_back(rlp::Item::scalar(nonce));
    items.push_back(rlp::Item::string(view(balance.minimal_be())));
    items.push_back(rlp::Item::string(view(storage_root)));
    items.push_back(rlp::Item::string(view(code_hash)));
    return rlp::encode(rlp::Item::items(std::move(items)));
}

AccountState decode_account(ByteView data) {
    rlp::Item item;
    try {
        item = rlp::decode(data);
    } catch (const Error& e) {
        throw Error("MalformedAccount", e.detail());
    }
    if (!item.is_list || item.list.size() != 4) {
        throw Error("MalformedAccount", "account is not a 4-item list");
    }
    for (const rlp::Item& field : item.list) {
        if (field.is_list) throw Error("MalformedAccount", "account field is a list");
    }
    AccountState account;
    try {
        account.nonce = rlp::to_u64(item.list[0]);
        account.balance = Amount::from_minimal_be(view(item.list[1].str));
    } catch (const Error& e) {
        throw Error("MalformedAccount", e.detail());
    }
    if (item.list[2].str.size() != 32 || item.list[3].str.size() != 32) {
        throw Error("MalformedAccount", "digest field is not 32 bytes");
    }
    account.storage_root = digest_from(view(item.list[2].str));
    account.code_hash = digest_from(view(item.list[3].str));
    return account;
}

HeaderInfo header_hash(ByteView header_rlp) {
    rlp::Item item;
    try {
        item = rlp::decode(header_rlp);
    } catch (const Error& e) {
        throw Error("MalformedHeader", e.detail());
    }
    if (!item.is_list) throw Error("MalformedHeader", "header is not a list");
    if (item.list.size() < 15) throw Error("MalformedHeader", "header has fewer than 15 items");
    const rlp::Item& root = item.list[3];
    if (root.is_list || root.str.size() != 32) {
        throw Error("MalformedHeader", "state root is not a 32-byte string");
    }
    HeaderInfo out;
    out.block_hash = keccak256(header_rlp);
    out.state_root = digest_from(view(root.str));
    return out;
}

Digest32 storage_slot_key(const Address& holder, const Amount& mapping_slot) {
    Bytes preimage;
    preimage.resize(12, 0);
    append(preimage, view(holder));
    append(preimage, view(mapping_slot.be32()));
    return keccak256(view(preimage));
}

RelationVerdict check_eth_min_balance_relation(const EthReserveStatement& statement,
                                               const AccountProofBundle& witness) {
    const RelationVerdict account_ok = check_account_against_header(statement.block_hash, witness);
    if (!account_ok.accepted) return account_ok;
    if (witness.account.balance < statement.min_amount) {
        return RelationVerdict::reject("InsufficientBalance",
                                       "account balance below the public minimum");
    }
    return RelationVerdict::ok();
}

RelationVerdict check_erc20_min_balance_relation(const Erc20ReserveStatement& statement,
                                                 const Erc20Witness& witness) {
    if (witness.bundle.address != statement.token_contract) {
        return RelationVerdict::reject("AccountMismatch",
                                       "witness account is not the token contract");
    }
    const RelationVerdict account_ok =
        check_account_against_header(statement.block_hash, witness.bundle);
    if (!account_ok.accepted) return account_ok;

    if (witness.bundle.storage_proofs.size() != 1) {
        return RelationVerdict::reject("BadStorageProof",
                                       "exactly one storage proof required");
    }
    const StorageProof& sp = witness.bundle.storage_proofs[0];
    const Digest32 slot_key = storage_slot_key(witness.holder, statement.mapping_slot);
    if (sp.slot_key != slot_key) {
        return RelationVerdict::reject("BadStorageProof",
                                       "storage proof is not for the holder's slot");
    }

    std::optional<Bytes> proven;
    try {
        proven = verify_mpt_proof(witness.bundle.account.storage_root, view(slot_key),
                                  sp.proof_nodes);
    } catch (const Error& e) {
        return RelationVerdict::reject("BadStorageProof", e.detail());
    }

    Amount balance;  // zero when the slot is absent
    if (proven.has_value()) {
        if (sp.value != *proven) {
            return RelationVerdict::reject("BadStorageProof",
                                           "value field differs from the proven value");
        }
        try {
            const rlp::Item value = rlp::decode(view(*proven));
            if (value.is_list) throw Error("MalformedRlp", "storage value is a list");
            balance = Amount::from_minimal_be(view(value.str));
        } catch (const Error& e) {
            return RelationVerdict::reject("BadStorageProof", e.detail());
        }
    } else if (!sp.value.empty()) {
        return RelationVerdict::reject("BadStorageProof",
                                       "value field must be empty for an absent slot");
    }
    if (balance < statement.min_amount) {
        return RelationVerdict::reject("InsufficientBalance",
                                       "token balance below the public minimum");
    }
    return RelationVerdict::ok();
}

Bytes eth_statement_bytes(const EthReserveStatement& statement) {
    ordered_json j;
    j["relation"] = "eth-reserve-v1";
    j["min_amount"] = statement.min_amount.to_decimal();
    j["block_hash_hex"] = to_hex(view(statement.block_hash));
    return json_bytes(j);
}

EthReserveStatement parse_eth_statement(ByteView data) {
    const auto j = parse_json(data, "bad eth reserve statement");
    if (j.value("relation", "") != std::string("eth-reserve-v1")) {
        throw Error("ParseError", "bad eth reserve statement relation");
    }
    try {
        EthReserveStatement s;
        s.min_amount = Amount::from_decimal(j.at("min_amount").get<std::string>());
        s.block_hash = digest_from_hex(j.at("block_hash_hex").get<std::string>());
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
}

Bytes erc20_statement_bytes(const Erc20ReserveStatement& statement) {
    ordered_json j;
    j["relation"] = "erc20-reserve-v1";
    j["min_amount"] = statement.min_amount.to_decimal();
    j["block_hash_hex"] = to_hex(view(statement.block_hash));
    j["token_contract_hex"] = to_hex(view(statement.token_contract));
    j["mapping_slot"] = statement.mapping_slot.to_decimal();
    return json_bytes(j);
}

Erc20ReserveStatement parse_erc20_statement(ByteView data) {
    const auto j = parse_json(data, "bad erc20 reserve statement");
    if (j.value("relation", "") != std::string("erc20-reserve-v1")) {
        throw Error("ParseError", "bad erc20 reserve statement relation");
    }
    try {
        Erc20ReserveStatement s;
        s.min_amount = Amount::from_decimal(j.at("min_amount").get<std::string>());
        s.block_hash = digest_from_hex(j.at("block_hash_hex").get<std::string>());
        s.token_contract = address_from_hex(j.at("token_contract_hex").get<std::string>());
        s.mapping_slot = Amount::from_decimal(j.at("mapping_slot").get<std::string>());
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
}

Bytes eth_witness_bytes(const AccountProofBundle& bundle) {
    return json_bytes(bundle_to_json(bundle));
}

AccountProofBundle parse_eth_witness(ByteView data) {
    const auto j = parse_json(data, "bad eth witness");
    try {
        return bundle_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    } catch (const Error& e) {
        throw Error("ParseError", e.detail().empty() ? e.code() : e.detail());
    }
}

Bytes erc20_witness_bytes(const Erc20Witness& witness) {
    ordered_json j = bundle_to_json(witness.bundle);
    j["holder_hex"] = to_hex(view(witness.holder));
    return json_bytes(j);
}

Erc20Witness parse_erc20_witness(ByteView data) {
    const auto j = parse_json(data, "bad erc20 witness");
    try {
        Erc20Witness w;
        w.bundle = bundle_from_json(j);
        w.holder = address_from_hex(j.at("holder_hex").get<std::string>());
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    } catch (const Error& e) {
        throw Error("ParseError", e.detail().empty() ? e.code() : e.detail());
    }
}

}  // namespace solvkit
