// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <solvkit/rpcclient.hpp>

#include <array>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include <solvkit/hash.hpp>
#include <solvkit/rlp.hpp>

namespace solvkit {

namespace {

using nlohmann::ordered_json;

enum class FieldKind { Fixed32, Fixed20, Fixed256, Fixed8, Quantity, VarBytes };

struct HeaderField {
    const char* name;
    FieldKind kind;
};

// Execution-layer header schema: fifteen base fields, then the trailing
// fields later forks appended, in activation order.  The keccak check
// against the reported hash arbitrates any schema drift.
constexpr std::size_t kBaseFieldCount = 15;
constexpr std::array<HeaderField, 21> kHeaderSchema{{
    {"parentHash", FieldKind::Fixed32},
    {"sha3Uncles", FieldKind::Fixed32},
    {"miner", FieldKind::Fixed20},
    {"stateRoot", FieldKind::Fixed32},
    {"transactionsRoot", FieldKind::Fixed32},
    {"receiptsRoot", FieldKind::Fixed32},
    {"logsBloom", FieldKind::Fixed256},
    {"difficulty", FieldKind::Quantity},
    {"number", FieldKind::Quantity},
    {"gasLimit", FieldKind::Quantity},
    {"gasUsed", FieldKind::Quantity},
    {"timestamp", FieldKind::Quantity},
    {"extraData", FieldKind::VarBytes},
    {"mixHash", FieldKind::Fixed32},
    {"nonce", FieldKind::Fixed8},
    {"baseFeePerGas", FieldKind::Quantity},
    {"withdrawalsRoot", FieldKind::Fixed32},
    {"blobGasUsed", FieldKind::Quantity},
    {"excessBlobGas", FieldKind::Quantity},
    {"parentBeaconBlockRoot", FieldKind::Fixed32},
    {"requestsHash", FieldKind::Fixed32},
}};

// Minimal big-endian bytes of a 0x-prefixed quantity; leading zero nibbles
// are tolerated since the header hash check is the arbiter.
Bytes quantity_bytes(const std::string& text) {
    if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
        throw Error("RpcError", "quantity must be 0x-prefixed hex: " + text);
    std::string digits = text.substr(2);
    const auto nonzero = digits.find_first_not_of('0');
    if (nonzero == std::string::npos) return {};
    digits = digits.substr(nonzero);
    if (digits.size() % 2 != 0) digits.insert(digits.begin(), '0');
    return from_hex(digits);
}

std::uint64_t quantity_u64(const std::string& text) {
    const Bytes b = quantity_bytes(text);
    if (b.size() > 8) throw Error("RpcError", "quantity exceeds 64 bits: " + text);
    std::uint64_t value = 0;
    for (std::uint8_t byte : b) value = (value << 8) | byte;
    return value;
}

Bytes fixed_bytes(const std::string& text, std::size_t expected, const char* name) {
    const Bytes b = from_hex(text);
    if (b.size() != expected)
        throw Error("RpcError", std::string("header field ") + name + " must be " +
                                    std::to_string(expected) + " bytes");
    return b;
}

std::string normalize_block_number(const std::string& block_id) {
    if (block_id == "latest" || block_id == "earliest" || block_id == "pending" ||
        block_id == "safe" || block_id == "finalized")
        return block_id;
    if (block_id.rfind("0x", 0) == 0 || block_id.rfind("0X", 0) == 0) return block_id;
    if (!block_id.empty() && block_id.find_first_not_of("0123456789") == std::string::npos) {
        std::uint64_t value = std::strtoull(block_id.c_str(), nullptr, 10);
        std::ostringstream out;
        out << "0x" << std::hex << value;
        return out.str();
    }
    return block_id;
}

bool looks_like_block_hash(const std::string& block_id) {
    return block_id.size() == 66 &&
           (block_id.rfind("0x", 0) == 0 || block_id.rfind("0X", 0) == 0);
}

struct HttpTarget {
    std::string base;  // scheme://host[:port]
    std::string path;
};

HttpTarget split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos)
        throw Error("Transport", "endpoint url must include a scheme: " + url);
    const auto path = url.find('/', scheme + 3);
    if (path == std::string::npos) return {url, "/"};
    return {url.substr(0, path), url.substr(path)};
}

ordered_json rpc_call(const RpcConfig& config, const std::string& method,
                      const ordered_json& params) {
    if (config.url.empty()) throw Error("Transport", "no rpc endpoint configured");
    const HttpTarget target = split_url(config.url);
    ordered_json request;
    request["jsonrpc"] = "2.0";
    request["id"] = 1;
    request["method"] = method;
    request["params"] = params;
    const std::string body = request.dump();

    std::string last_failure = "no attempt made";
    const int attempts = config.max_retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            const int backoff_ms = std::min(100 << (attempt - 1), 2000);
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        }
        httplib::Client client(target.base);
        client.set_connection_timeout(config.timeout_ms / 1000,
                                      (config.timeout_ms % 1000) * 1000);
        client.set_read_timeout(config.timeout_ms / 1000, (config.timeout_ms % 1000) * 1000);
        client.set_write_timeout(config.timeout_ms / 1000, (config.timeout_ms % 1000) * 1000);
        auto res = client.Post(target.path, body, "application/json");
        if (!res) {
            last_failure = "no response: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_failure = "http status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw Error("Transport", "http status " + std::to_string(res->status));
        ordered_json parsed;
        try {
            parsed = ordered_json::parse(res->body);
        } catch (const nlohmann::json::exception&) {
            throw Error("RpcError", "response is not JSON");
        }
        if (parsed.contains("error") && !parsed.at("error").is_null()) {
            const auto& err = parsed.at("error");
            std::string code = err.contains("code") ? err.at("code").dump() : "?";
            std::string message =
                err.contains("message") && err.at("message").is_string()
                    ? err.at("message").get<std::string>()
                    : err.dump();
            throw Error("RpcError", "code " + code + ": " + message);
        }
        if (!parsed.contains("result") || parsed.at("result").is_null())
            throw Error("RpcError", method + " returned no result");
        return parsed.at("result");
    }
    throw Error("Transport",
                last_failure + " after " + std::to_string(attempts) + " attempts");
}

// Fetches header fields for the block and returns the validated encoding
// together with the raw fields.
std::pair<Bytes, ordered_json> fetch_header_fields(const RpcConfig& config,
                                                   const std::string& block_id) {
    ordered_json result;
    if (looks_like_block_hash(block_id)) {
        result = rpc_call(config, "eth_getBlockByHash", ordered_json::array({block_id, false}));
    } else {
        result = rpc_call(config, "eth_getBlockByNumber",
                          ordered_json::array({normalize_block_number(block_id), false}));
    }
    if (!result.is_object()) throw Error("RpcError", "block result is not an object");
    const Bytes header_rlp = encode_header_from_fields(result.dump());
    std::string reported;
    try {
        reported = result.at("hash").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw Error("RpcError", "block result lacks a hash field");
    }
    const Digest32 reported_hash = digest_from_hex(reported);
    if (keccak256(view(header_rlp)) != reported_hash)
        throw Error("HeaderReencodeMismatch",
                    "re-encoded header does not hash to the reported block hash");
    return {header_rlp, result};
}

}  // namespace

Bytes encode_header_from_fields(const std::string& header_fields_json) {
    ordered_json j;
    try {
        j = ordered_json::parse(header_fields_json);
    } catch (const nlohmann::json::exception&) {
        throw Error("RpcError", "header fields are not JSON");
    }
    if (!j.is_object()) throw Error("RpcError", "header fields are not an object");

    std::vector<rlp::Item> items;
    bool truncated = false;
    for (std::size_t i = 0; i < kHeaderSchema.size(); ++i) {
        const HeaderField& field = kHeaderSchema[i];
        const bool present = j.contains(field.name) && !j.at(field.name).is_null();
        if (!present) {
            if (i < kBaseFieldCount)
                throw Error("RpcError", std::string("missing header field: ") + field.name);
            truncated = true;
            continue;
        }
        if (truncated)
            throw Error("RpcError",
                        std::string("non-contiguous trailing header field: ") + field.name);
        std::string text;
        try {
            text = j.at(field.name).get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw Error("RpcError", std::string("header field is not a string: ") + field.name);
        }
        switch (field.kind) {
            case FieldKind::Fixed32:
                items.push_back(rlp::Item::string(view(fixed_bytes(text, 32, field.name))));
                break;
            case FieldKind::Fixed20:
                items.push_back(rlp::Item::string(view(fixed_bytes(text, 20, field.name))));
                break;
            case FieldKind::Fixed256:
                items.push_back(rlp::Item::string(view(fixed_bytes(text, 256, field.name))));
                break;
            case FieldKind::Fixed8:
                items.push_back(rlp::Item::string(view(fixed_bytes(text, 8, field.name))));
                break;
            case FieldKind::Quantity:
                items.push_back(rlp::Item::string(view(quantity_bytes(text))));
                break;
            case FieldKind::VarBytes:
                items.push_back(rlp::Item::string(view(from_hex(text))));
                break;
        }
    }
    return rlp::encode(rlp::Item::items(std::move(items)));
}

Bytes fetch_block_header(const RpcConfig& config, const std::string& block_id) {
    return fetch_header_fields(config, block_id).first;
}

AccountProofBundle fetch_account_proof(const RpcConfig& config, const Address& address,
                                       const std::vector<Digest32>& storage_keys,
                                       const std::string& block_id) {
    const auto [header_rlp, fields] = fetch_header_fields(config, block_id);

    // Pin the proof to the exact block the header came from.
    std::string number_hex;
    try {
        number_hex = fields.at("number").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw Error("RpcError", "block result lacks a number field");
    }
    ordered_json keys = ordered_json::array();
    for (const Digest32& key : storage_keys) keys.push_back(to_hex_prefixed(view(key)));
    const ordered_json proof =
        rpc_call(config, "eth_getProof",
                 ordered_json::array({to_hex_prefixed(view(address)), keys, number_hex}));

    AccountProofBundle bundle;
    bundle.header_rlp = header_rlp;
    bundle.address = address;
    try {
        bundle.account.nonce = quantity_u64(proof.at("nonce").get<std::string>());
        const Bytes balance = quantity_bytes(proof.at("balance").get<std::string>());
        bundle.account.balance = Amount::from_minimal_be(view(balance));
        bundle.account.storage_root =
            digest_from_hex(proof.at("storageHash").get<std::string>());
        bundle.account.code_hash = digest_from_hex(proof.at("codeHash").get<std::string>());
        for (const auto& node : proof.at("accountProof"))
            bundle.proof_nodes.push_back(from_hex(node.get<std::string>()));
        for (const auto& entry : proof.at("storageProof")) {
            StorageProof sp;
            const Bytes key = quantity_bytes(entry.at("key").get<std::string>());
            if (key.size() > 32) throw Error("RpcError", "storage key exceeds 32 bytes");
            std::copy(key.begin(), key.end(),
                      sp.slot_key.begin() + (sp.slot_key.size() - key.size()));
            const Bytes value = quantity_bytes(entry.at("value").get<std::string>());
            // the trie stores the RLP of the scalar; zero means absent
            if (!value.empty()) sp.value = rlp::encode_string(view(value));
            for (const auto& node : entry.at("proof"))
                sp.proof_nodes.push_back(from_hex(node.get<std::string>()));
            bundle.storage_proofs.push_back(std::move(sp));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("RpcError", std::string("malformed proof response: ") + e.what());
    }

    validate_bundle(bundle);
    return bundle;
}

void validate_bundle(const AccountProofBundle& bundle) {
    try {
        const HeaderInfo header = header_hash(view(bundle.header_rlp));
        const auto proven =
            verify_mpt_proof(header.state_root, view(bundle.address), bundle.proof_nodes);
        if (proven.has_value()) {
            if (*proven != bundle.account.rlp())
                throw Error("SelfValidationFailed",
                            "account fields differ from the proven account");
        } else {
            AccountState empty;
            empty.storage_root = keccak256(view(Bytes{0x80}));
            empty.code_hash = keccak256(ByteView{});
            if (!(bundle.account == empty))
                throw Error("SelfValidationFailed",
                            "account proven absent but fields are not the empty account");
        }
        for (const StorageProof& sp : bundle.storage_proofs) {
            const auto value = verify_mpt_proof(bundle.account.storage_root, view(sp.slot_key),
                                                sp.proof_nodes);
            if (value.has_value()) {
                if (sp.value != *value)
                    throw Error("SelfValidationFailed",
                                "storage value differs from the proven value");
            } else if (!sp.value.empty()) {
                throw Error("SelfValidationFailed",
                            "storage slot proven absent but a value is recorded");
            }
        }
    } catch (const Error& e) {
        if (e.code() == "SelfValidationFailed") throw;
        throw Error("SelfValidationFailed",
                    std::string(e.code()) + ": " + std::string(e.detail()));
    }
}

void record_fixture(const AccountProofBundle& bundle, const std::string& path) {
    validate_bundle(bundle);
    const HeaderInfo header = header_hash(view(bundle.header_rlp));
    ordered_json j;
    j["block_hash_hex"] = to_hex_prefixed(view(header.block_hash));
    j["header_rlp_hex"] = to_hex_prefixed(view(bundle.header_rlp));
    j["address_hex"] = to_hex_prefixed(view(bundle.address));
    ordered_json account;
    account["nonce"] = bundle.account.nonce;
    account["balance"] = bundle.account.balance.to_decimal();
    account["storage_root"] = to_hex_prefixed(view(bundle.account.storage_root));
    account["code_hash"] = to_hex_prefixed(view(bundle.account.code_hash));
    j["account"] = std::move(account);
    auto& proof = j["account_proof"] = ordered_json::array();
    for (const Bytes& node : bundle.proof_nodes) proof.push_back(to_hex_prefixed(view(node)));
    auto& storage = j["storage_proofs"] = ordered_json::array();
    for (const StorageProof& sp : bundle.storage_proofs) {
        ordered_json s;
        s["key_hex"] = to_hex_prefixed(view(sp.slot_key));
        s["value_hex"] = to_hex_prefixed(view(sp.value));
        auto& nodes = s["proof"] = ordered_json::array();
        for (const Bytes& node : sp.proof_nodes) nodes.push_back(to_hex_prefixed(view(node)));
        storage.push_back(std::move(s));
    }
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw Error("IoError", "cannot open fixture for write: " + path);
    out << j.dump(1) << '\n';
    if (!out.flush()) throw Error("IoError", "write failed: " + path);
}

AccountProofBundle load_fixture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IoError", "cannot open fixture: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error("IoError", "read failed: " + path);
    const std::string text = buffer.str();

    try {
        const AccountProofBundle bundle = parse_eth_witness(view(text));
        const auto j = ordered_json::parse(text);
        const Digest32 recorded_hash =
            digest_from_hex(j.at("block_hash_hex").get<std::string>());
        if (header_hash(view(bundle.header_rlp)).block_hash != recorded_hash)
            throw Error("FixtureCorrupt", "recorded block hash differs from the header");
        validate_bundle(bundle);
        return bundle;
    } catch (const nlohmann::json::exception& e) {
        throw Error("FixtureCorrupt", e.what());
    } catch (const Error& e) {
        if (e.code() == "FixtureCorrupt") throw;
        throw Error("FixtureCorrupt", std::string(e.code()) + ": " + std::string(e.detail()));
    }
}

RpcConfig load_rpc_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IoError", "cannot open config: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    RpcConfig config;
    try {
        const auto j = ordered_json::parse(buffer.str());
        config.url = j.value("url", std::string());
        config.timeout_ms = j.value("timeout_ms", config.timeout_ms);
        config.max_retries = j.value("max_retries", config.max_retries);
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", std::string("config: ") + e.what());
    }
    if (const char* env = std::getenv("SOLVKIT_RPC_URL"); env != nullptr && *env != '\0')
        config.url = env;
    return config;
}

RpcConfig rpc_config_from_env(std::optional<std::string> url_flag) {
    RpcConfig config;
    if (url_flag) config.url = *url_flag;
    if (const char* env = std::getenv("SOLVKIT_RPC_URL"); env != nullptr && *env != '\0')
        config.url = env;
    return config;
}

}  // namespace solvkit
