// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>

#include <json.hpp>

#include <solvkit/liabilities.hpp>

namespace solvkit {

namespace {

constexpr std::uint8_t kUserLeafTag = 0x4C;  // "L"
constexpr std::uint8_t kSumLeafTag = 0x53;   // "S"

void append_entries(Bytes& out, const std::vector<BalanceEntry>& entries) {
    append_be32(out, static_cast<std::uint32_t>(entries.size()));
    for (const auto& [key, amount] : entries) {
        append_u8(out, static_cast<std::uint8_t>(key.network.size()));
        append(out, view(key.network));
        append(out, view(key.asset));
        append(out, view(amount.be32()));
    }
}

void validate_sorted_unique(std::vector<BalanceEntry>& entries) {
    std::sort(entries.begin(), entries.end(),
              [](const BalanceEntry& a, const BalanceEntry& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const AssetKey& key = entries[i].first;
        if (key.network.empty() || key.network.size() > 255) {
            throw Error("InvalidAsset", "network id must be 1..255 bytes");
        }
        if (i > 0 && key == entries[i - 1].first) {
            throw Error("DuplicateAsset", "asset appears twice: " + key.network);
        }
    }
}

nlohmann::ordered_json entry_to_json(const AssetKey& key, std::string_view amount_hex) {
    nlohmann::ordered_json e;
    e["network"] = key.network;
    e["asset_hex"] = to_hex(view(key.asset));
    e["amount_hex"] = amount_hex;
    return e;
}

std::vector<RawBalanceEntry> raw_entries_from_json(const nlohmann::json& arr) {
    std::vector<RawBalanceEntry> out;
    for (const auto& e : arr) {
        RawBalanceEntry entry;
        entry.key.network = e.at("network").get<std::string>();
        entry.key.asset = address_from_hex(e.at("asset_hex").get<std::string>());
        entry.amount_be = from_hex(e.at("amount_hex").get<std::string>());
        out.push_back(std::move(entry));
    }
    return out;
}

// Rebuilds canonical leaf bytes from raw witness entries; amounts must
// already be exactly 32 bytes.
Bytes raw_leaf_bytes(std::uint8_t tag, const Digest32* commitment,
                     const std::vector<RawBalanceEntry>& entries) {
    Bytes out;
    append_u8(out, tag);
    if (commitment != nullptr) append(out, view(*commitment));
    append_be32(out, static_cast<std::uint32_t>(entries.size()));
    for (const auto& entry : entries) {
        append_u8(out, static_cast<std::uint8_t>(entry.key.network.size()));
        append(out, view(entry.key.network));
        append(out, view(entry.key.asset));
        append(out, view(entry.amount_be));
    }
    return out;
}

}  // namespace

Bytes UserLeaf::canonical_bytes() const {
    Bytes out;
    append_u8(out, kUserLeafTag);
    append(out, view(user_id_commitment));
    append_entries(out, balances);
    return out;
}

Bytes SumLeaf::canonical_bytes() const {
    Bytes out;
    append_u8(out, kSumLeafTag);
    append_entries(out, totals);
    return out;
}

UserLeaf make_user_leaf(ByteView user_id, std::vector<BalanceEntry> balances,
                        const Digest32& salt) {
    if (user_id.empty()) throw Error("EmptyInput", "user id must be non-empty");
    if (balances.empty()) throw Error("EmptyInput", "user must carry at least one balance");
    validate_sorted_unique(balances);
    UserLeaf leaf;
    leaf.user_id_commitment = keccak256({user_id, view(salt)});
    leaf.salt = salt;
    leaf.balances = std::move(balances);
    return leaf;
}

LiabilityTree build_liability_tree(std::vector<UserLeaf> user_leaves) {
    if (user_leaves.empty()) throw Error("EmptyInput", "no user leaves");

    std::map<AssetKey, Amount> totals;
    for (const UserLeaf& leaf : user_leaves) {
        for (const auto& [key, amount] : leaf.balances) {
            auto [it, inserted] = totals.emplace(key, amount);
            if (!inserted) {
                const auto sum = Amount::checked_add(it->second, amount);
                if (!sum) throw Error("SumOverflow", "total exceeds 32 bytes: " + key.network);
                it->second = *sum;
            }
        }
    }

    SumLeaf sum_leaf;
    sum_leaf.totals.assign(totals.begin(), totals.end());

    std::vector<Bytes> leaves;
    leaves.reserve(user_leaves.size() + 1);
    for (const UserLeaf& leaf : user_leaves) leaves.push_back(leaf.canonical_bytes());
    leaves.push_back(sum_leaf.canonical_bytes());

    return LiabilityTree{MerkleTree::build(leaves), std::move(user_leaves),
                         std::move(sum_leaf), leaves.size() - 1};
}

UserProofBundle export_user_proof(const LiabilityTree& tree, std::size_t user_index) {
    if (user_index >= tree.user_leaves.size()) {
        throw Error("IndexOutOfRange", "no user leaf at that index");
    }
    UserProofBundle bundle;
    bundle.leaf_bytes = tree.user_leaves[user_index].canonical_bytes();
    bundle.salt = tree.user_leaves[user_index].salt;
    bundle.path = tree.tree.prove(user_index);
    bundle.root = tree.root();
    return bundle;
}

bool verify_user_proof(const UserProofBundle& bundle) {
    return MerkleTree::verify(bundle.root, view(bundle.leaf_bytes), bundle.path);
}

std::string user_proof_to_json(const UserProofBundle& bundle) {
    nlohmann::ordered_json j;
    j["leaf_hex"] = to_hex(view(bundle.leaf_bytes));
    j["salt_hex"] = to_hex(view(bundle.salt));
    j["path"] = nlohmann::ordered_json::parse(merkle_path_to_json(bundle.path));
    j["root_hex"] = to_hex(view(bundle.root));
    return j.dump(1);
}

UserProofBundle user_proof_from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("MalformedBundle", "bad bundle record");
    try {
        UserProofBundle bundle;
        bundle.leaf_bytes = from_hex(j.at("leaf_hex").get<std::string>());
        bundle.salt = digest_from_hex(j.at("salt_hex").get<std::string>());
        bundle.path = merkle_path_from_json(j.at("path").dump());
        bundle.root = digest_from_hex(j.at("root_hex").get<std::string>());
        return bundle;
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedBundle", e.what());
    }
}

RelationVerdict check_liability_relation(const LiabilityStatement& statement,
                                         const LiabilityWitness& witness) {
    if (witness.user_leaves.empty()) {
        return RelationVerdict::reject("EmptyWitness", "no user leaves");
    }
    if (statement.sum_leaf_index != witness.user_leaves.size()) {
        return RelationVerdict::reject(
            "SumLeafIndexMismatch",
            "sum leaf must sit at index equal to the user leaf count");
    }

    // Amount canonicality before anything derived from the bytes.
    for (const RawLeaf& leaf : witness.user_leaves) {
        for (const RawBalanceEntry& entry : leaf.entries) {
            if (entry.amount_be.size() != 32) {
                return RelationVerdict::reject("InvalidAmount",
                                               "amount is not a 32-byte value");
            }
        }
    }
    for (const RawBalanceEntry& entry : witness.sum_entries) {
        if (entry.amount_be.size() != 32) {
            return RelationVerdict::reject("InvalidAmount",
                                           "sum amount is not a 32-byte value");
        }
    }
    const auto network_ok = [](const RawBalanceEntry& entry) {
        return !entry.key.network.empty() && entry.key.network.size() <= 255;
    };
    for (const RawLeaf& leaf : witness.user_leaves) {
        if (!std::all_of(leaf.entries.begin(), leaf.entries.end(), network_ok)) {
            return RelationVerdict::reject("InvalidAsset", "network id must be 1..255 bytes");
        }
    }
    if (!std::all_of(witness.sum_entries.begin(), witness.sum_entries.end(), network_ok)) {
        return RelationVerdict::reject("InvalidAsset", "network id must be 1..255 bytes");
    }

    std::vector<Bytes> leaves;
    leaves.reserve(witness.user_leaves.size() + 1);
    for (const RawLeaf& leaf : witness.user_leaves) {
        leaves.push_back(raw_leaf_bytes(kUserLeafTag, &leaf.user_id_commitment, leaf.entries));
    }
    leaves.push_back(raw_leaf_bytes(kSumLeafTag, nullptr, witness.sum_entries));
    const MerkleTree tree = MerkleTree::build(leaves);
    if (tree.root() != statement.root) {
        return RelationVerdict::reject("RootMismatch",
                                       "witness leaves do not reproduce the root");
    }

    std::map<AssetKey, Amount> totals;
    for (const RawLeaf& leaf : witness.user_leaves) {
        for (const RawBalanceEntry& entry : leaf.entries) {
            const Amount amount = Amount::from_be(view(entry.amount_be));
            auto [it, inserted] = totals.emplace(entry.key, amount);
            if (!inserted) {
                const auto sum = Amount::checked_add(it->second, amount);
                if (!sum) {
                    return RelationVerdict::reject("SumMismatch",
                                                   "per-asset total overflows");
                }
                it->second = *sum;
            }
        }
    }
    std::map<AssetKey, Amount> claimed;
    for (const RawBalanceEntry& entry : witness.sum_entries) {
        const auto [it, inserted] =
            claimed.emplace(entry.key, Amount::from_be(view(entry.amount_be)));
        if (!inserted) {
            return RelationVerdict::reject("SumMismatch", "duplicate asset in sum leaf");
        }
    }
    if (claimed != totals) {
        return RelationVerdict::reject("SumMismatch",
                                       "sum leaf differs from per-asset totals");
    }
    return RelationVerdict::ok();
}

LiabilityWitness witness_of(const LiabilityTree& tree) {
    LiabilityWitness w;
    for (const UserLeaf& leaf : tree.user_leaves) {
        RawLeaf raw;
        raw.user_id_commitment = leaf.user_id_commitment;
        for (const auto& [key, amount] : leaf.balances) {
            raw.entries.push_back({key, to_bytes(view(amount.be32()))});
        }
        w.user_leaves.push_back(std::move(raw));
    }
    for (const auto& [key, amount] : tree.sum_leaf.totals) {
        w.sum_entries.push_back({key, to_bytes(view(amount.be32()))});
    }
    return w;
}

Bytes liability_statement_bytes(const LiabilityStatement& statement) {
    nlohmann::ordered_json j;
    j["relation"] = "liability-v1";
    j["root_hex"] = to_hex(view(statement.root));
    j["sum_leaf_index"] = statement.sum_leaf_index;
    const std::string s = j.dump();
    return Bytes(s.begin(), s.end());
}

LiabilityStatement parse_liability_statement(ByteView data) {
    const auto j = nlohmann::json::parse(data.begin(), data.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object() ||
        j.value("relation", "") != std::string("liability-v1")) {
        throw Error("ParseError", "bad liability statement");
    }
    try {
        LiabilityStatement s;
        s.root = digest_from_hex(j.at("root_hex").get<std::string>());
        s.sum_leaf_index = j.at("sum_leaf_index").get<std::uint64_t>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
}

Bytes liability_witness_bytes(const LiabilityWitness& witness) {
    nlohmann::ordered_json j;
    auto& users = j["user_leaves"] = nlohmann::ordered_json::array();
    for (const RawLeaf& leaf : witness.user_leaves) {
        nlohmann::ordered_json u;
        u["commitment_hex"] = to_hex(view(leaf.user_id_commitment));
        auto& entries = u["entries"] = nlohmann::ordered_json::array();
        for (const RawBalanceEntry& entry : leaf.entries) {
            entries.push_back(entry_to_json(entry.key, to_hex(view(entry.amount_be))));
        }
        users.push_back(std::move(u));
    }
    auto& sums = j["sum_entries"] = nlohmann::ordered_json::array();
    for (const RawBalanceEntry& entry : witness.sum_entries) {
        sums.push_back(entry_to_json(entry.key, to_hex(view(entry.amount_be))));
    }
    const std::string s = j.dump();
    return Bytes(s.begin(), s.end());
}

LiabilityWitness parse_liability_witness(ByteView data) {
    const auto j = nlohmann::json::parse(data.begin(), data.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("ParseError", "bad liability witness");
    try {
        LiabilityWitness w;
        for (const auto& u : j.at("user_leaves")) {
            RawLeaf leaf;
            leaf.user_id_commitment = digest_from_hex(u.at("commitment_hex").get<std::string>());
            leaf.entries = raw_entries_from_json(u.at("entries"));
            w.user_leaves.push_back(std::move(leaf));
        }
        w.sum_entries = raw_entries_from_json(j.at("sum_entries"));
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    } catch (const Error& e) {
        throw Error("ParseError", e.detail().empty() ? e.code() : e.detail());
    }
}

}  // namespace solvkit
