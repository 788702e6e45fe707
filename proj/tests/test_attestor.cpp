// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "solvkit/attestor.hpp"
#include "solvkit/btcstate.hpp"
#include "solvkit/bytes.hpp"
#include "solvkit/ethstate.hpp"
#include "solvkit/hash.hpp"
#include "solvkit/liabilities.hpp"
#include "solvkit/solvency.hpp"
#include "testenv.hpp"

using namespace solvkit;
using testsupport::Rng;

namespace {

struct RelationCase {
    std::string relation;
    Bytes statement;
    Bytes witness;
};

LiabilityTree small_tree() {
    Rng rng(0xa77e57ULL);
    const AssetKey eth{"eth", {}};
    std::vector<UserLeaf> users;
    users.push_back(make_user_leaf(view(std::string_view("cust-a")),
                                   {{eth, Amount::from_u64(25)}}, rng.digest()));
    users.push_back(make_user_leaf(view(std::string_view("cust-b")),
                                   {{eth, Amount::from_u64(35)}}, rng.digest()));
    return build_liability_tree(std::move(users));
}

RelationCase liability_case() {
    const LiabilityTree tree = small_tree();
    LiabilityStatement statement;
    statement.root = tree.root();
    statement.sum_leaf_index = tree.sum_leaf_index;
    return {"liability-v1", liability_statement_bytes(statement),
            liability_witness_bytes(witness_of(tree))};
}

RelationCase eth_case() {
    const std::string text =
        testsupport::read_file(testsupport::fixture_dir() / "eth" / "account_main.json");
    const auto j = nlohmann::json::parse(text);
    EthReserveStatement statement;
    statement.min_amount = Amount::from_decimal("1000000000000000000000");
    statement.block_hash = digest_from_hex(j.at("block_hash_hex").get<std::string>());
    return {"eth-reserve-v1", eth_statement_bytes(statement),
            eth_witness_bytes(parse_eth_witness(view(text)))};
}

RelationCase erc20_case() {
    const std::string text =
        testsupport::read_file(testsupport::fixture_dir() / "eth" / "erc20_main.json");
    const auto j = nlohmann::json::parse(text);
    const auto keys = nlohmann::json::parse(
        testsupport::read_file(testsupport::fixture_dir() / "e2e" / "keys.json"));
    Erc20ReserveStatement statement;
    statement.min_amount = Amount::from_u64(5'000'000'000ULL);
    statement.block_hash = digest_from_hex(j.at("block_hash_hex").get<std::string>());
    statement.token_contract =
        address_from_hex(keys.at("token_contract_hex").get<std::string>());
    statement.mapping_slot = Amount();
    Erc20Witness witness;
    witness.bundle = parse_eth_witness(view(text));
    witness.holder =
        address_from_hex(keys.at("erc20_holder").at("address_hex").get<std::string>());
    return {"erc20-reserve-v1", erc20_statement_bytes(statement),
            erc20_witness_bytes(witness)};
}

RelationCase btc_case() {
    const auto keys = nlohmann::json::parse(
        testsupport::read_file(testsupport::fixture_dir() / "e2e" / "keys.json"));
    const Bytes script = from_hex(keys.at("btc").at("script_hex").get<std::string>());
    std::ifstream dump(testsupport::fixture_dir() / "btc" / "chainstate_main.jsonl");
    const UtxoSnapshot snapshot = ingest_chainstate(dump);
    const UtxoTree tree = build_utxo_tree(snapshot);
    BtcReserveWitness witness;
    for (std::size_t i = 0; i < snapshot.utxos.size(); ++i) {
        if (snapshot.utxos[i].script_pubkey == script) {
            witness.utxos.push_back(snapshot.utxos[i]);
            witness.paths.push_back(tree.tree.prove(i));
        }
    }
    witness.script_template = script;
    BtcReserveStatement statement;
    statement.utxo_root = tree.root();
    statement.snapshot_block = tree.snapshot_block;
    statement.min_amount = Amount::from_u64(150'000'000ULL);
    return {"btc-reserve-v1", btc_statement_bytes(statement), btc_witness_bytes(witness)};
}

// One user owing 60 wei, covered by the recorded 1250 ETH reserve account.
RelationCase solvency_case() {
    Rng rng(0x50111e7eULL);
    const auto keys = nlohmann::json::parse(
        testsupport::read_file(testsupport::fixture_dir() / "e2e" / "keys.json"));
    const std::string eth_fx =
        testsupport::read_file(testsupport::fixture_dir() / "eth" / "account_main.json");
    const auto eth_json = nlohmann::json::parse(eth_fx);

    const AssetKey eth{"eth", {}};
    std::vector<UserLeaf> users;
    users.push_back(make_user_leaf(view(std::string_view("cust-solo")),
                                   {{eth, Amount::from_u64(60)}}, rng.digest()));
    const LiabilityTree tree = build_liability_tree(std::move(users));

    SolvencyStatement statement;
    statement.round_id = 1;
    statement.liabilities_root = tree.root();
    statement.liabilities_sum_leaf_index = tree.sum_leaf_index;
    statement.eth_block_hash =
        digest_from_hex(eth_json.at("block_hash_hex").get<std::string>());

    SolvencyWitness witness;
    witness.sum_entries = witness_of(tree).sum_entries;
    witness.sum_leaf_path = tree.tree.prove(tree.sum_leaf_index);

    ReserveClaim claim;
    claim.asset = eth;
    claim.amount = Amount::from_u64(100);
    claim.relation = "eth-reserve-v1";
    EthReserveStatement inner;
    inner.min_amount = claim.amount;
    inner.block_hash = *statement.eth_block_hash;
    claim.inner_statement = eth_statement_bytes(inner);
    claim.inner_witness = eth_witness_bytes(parse_eth_witness(view(eth_fx)));
    claim.ownership = sign_ownership(
        digest_from_hex(keys.at("eth").at("secret_hex").get<std::string>()),
        SigScheme::EthKeccak,
        view(ownership_message(statement.round_id, statement.liabilities_root, "eth")));
    witness.claims.push_back(std::move(claim));

    return {"solvency-v1", solvency_statement_bytes(statement),
            solvency_witness_bytes(witness)};
}

std::vector<RelationCase> all_cases() {
    return {liability_case(), eth_case(), erc20_case(), btc_case(), solvency_case()};
}

}  // namespace

TEST_CASE("base64 round-trips and rejects malformed text") {
    CHECK(base64_encode({}) == "");
    CHECK(base64_decode("") == Bytes{});

    const std::pair<std::string, std::string> vectors[] = {
        {"f", "Zg=="},       {"fo", "Zm8="},      {"foo", "Zm9v"},
        {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="}, {"foobar", "Zm9vYmFy"},
    };
    for (const auto& [plain, encoded] : vectors) {
        CAPTURE(plain);
        CHECK(base64_encode(view(plain)) == encoded);
        CHECK(base64_decode(encoded) == to_bytes(view(plain)));
    }

    Rng rng(0xb64b64ULL);
    for (int i = 0; i < 200; ++i) {
        const Bytes data = rng.bytes(rng.below(100));
        CHECK(base64_decode(base64_encode(view(data))) == data);
    }

    CHECK_THROWS_AS(base64_decode("Zg"), Error);
    CHECK_THROWS_AS(base64_decode("Zm9v\n"), Error);
    CHECK_THROWS_AS(base64_decode("Zm9$"), Error);
    CHECK_THROWS_AS(base64_decode("Z=m9"), Error);
    CHECK_THROWS_AS(base64_decode("===="), Error);
}

TEST_CASE("the relation set is closed") {
    CHECK(is_known_relation("liability-v1"));
    CHECK(is_known_relation("eth-reserve-v1"));
    CHECK(is_known_relation("erc20-reserve-v1"));
    CHECK(is_known_relation("btc-reserve-v1"));
    CHECK(is_known_relation("solvency-v1"));
    CHECK_FALSE(is_known_relation("bogus"));
    CHECK_FALSE(is_known_relation(""));
    CHECK_FALSE(is_known_relation("liability-v2"));
    CHECK_FALSE(is_known_relation("liability-v1 "));
}

TEST_CASE("attest and verify round-trip for every relation") {
    for (const RelationCase& c : all_cases()) {
        CAPTURE(c.relation);
        const Attestation att = attest(c.relation, view(c.statement), view(c.witness));
        CHECK(att.relation == c.relation);
        CHECK(att.backend == "transparent-v1");
        CHECK(att.statement_digest == keccak256(view(c.statement)));
        CHECK(att.payload == c.witness);

        const RelationVerdict verdict = verify_attestation(view(c.statement), att);
        CHECK(verdict.accepted);
        CHECK(verdict.reason == "ok");

        Bytes other_statement = c.statement;
        other_statement[other_statement.size() / 2] ^= 0x01;
        const RelationVerdict mismatch = verify_attestation(view(other_statement), att);
        CHECK_FALSE(mismatch.accepted);
        CHECK(mismatch.reason == "StatementMismatch");
    }
}

TEST_CASE("one attestation never verifies two distinct statements") {
    const RelationCase a = eth_case();
    const auto j = nlohmann::json::parse(testsupport::read_file(
        testsupport::fixture_dir() / "eth" / "account_main.json"));
    EthReserveStatement lower;
    lower.min_amount = Amount::from_u64(1);
    lower.block_hash = digest_from_hex(j.at("block_hash_hex").get<std::string>());
    const Bytes other = eth_statement_bytes(lower);
    REQUIRE(other != a.statement);

    const Attestation att = attest(a.relation, view(a.statement), view(a.witness));
    CHECK(verify_attestation(view(a.statement), att).accepted);
    CHECK_FALSE(verify_attestation(view(other), att).accepted);
    // the lower minimum holds on its own, but needs its own attestation
    CHECK(verify_attestation(view(other), attest(a.relation, view(other), view(a.witness)))
              .accepted);
}

TEST_CASE("attest refuses rejection, junk, and unknown names") {
    const RelationCase c = liability_case();

    SUBCASE("rejected relations throw with the verdict inside") {
        LiabilityStatement statement = parse_liability_statement(view(c.statement));
        statement.root[0] ^= 0x01;
        const Bytes bad_statement = liability_statement_bytes(statement);
        try {
            attest(c.relation, view(bad_statement), view(c.witness));
            FAIL("attest accepted a failing relation");
        } catch (const Error& e) {
            CHECK(e.code() == "RelationRejected");
            CHECK(e.detail().find("RootMismatch") != std::string::npos);
        }
    }
    SUBCASE("unknown relation names") {
        CHECK_THROWS_AS(attest("bogus", view(c.statement), view(c.witness)), Error);
        try {
            attest("bogus", view(c.statement), view(c.witness));
        } catch (const Error& e) {
            CHECK(e.code() == "UnknownRelation");
        }
    }
    SUBCASE("unparseable inputs") {
        const std::string junk = "[[";
        try {
            attest(c.relation, view(junk), view(c.witness));
            FAIL("attest accepted junk statement bytes");
        } catch (const Error& e) {
            CHECK(e.code() == "ParseError");
        }
    }
}

TEST_CASE("verify fails closed on backend, relation, and payload") {
    const RelationCase c = liability_case();
    const Attestation good = attest(c.relation, view(c.statement), view(c.witness));

    SUBCASE("unknown backend") {
        Attestation bad = good;
        bad.backend = "groth16";
        const RelationVerdict verdict = verify_attestation(view(c.statement), bad);
        CHECK_FALSE(verdict.accepted);
        CHECK(verdict.reason == "UnknownBackend");
    }
    SUBCASE("unknown relation") {
        Attestation bad = good;
        bad.relation = "bogus";
        const RelationVerdict verdict = verify_attestation(view(c.statement), bad);
        CHECK_FALSE(verdict.accepted);
        CHECK(verdict.reason == "UnknownRelation");
    }
    SUBCASE("tampered digest") {
        Attestation bad = good;
        bad.statement_digest[31] ^= 0x01;
        const RelationVerdict verdict = verify_attestation(view(c.statement), bad);
        CHECK_FALSE(verdict.accepted);
        CHECK(verdict.reason == "StatementMismatch");
    }
    SUBCASE("altered payload surfaces the relation's own verdict") {
        LiabilityWitness witness = parse_liability_witness(view(c.witness));
        witness.sum_entries[0].amount_be[31] ^= 0x01;
        Attestation bad = good;
        bad.payload = liability_witness_bytes(witness);
        const RelationVerdict verdict = verify_attestation(view(c.statement), bad);
        CHECK_FALSE(verdict.accepted);
        CHECK(verdict.reason == "RootMismatch");
    }
    SUBCASE("unparseable payload comes back as a verdict") {
        Attestation bad = good;
        bad.payload = {0x5b};  // "["
        const RelationVerdict verdict = verify_attestation(view(c.statement), bad);
        CHECK_FALSE(verdict.accepted);
        CHECK(verdict.reason == "ParseError");
    }
}

TEST_CASE("attestation files round-trip") {
    for (const RelationCase& c : all_cases()) {
        CAPTURE(c.relation);
        const Attestation att = attest(c.relation, view(c.statement), view(c.witness));
        const std::string text = attestation_to_json(att);
        CHECK(attestation_from_json(text) == att);
        // the file embeds no raw witness bytes, only base64
        CHECK(text.find("payload_base64") != std::string::npos);
    }

    CHECK_THROWS_AS(attestation_from_json("nope"), Error);
    CHECK_THROWS_AS(attestation_from_json("{}"), Error);
    CHECK_THROWS_AS(attestation_from_json(
                        R"({"relation":"liability-v1","backend":"transparent-v1",)"
                        R"("statement_digest_hex":"zz","payload_base64":""})"),
                    Error);
    CHECK_THROWS_AS(attestation_from_json(
                        R"({"relation":"liability-v1","backend":"transparent-v1",)"
                        R"("statement_digest_hex":"00","payload_base64":""})"),
                    Error);
    CHECK_THROWS_AS(attestation_from_json(
                        R"({"relation":"liability-v1","backend":"transparent-v1",)"
                        R"("statement_digest_hex":")" +
                            std::string(64, '0') + R"(","payload_base64":"!!"})"),
                    Error);
}
