// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <solvkit/registry.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>
#include <utility>

#include <json.hpp>

#include <solvkit/btcstate.hpp>
#include <solvkit/ethstate.hpp>
#include <solvkit/hash.hpp>
#include <solvkit/liabilities.hpp>
#include <solvkit/solvency.hpp>

#include <httplib.h>

namespace solvkit {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kLiabilityRelation = "liability-v1";
constexpr std::string_view kSolvencyRelation = "solvency-v1";

bool is_reserve_relation(std::string_view relation) {
    return relation == "eth-reserve-v1" || relation == "erc20-reserve-v1" ||
           relation == "btc-reserve-v1";
}

ordered_json commitments_to_json(const SnapshotCommitments& c) {
    ordered_json j = ordered_json::object();
    if (c.eth_block_hash) j["eth_block_hash_hex"] = to_hex(view(*c.eth_block_hash));
    if (c.btc_utxo_root) j["btc_utxo_root_hex"] = to_hex(view(*c.btc_utxo_root));
    if (c.btc_snapshot_block) j["btc_snapshot_block_hex"] = to_hex(view(*c.btc_snapshot_block));
    return j;
}

SnapshotCommitments commitments_from_json(const ordered_json& j) {
    SnapshotCommitments c;
    if (j.contains("eth_block_hash_hex"))
        c.eth_block_hash = digest_from_hex(j.at("eth_block_hash_hex").get<std::string>());
    if (j.contains("btc_utxo_root_hex"))
        c.btc_utxo_root = digest_from_hex(j.at("btc_utxo_root_hex").get<std::string>());
    if (j.contains("btc_snapshot_block_hex"))
        c.btc_snapshot_block = digest_from_hex(j.at("btc_snapshot_block_hex").get<std::string>());
    return c;
}

ordered_json stored_to_json(const StoredAttestation& stored) {
    return {{"statement_base64", base64_encode(view(stored.statement))},
            {"attestation", ordered_json::parse(attestation_to_json(stored.attestation))}};
}

StoredAttestation stored_from_json(const ordered_json& j) {
    StoredAttestation stored;
    stored.statement = base64_decode(j.at("statement_base64").get<std::string>());
    stored.attestation = attestation_from_json(j.at("attestation").dump());
    return stored;
}

std::uint64_t unix_ms_now() {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::system_clock::now().time_since_epoch())
                                          .count());
}

class MemoryLog final : public LogStorage {
  public:
    void append_line(const std::string& line) override { lines_.push_back(line); }
    std::vector<std::string> read_lines() override { return lines_; }

  private:
    std::vector<std::string> lines_;
};

class FileLog final : public LogStorage {
  public:
    explicit FileLog(std::string path) : path_(std::move(path)) {}

    void append_line(const std::string& line) override {
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        if (!out) throw Error("IoError", "cannot open log for append: " + path_);
        out << line << '\n';
        out.flush();
        if (!out) throw Error("IoError", "write failed: " + path_);
    }

    std::vector<std::string> read_lines() override {
        std::ifstream in(path_, std::ios::binary);
        // A missing file is an empty log, not an error.
        if (!in) return {};
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) lines.push_back(line);
        }
        if (in.bad()) throw Error("IoError", "read failed: " + path_);
        return lines;
    }

  private:
    std::string path_;
};

}  // namespace

std::string to_string(RoundStatus status) {
    switch (status) {
        case RoundStatus::Open:
            return "Open";
        case RoundStatus::LiabilitiesSet:
            return "LiabilitiesSet";
        case RoundStatus::Finalized:
            return "Finalized";
    }
    throw Error("InternalError", "unhandled round status");
}

std::unique_ptr<LogStorage> make_file_log(const std::string& path) {
    return std::make_unique<FileLog>(path);
}

std::unique_ptr<LogStorage> make_memory_log() { return std::make_unique<MemoryLog>(); }

struct Registry::Impl {
    std::unique_ptr<LogStorage> storage;
    std::vector<Round> rounds;
    std::uint64_t next_seq = 1;
    mutable std::mutex mu;

    explicit Impl(std::unique_ptr<LogStorage> s) : storage(std::move(s)) { replay(); }

    Round& find(std::uint64_t round_id) {
        if (round_id == 0 || round_id > rounds.size())
            throw Error("UnknownRound", "no round " + std::to_string(round_id));
        return rounds[round_id - 1];
    }

    // Single state mutator shared by the live path and replay.  Live calls
    // validate first with operation-specific errors; any violation seen here
    // means the log itself is inconsistent.
    void apply_opened(std::uint64_t round_id, const SnapshotCommitments& commitments) {
        if (round_id != rounds.size() + 1)
            throw Error("LogCorrupt", "round id out of order: " + std::to_string(round_id));
        if (!rounds.empty() && rounds.back().status != RoundStatus::Finalized)
            throw Error("LogCorrupt", "round opened while previous round not finalized");
        Round r;
        r.round_id = round_id;
        r.status = RoundStatus::Open;
        r.commitments = commitments;
        rounds.push_back(std::move(r));
    }

    void apply_liabilities(std::uint64_t round_id, const Digest32& root, std::uint64_t sum_index,
                           StoredAttestation stored) {
        if (round_id == 0 || round_id > rounds.size())
            throw Error("LogCorrupt", "liabilities event for unknown round");
        Round& r = rounds[round_id - 1];
        if (r.status != RoundStatus::Open)
            throw Error("LogCorrupt", "liabilities event on a round that is not open");
        r.status = RoundStatus::LiabilitiesSet;
        r.liabilities_root = root;
        r.sum_leaf_index = sum_index;
        r.liability_attestation = std::move(stored);
    }

    void apply_reserve(std::uint64_t round_id, StoredAttestation stored) {
        if (round_id == 0 || round_id > rounds.size())
            throw Error("LogCorrupt", "reserve event for unknown round");
        Round& r = rounds[round_id - 1];
        if (r.status != RoundStatus::LiabilitiesSet)
            throw Error("LogCorrupt", "reserve event on a round without liabilities");
        r.reserve_attestations.push_back(std::move(stored));
    }

    void apply_finalized(std::uint64_t round_id, bool accepted, StoredAttestation stored) {
        if (round_id == 0 || round_id > rounds.size())
            throw Error("LogCorrupt", "finalize event for unknown round");
        Round& r = rounds[round_id - 1];
        if (r.status != RoundStatus::LiabilitiesSet)
            throw Error("LogCorrupt", "finalize event on a round without liabilities");
        r.status = RoundStatus::Finalized;
        r.finalized_accepted = accepted;
        r.solvency_attestation = std::move(stored);
    }

    void apply_event(const std::string& kind, std::uint64_t round_id,
                     const ordered_json& payload) {
        if (kind == "RoundOpened") {
            apply_opened(round_id, commitments_from_json(payload.at("commitments")));
        } else if (kind == "LiabilitiesSubmitted") {
            apply_liabilities(round_id,
                              digest_from_hex(payload.at("liabilities_root_hex").get<std::string>()),
                              payload.at("sum_leaf_index").get<std::uint64_t>(),
                              stored_from_json(payload.at("stored")));
        } else if (kind == "ReserveSubmitted") {
            apply_reserve(round_id, stored_from_json(payload.at("stored")));
        } else if (kind == "Finalized") {
            apply_finalized(round_id, payload.at("accepted").get<bool>(),
                            stored_from_json(payload.at("stored")));
        } else {
            throw Error("LogCorrupt", "unknown event kind: " + kind);
        }
    }

    // Writes the event line before mutating state, so an append failure
    // leaves memory and log agreeing.  The digest covers the serialized
    // record with every field but the digest itself.
    void append_event(const std::string& kind, std::uint64_t round_id, ordered_json payload) {
        ordered_json event;
        event["seq"] = next_seq;
        event["kind"] = kind;
        event["round_id"] = round_id;
        event["unix_ms"] = unix_ms_now();
        event["payload"] = std::move(payload);
        const std::string prefix = event.dump();
        event["digest_hex"] = to_hex(view(keccak256(view(prefix))));
        storage->append_line(event.dump());
        ++next_seq;
        apply_event(kind, round_id, event.at("payload"));
    }

    void replay() {
        for (const std::string& line : storage->read_lines()) {
            ordered_json event;
            try {
                event = ordered_json::parse(line);
            } catch (const nlohmann::json::exception&) {
                throw Error("LogCorrupt", "unparseable event line");
            }
            try {
                const std::string stored_digest = event.at("digest_hex").get<std::string>();
                event.erase("digest_hex");
                const std::string prefix = event.dump();
                if (to_hex(view(keccak256(view(prefix)))) != stored_digest)
                    throw Error("LogCorrupt", "event digest mismatch at seq " +
                                                  std::to_string(next_seq));
                if (event.at("seq").get<std::uint64_t>() != next_seq)
                    throw Error("LogCorrupt", "event sequence gap at seq " +
                                                  std::to_string(next_seq));
                apply_event(event.at("kind").get<std::string>(),
                            event.at("round_id").get<std::uint64_t>(), event.at("payload"));
                ++next_seq;
            } catch (const nlohmann::json::exception&) {
                throw Error("LogCorrupt", "malformed event fields at seq " +
                                              std::to_string(next_seq));
            } catch (const Error& e) {
                if (e.code() == "LogCorrupt") throw;
                throw Error("LogCorrupt", std::string(e.code()) + ": " + std::string(e.detail()));
            }
        }
    }
};

Registry::Registry(std::unique_ptr<LogStorage> storage)
    : impl_(std::make_unique<Impl>(std::move(storage))) {}

Registry::~Registry() = default;

Round Registry::open_round(const SnapshotCommitments& commitments) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (!impl_->rounds.empty() && impl_->rounds.back().status != RoundStatus::Finalized)
        throw Error("PreviousRoundOpen",
                    "round " + std::to_string(impl_->rounds.back().round_id) +
                        " is not finalized");
    const std::uint64_t round_id = impl_->rounds.size() + 1;
    impl_->append_event("RoundOpened", round_id,
                        ordered_json{{"commitments", commitments_to_json(commitments)}});
    return impl_->rounds.back();
}

Round Registry::submit_liabilities(std::uint64_t round_id, const Digest32& liabilities_root,
                                   ByteView statement_bytes, const Attestation& attestation) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    Round& round = impl_->find(round_id);
    if (round.status != RoundStatus::Open)
        throw Error("WrongStatus", "round is " + to_string(round.status) + ", wants Open");
    if (attestation.relation != kLiabilityRelation)
        throw Error("AttestationInvalid", "relation must be liability-v1, got " +
                                              attestation.relation);
    const RelationVerdict verdict = verify_attestation(statement_bytes, attestation);
    if (!verdict.accepted)
        throw Error("AttestationInvalid", verdict.reason + ": " + verdict.detail);
    const LiabilityStatement st = parse_liability_statement(statement_bytes);
    if (st.root != liabilities_root)
        throw Error("AttestationInvalid", "statement commits to a different root");
    StoredAttestation stored{Bytes(statement_bytes.begin(), statement_bytes.end()), attestation};
    ordered_json payload;
    payload["liabilities_root_hex"] = to_hex(view(st.root));
    payload["sum_leaf_index"] = st.sum_leaf_index;
    payload["stored"] = stored_to_json(stored);
    impl_->append_event("LiabilitiesSubmitted", round_id, std::move(payload));
    return impl_->rounds[round_id - 1];
}

Round Registry::submit_reserve(std::uint64_t round_id, ByteView statement_bytes,
                               const Attestation& attestation) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    Round& round = impl_->find(round_id);
    if (round.status != RoundStatus::LiabilitiesSet)
        throw Error("WrongStatus",
                    "round is " + to_string(round.status) + ", wants LiabilitiesSet");
    if (!is_reserve_relation(attestation.relation))
        throw Error("AttestationInvalid", "not a reserve relation: " + attestation.relation);
    const RelationVerdict verdict = verify_attestation(statement_bytes, attestation);
    if (!verdict.accepted)
        throw Error("AttestationInvalid", verdict.reason + ": " + verdict.detail);
    if (attestation.relation == "btc-reserve-v1") {
        const BtcReserveStatement st = parse_btc_statement(statement_bytes);
        if (!round.commitments.btc_utxo_root || !round.commitments.btc_snapshot_block)
            throw Error("SnapshotMismatch", "round carries no btc snapshot commitment");
        if (st.utxo_root != *round.commitments.btc_utxo_root)
            throw Error("SnapshotMismatch", "utxo root differs from the round snapshot");
        if (st.snapshot_block != *round.commitments.btc_snapshot_block)
            throw Error("SnapshotMismatch", "snapshot block differs from the round snapshot");
    } else {
        const Digest32 block_hash =
            attestation.relation == "eth-reserve-v1"
                ? parse_eth_statement(statement_bytes).block_hash
                : parse_erc20_statement(statement_bytes).block_hash;
        if (!round.commitments.eth_block_hash)
            throw Error("SnapshotMismatch", "round carries no eth block commitment");
        if (block_hash != *round.commitments.eth_block_hash)
            throw Error("SnapshotMismatch", "block hash differs from the round snapshot");
    }
    StoredAttestation stored{Bytes(statement_bytes.begin(), statement_bytes.end()), attestation};
    for (const StoredAttestation& existing : round.reserve_attestations) {
        if (existing == stored)
            throw Error("AttestationInvalid", "DuplicateAttestation: already recorded");
    }
    impl_->append_event("ReserveSubmitted", round_id,
                        ordered_json{{"stored", stored_to_json(stored)}});
    return impl_->rounds[round_id - 1];
}

Round Registry::finalize_round(std::uint64_t round_id, ByteView statement_bytes,
                               const Attestation& attestation) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    Round& round = impl_->find(round_id);
    if (round.status != RoundStatus::LiabilitiesSet)
        throw Error("WrongStatus",
                    "round is " + to_string(round.status) + ", wants LiabilitiesSet");
    if (attestation.relation != kSolvencyRelation)
        throw Error("AttestationInvalid", "relation must be solvency-v1, got " +
                                              attestation.relation);
    const RelationVerdict verdict = verify_attestation(statement_bytes, attestation);
    if (!verdict.accepted)
        throw Error("AttestationInvalid", verdict.reason + ": " + verdict.detail);
    const SolvencyStatement st = parse_solvency_statement(statement_bytes);
    if (st.round_id != round.round_id)
        throw Error("BindingMismatch", "statement cites round " + std::to_string(st.round_id));
    if (st.liabilities_root != *round.liabilities_root)
        throw Error("BindingMismatch", "statement cites a different liabilities root");
    if (st.liabilities_sum_leaf_index != *round.sum_leaf_index)
        throw Error("BindingMismatch", "statement cites a different sum leaf index");
    if (st.eth_block_hash != round.commitments.eth_block_hash)
        throw Error("BindingMismatch", "statement eth block differs from the round snapshot");
    if (st.btc_utxo_root != round.commitments.btc_utxo_root)
        throw Error("BindingMismatch", "statement btc root differs from the round snapshot");
    if (st.btc_snapshot_block != round.commitments.btc_snapshot_block)
        throw Error("BindingMismatch", "statement btc block differs from the round snapshot");
    StoredAttestation stored{Bytes(statement_bytes.begin(), statement_bytes.end()), attestation};
    ordered_json payload;
    payload["accepted"] = verdict.accepted;
    payload["stored"] = stored_to_json(stored);
    impl_->append_event("Finalized", round_id, std::move(payload));
    return impl_->rounds[round_id - 1];
}

Round Registry::get_round(std::uint64_t round_id) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->find(round_id);
}

std::vector<Round> Registry::list_rounds() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->rounds;
}

bool Registry::audit() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto verifies = [](const StoredAttestation& stored) {
        return verify_attestation(view(stored.statement), stored.attestation).accepted;
    };
    for (const Round& round : impl_->rounds) {
        if (round.liability_attestation && !verifies(*round.liability_attestation)) return false;
        for (const StoredAttestation& stored : round.reserve_attestations)
            if (!verifies(stored)) return false;
        if (round.solvency_attestation && !verifies(*round.solvency_attestation)) return false;
    }
    return true;
}

namespace {

ordered_json round_to_json(const Round& round) {
    ordered_json j;
    j["round_id"] = round.round_id;
    j["status"] = to_string(round.status);
    if (round.status == RoundStatus::Finalized) j["accepted"] = round.finalized_accepted;
    j["commitments"] = commitments_to_json(round.commitments);
    if (round.liabilities_root) j["liabilities_root_hex"] = to_hex(view(*round.liabilities_root));
    if (round.sum_leaf_index) j["sum_leaf_index"] = *round.sum_leaf_index;
    j["reserve_attestations"] = round.reserve_attestations.size();
    j["has_solvency_attestation"] = round.solvency_attestation.has_value();
    return j;
}

int status_for(std::string_view code) {
    if (code == "UnknownRound") return 404;
    if (code == "ParseError") return 400;
    return 409;
}

void reply_error(httplib::Response& res, const Error& e) {
    res.status = status_for(e.code());
    res.set_content(
        ordered_json{{"error", std::string(e.code())}, {"detail", std::string(e.detail())}}.dump(),
        "application/json");
}

StoredAttestation stored_from_request(const std::string& body) {
    ordered_json j;
    try {
        j = ordered_json::parse(body);
        return stored_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
}

}  // namespace

struct RegistryServer::Impl {
    Registry& registry;
    httplib::Server server;
    std::thread thread;
    int bound_port = 0;

    Impl(Registry& reg, const std::string& host, int port) : registry(reg) {
        server.Post("/rounds/open", [this](const httplib::Request& req, httplib::Response& res) {
            handle(res, [&] {
                SnapshotCommitments commitments;
                if (!req.body.empty()) {
                    ordered_json j;
                    try {
                        j = ordered_json::parse(req.body);
                        commitments = commitments_from_json(j.value("commitments",
                                                                    ordered_json::object()));
                    } catch (const nlohmann::json::exception& e) {
                        throw Error("ParseError", e.what());
                    }
                }
                return registry.open_round(commitments);
            });
        });
        server.Post(R"(/rounds/(\d+)/liabilities)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        handle(res, [&] {
                            const StoredAttestation stored = stored_from_request(req.body);
                            const LiabilityStatement st =
                                parse_liability_statement(view(stored.statement));
                            return registry.submit_liabilities(round_id_of(req), st.root,
                                                               view(stored.statement),
                                                               stored.attestation);
                        });
                    });
        server.Post(R"(/rounds/(\d+)/reserves)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        handle(res, [&] {
                            const StoredAttestation stored = stored_from_request(req.body);
                            return registry.submit_reserve(round_id_of(req),
                                                           view(stored.statement),
                                                           stored.attestation);
                        });
                    });
        server.Post(R"(/rounds/(\d+)/finalize)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        handle(res, [&] {
                            const StoredAttestation stored = stored_from_request(req.body);
                            return registry.finalize_round(round_id_of(req),
                                                           view(stored.statement),
                                                           stored.attestation);
                        });
                    });
        server.Get(R"(/rounds/(\d+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       handle(res, [&] { return registry.get_round(round_id_of(req)); });
                   });
        server.Get("/rounds", [this](const httplib::Request&, httplib::Response& res) {
            try {
                ordered_json j = ordered_json::array();
                for (const Round& round : registry.list_rounds()) j.push_back(round_to_json(round));
                res.set_content(j.dump(), "application/json");
            } catch (const Error& e) {
                reply_error(res, e);
            }
        });

        if (port == 0) {
            bound_port = server.bind_to_any_port(host);
            if (bound_port <= 0) throw Error("IoError", "cannot bind registry server");
            thread = std::thread([this] { server.listen_after_bind(); });
        } else {
            bound_port = port;
            if (!server.bind_to_port(host, port))
                throw Error("IoError", "cannot bind registry server");
            thread = std::thread([this] { server.listen_after_bind(); });
        }
        server.wait_until_ready();
    }

    static std::uint64_t round_id_of(const httplib::Request& req) {
        return std::stoull(req.matches[1].str());
    }

    template <typename Op>
    void handle(httplib::Response& res, Op op) {
        try {
            res.set_content(round_to_json(op()).dump(), "application/json");
        } catch (const Error& e) {
            reply_error(res, e);
        }
    }

    void shutdown() {
        server.stop();
        if (thread.joinable()) thread.join();
    }

    ~Impl() { shutdown(); }
};

RegistryServer::RegistryServer(Registry& registry, const std::string& host, int port)
    : impl_(std::make_unique<Impl>(registry, host, port)) {}

RegistryServer::~RegistryServer() = default;

int RegistryServer::port() const { return impl_->bound_port; }

void RegistryServer::stop() { impl_->shutdown(); }

}  // namespace solvkit
