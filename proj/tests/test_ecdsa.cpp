// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <string>

#include "solvkit/bytes.hpp"
#include "solvkit/ecdsa.hpp"
#include "solvkit/hash.hpp"
#include "testenv.hpp"

using namespace solvkit;
using testsupport::Rng;

namespace {

nlohmann::json load_vectors() {
  return nlohmann::json::parse(testsupport::read_file(
      testsupport::fixture_dir() / "ecdsa" / "vectors.json"));
}

}  // namespace

TEST_CASE("signing matches the pinned deterministic vectors") {
  auto vectors = load_vectors();
  REQUIRE(vectors.size() >= 8);
  for (const auto& vec : vectors) {
    Digest32 secret = digest_from_hex(vec["secret_hex"].get<std::string>());
    Digest32 digest = digest_from_hex(vec["digest_hex"].get<std::string>());
    ecdsa::RecoverableSig sig = ecdsa::sign_recoverable(secret, digest);
    CHECK(to_hex(ByteView(sig.rs.data(), 32)) ==
          vec["r_hex"].get<std::string>().substr(2));
    CHECK(to_hex(ByteView(sig.rs.data() + 32, 32)) ==
          vec["s_hex"].get<std::string>().substr(2));
    CHECK(sig.recid == vec["recid"].get<int>());

    auto pub = ecdsa::recover_pubkey(sig, digest);
    REQUIRE(pub.has_value());
    CHECK(to_hex_prefixed(view(*pub)) ==
          vec["pub_uncompressed_hex"].get<std::string>());
    CHECK(to_hex_prefixed(view(ecdsa::compress_pubkey(*pub))) ==
          vec["pub_compressed_hex"].get<std::string>());
    CHECK(to_hex_prefixed(view(ecdsa::eth_address_of(*pub))) ==
          vec["eth_address_hex"].get<std::string>());
    CHECK(to_hex_prefixed(view(ecdsa::p2pkh_script_of(
              ecdsa::compress_pubkey(*pub)))) ==
          vec["p2pkh_script_hex"].get<std::string>());

    CHECK(ecdsa::derive_pubkey(secret) == *pub);
  }
}

TEST_CASE("recovery fails closed on tampered signatures") {
  auto vectors = load_vectors();
  const auto& vec = vectors[0];
  Digest32 secret = digest_from_hex(vec["secret_hex"].get<std::string>());
  Digest32 digest = digest_from_hex(vec["digest_hex"].get<std::string>());
  ecdsa::RecoverableSig sig = ecdsa::sign_recoverable(secret, digest);
  auto honest = ecdsa::recover_pubkey(sig, digest);
  REQUIRE(honest.has_value());

  // Wrong digest recovers a different key, never the honest one.
  Digest32 other_digest = digest;
  other_digest[31] ^= 0x01;
  auto from_other = ecdsa::recover_pubkey(sig, other_digest);
  if (from_other.has_value()) {
    CHECK(*from_other != *honest);
  }

  // Flipped recid points at the mirrored candidate.
  ecdsa::RecoverableSig flipped = sig;
  flipped.recid ^= 1;
  auto mirrored = ecdsa::recover_pubkey(flipped, digest);
  if (mirrored.has_value()) {
    CHECK(*mirrored != *honest);
  }

  // r or s of zero is invalid by construction.
  ecdsa::RecoverableSig zeroed = sig;
  std::fill(zeroed.rs.begin(), zeroed.rs.begin() + 32, 0);
  CHECK_FALSE(ecdsa::recover_pubkey(zeroed, digest).has_value());

  ecdsa::RecoverableSig bad_recid = sig;
  bad_recid.recid = 9;
  CHECK_FALSE(ecdsa::recover_pubkey(bad_recid, digest).has_value());
}

TEST_CASE("signatures are low-s and roundtrip for random keys") {
  Rng rng(0x45435301);
  const Bytes half_order = from_hex(
      "7fffffffffffffffffffffffffffffff5d576e7357a4501ddfe92f46681b20a0");
  for (int i = 0; i < 40; ++i) {
    Digest32 secret = rng.digest();
    secret[0] &= 0x7f;  // keep below the order
    if (std::all_of(secret.begin(), secret.end(),
                    [](std::uint8_t b) { return b == 0; })) {
      continue;
    }
    Digest32 digest = rng.digest();
    ecdsa::RecoverableSig sig = ecdsa::sign_recoverable(secret, digest);

    Bytes s_bytes(sig.rs.begin() + 32, sig.rs.end());
    CHECK(s_bytes <= half_order);

    auto pub = ecdsa::recover_pubkey(sig, digest);
    REQUIRE(pub.has_value());
    CHECK(*pub == ecdsa::derive_pubkey(secret));
  }
}

TEST_CASE("invalid secrets are refused") {
  Digest32 zero{};
  Digest32 digest = keccak256(view(std::string_view("digest")));
  CHECK_THROWS_AS(ecdsa::sign_recoverable(zero, digest), Error);
  CHECK_THROWS_AS(ecdsa::derive_pubkey(zero), Error);

  // The group order itself is out of range.
  Digest32 order = digest_from_hex(
      "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
  CHECK_THROWS_AS(ecdsa::sign_recoverable(order, digest), Error);
}
