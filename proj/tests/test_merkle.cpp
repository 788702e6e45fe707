// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "solvkit/bytes.hpp"
#include "solvkit/hash.hpp"
#include "solvkit/merkle.hpp"
#include "testenv.hpp"

using namespace solvkit;
using testsupport::Rng;

namespace {

std::vector<Bytes> make_leaves(Rng& rng, std::size_t count) {
  std::vector<Bytes> leaves;
  leaves.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    leaves.push_back(rng.bytes(1 + rng.below(96)));
  }
  return leaves;
}

}  // namespace

TEST_CASE("single leaf tree root is the leaf digest") {
  Bytes leaf = from_hex("deadbeef");
  MerkleTree tree = MerkleTree::build({leaf});
  CHECK(tree.root() == MerkleTree::leaf_digest(view(leaf)));
  CHECK(tree.real_leaf_count() == 1);
  CHECK(tree.depth() == 0);

  MerklePath path = tree.prove(0);
  CHECK(path.leaf_index == 0);
  CHECK(path.siblings.empty());
  CHECK(MerkleTree::verify(tree.root(), view(leaf), path));
}

TEST_CASE("two leaf tree combines with the internal prefix") {
  Bytes a = from_hex("01");
  Bytes b = from_hex("02");
  MerkleTree tree = MerkleTree::build({a, b});
  Digest32 la = MerkleTree::leaf_digest(view(a));
  Digest32 lb = MerkleTree::leaf_digest(view(b));
  CHECK(tree.root() == MerkleTree::internal_digest(la, lb));

  MerklePath pa = tree.prove(0);
  REQUIRE(pa.siblings.size() == 1);
  CHECK(pa.siblings[0] == lb);
  MerklePath pb = tree.prove(1);
  REQUIRE(pb.siblings.size() == 1);
  CHECK(pb.siblings[0] == la);
  CHECK(MerkleTree::verify(tree.root(), view(a), pa));
  CHECK(MerkleTree::verify(tree.root(), view(b), pb));
  CHECK_FALSE(MerkleTree::verify(tree.root(), view(a), pb));
}

TEST_CASE("odd width pads with the empty leaf digest") {
  Bytes a = from_hex("aa");
  Bytes b = from_hex("bb");
  Bytes c = from_hex("cc");
  MerkleTree tree = MerkleTree::build({a, b, c});
  Digest32 empty = MerkleTree::leaf_digest(ByteView{});
  Digest32 expected = MerkleTree::internal_digest(
      MerkleTree::internal_digest(MerkleTree::leaf_digest(view(a)),
                                  MerkleTree::leaf_digest(view(b))),
      MerkleTree::internal_digest(MerkleTree::leaf_digest(view(c)), empty));
  CHECK(tree.root() == expected);

  // The proof for the last real leaf names the padding digest as sibling.
  MerklePath pc = tree.prove(2);
  REQUIRE(pc.siblings.size() == 2);
  CHECK(pc.siblings[0] == empty);
  CHECK(MerkleTree::verify(tree.root(), view(c), pc));

  // Padding slots are provable as empty leaves.
  MerklePath pad = tree.prove(3);
  CHECK(MerkleTree::verify(tree.root(), ByteView{}, pad));
  CHECK_THROWS_AS(tree.prove(4), Error);
}

TEST_CASE("build rejects empty input") {
  CHECK_THROWS_AS(MerkleTree::build({}), Error);
}

TEST_CASE("leaf and internal digests are domain separated") {
  Bytes a = from_hex("0a0b");
  Bytes b = from_hex("0c0d");
  Digest32 la = MerkleTree::leaf_digest(view(a));
  Digest32 lb = MerkleTree::leaf_digest(view(b));
  Digest32 root = MerkleTree::internal_digest(la, lb);

  // A "leaf" whose bytes are the two child digests concatenated hashes
  // under the 0x00 prefix and must not equal the internal node.
  Bytes as_leaf;
  append(as_leaf, view(la));
  append(as_leaf, view(lb));
  MerklePath direct{0, {}};
  CHECK_FALSE(MerkleTree::verify(root, view(as_leaf), direct));

  // Same preimage under the 0x01 prefix does reproduce the node, which
  // pins the separation to the prefix byte alone.
  Bytes internal_preimage;
  append_u8(internal_preimage, 0x01);
  append(internal_preimage, view(as_leaf));
  CHECK(keccak256(view(internal_preimage)) == root);
}

TEST_CASE("root is sensitive to leaf order and content") {
  Rng rng(0x4d524b01);
  std::vector<Bytes> leaves = make_leaves(rng, 8);
  MerkleTree tree = MerkleTree::build(leaves);

  std::vector<Bytes> swapped = leaves;
  std::swap(swapped[2], swapped[5]);
  CHECK(MerkleTree::build(swapped).root() != tree.root());

  std::vector<Bytes> edited = leaves;
  edited[4][0] ^= 0x80;
  CHECK(MerkleTree::build(edited).root() != tree.root());
}

TEST_CASE("proofs roundtrip across sizes") {
  Rng rng(0x4d524b02);
  for (std::size_t count :
       {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 33u, 63u, 64u,
        100u, 255u, 256u, 257u, 511u, 777u, 1000u, 2048u}) {
    std::vector<Bytes> leaves = make_leaves(rng, count);
    MerkleTree tree = MerkleTree::build(leaves);
    // Depth is the padded height.
    std::size_t probe_budget = count <= 64 ? count : 24;
    for (std::size_t p = 0; p < probe_budget; ++p) {
      std::size_t i = count <= 64 ? p : rng.below(count);
      MerklePath path = tree.prove(i);
      CHECK(path.leaf_index == i);
      REQUIRE(MerkleTree::verify(tree.root(), view(leaves[i]), path));
    }
  }
}

TEST_CASE("every proof of a 1024 leaf tree verifies") {
  Rng rng(0x4d524b03);
  std::vector<Bytes> leaves = make_leaves(rng, 1024);
  MerkleTree tree = MerkleTree::build(leaves);
  for (std::size_t i = 0; i < 1024; ++i) {
    MerklePath path = tree.prove(i);
    REQUIRE(path.siblings.size() == 10);
    REQUIRE(MerkleTree::verify(tree.root(), view(leaves[i]), path));
  }
}

TEST_CASE("tampered proofs fail verification") {
  Rng rng(0x4d524b04);
  int rejected = 0;
  int trials = 0;
  for (int round = 0; round < 40; ++round) {
    std::size_t count = 2 + rng.below(40);
    std::vector<Bytes> leaves = make_leaves(rng, count);
    MerkleTree tree = MerkleTree::build(leaves);
    std::size_t i = rng.below(count);
    MerklePath good = tree.prove(i);
    REQUIRE(MerkleTree::verify(tree.root(), view(leaves[i]), good));

    for (int m = 0; m < 6; ++m, ++trials) {
      MerklePath bad = good;
      Bytes leaf = leaves[i];
      Digest32 root = tree.root();
      switch (m) {
        case 0:
          bad.siblings[rng.below(bad.siblings.size())]
              [rng.below(32)] ^= static_cast<std::uint8_t>(1 + rng.below(255));
          break;
        case 1:
          leaf[rng.below(leaf.size())] ^=
              static_cast<std::uint8_t>(1 + rng.below(255));
          break;
        case 2:
          bad.leaf_index ^= 1u << rng.below(bad.siblings.size());
          if (bad.leaf_index == i) continue;
          break;
        case 3:
          bad.siblings.push_back(MerkleTree::leaf_digest(ByteView{}));
          break;
        case 4:
          bad.siblings.pop_back();
          break;
        case 5:
          root[rng.below(32)] ^= static_cast<std::uint8_t>(1 + rng.below(255));
          break;
      }
      bool same_leaf_digest =
          m == 1 && MerkleTree::leaf_digest(view(leaf)) ==
                        MerkleTree::leaf_digest(view(leaves[i]));
      REQUIRE_FALSE(same_leaf_digest);
      if (MerkleTree::verify(root, view(leaf), bad)) {
        FAIL("mutation accepted: round ", round, " kind ", m);
      }
      ++rejected;
    }
  }
  CHECK(rejected >= 200);
  CHECK(rejected == trials);
}

TEST_CASE("verify rejects out of range indexes and oversized paths") {
  Bytes a = from_hex("11");
  Bytes b = from_hex("22");
  MerkleTree tree = MerkleTree::build({a, b});
  MerklePath path = tree.prove(0);

  MerklePath far = path;
  far.leaf_index = 2;  // beyond a depth-1 tree
  CHECK_FALSE(MerkleTree::verify(tree.root(), view(a), far));

  MerklePath deep = path;
  deep.siblings.assign(64, Digest32{});
  CHECK_FALSE(MerkleTree::verify(tree.root(), view(a), deep));
}

TEST_CASE("paths roundtrip through json") {
  Rng rng(0x4d524b05);
  std::vector<Bytes> leaves = make_leaves(rng, 13);
  MerkleTree tree = MerkleTree::build(leaves);
  MerklePath path = tree.prove(9);

  std::string text = merkle_path_to_json(path);
  MerklePath back = merkle_path_from_json(text);
  CHECK(back.leaf_index == path.leaf_index);
  CHECK(back.siblings == path.siblings);
  CHECK(MerkleTree::verify(tree.root(), view(leaves[9]), back));

  CHECK_THROWS_AS(merkle_path_from_json("{"), Error);
  CHECK_THROWS_AS(merkle_path_from_json("{\"leaf_index\":0}"), Error);
  CHECK_THROWS_AS(
      merkle_path_from_json("{\"leaf_index\":0,\"siblings\":[\"0x12\"]}"),
      Error);
}
