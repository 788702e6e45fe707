// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "solvkit/ecdsa.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>

#include <cstring>
#include <memory>

#include "solvkit/hash.hpp"

namespace solvkit {
namespace ecdsa {

namespace {

struct BnDeleter {
    void operator()(BIGNUM* p) const { BN_free(p); }
};
struct BnCtxDeleter {
    void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct GroupDeleter {
    void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};
struct PointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};

using Bn = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtx = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using Group = std::unique_ptr<EC_GROUP, GroupDeleter>;
using Point = std::unique_ptr<EC_POINT, PointDeleter>;

[[noreturn]] void fail(const char* what) { throw Error("CryptoFailure", what); }

const EC_GROUP* curve() {
    static Group group(EC_GROUP_new_by_curve_name(NID_secp256k1));
    if (!group) fail("secp256k1 group unavailable");
    return group.get();
}

Bn bn_from(ByteView data) {
    Bn out(BN_bin2bn(data.data(), static_cast<int>(data.size()), nullptr));
    if (!out) fail("BN_bin2bn");
    return out;
}

Digest32 bn_to_32(const BIGNUM* value) {
    Digest32 out{};
    if (BN_bn2binpad(value, out.data(), 32) != 32) fail("BN_bn2binpad");
    return out;
}

const BIGNUM* group_order() {
    static Bn order = [] {
        BnCtx ctx(BN_CTX_new());
        Bn n(BN_new());
        if (!ctx || !n || EC_GROUP_get_order(curve(), n.get(), ctx.get()) != 1) {
            fail("EC_GROUP_get_order");
        }
        return n;
    }();
    return order.get();
}

// HMAC-SHA256 keyed drbg from RFC 6979, section 3.2, for SHA-256.
class Rfc6979 {
  public:
    Rfc6979(const Digest32& secret, const Digest32& digest_mod_n) {
        std::memset(v_, 0x01, sizeof v_);
        std::memset(k_, 0x00, sizeof k_);
        update(0x00, secret, digest_mod_n);
        update(0x01, secret, digest_mod_n);
    }

    Digest32 next() {
        step(v_, sizeof v_);
        Digest32 out;
        std::memcpy(out.data(), v_, 32);
        return out;
    }

    void bump() {
        // candidate rejected: K = HMAC(K, V || 0x00); V = HMAC(K, V)
        std::uint8_t zero = 0x00;
        hmac2(v_, sizeof v_, &zero, 1);
        step(v_, sizeof v_);
    }

  private:
    void update(std::uint8_t tag, const Digest32& secret, const Digest32& digest) {
        std::uint8_t material[1 + 32 + 32];
        material[0] = tag;
        std::memcpy(material + 1, secret.data(), 32);
        std::memcpy(material + 33, digest.data(), 32);
        hmac2(v_, sizeof v_, material, sizeof material);
        step(v_, sizeof v_);
    }

    // K = HMAC-SHA256(K, a || b)
    void hmac2(const std::uint8_t* a, std::size_t alen, const std::uint8_t* b,
               std::size_t blen) {
        std::uint8_t buf[128];
        std::memcpy(buf, a, alen);
        if (blen > 0) std::memcpy(buf + alen, b, blen);
        unsigned int out_len = 0;
        if (!HMAC(EVP_sha256(), k_, sizeof k_, buf, alen + blen, k_, &out_len) ||
            out_len != 32) {
            fail("HMAC");
        }
    }

    // V = HMAC-SHA256(K, V)
    void step(std::uint8_t* v, std::size_t vlen) {
        std::uint8_t in[32];
        std::memcpy(in, v, vlen);
        unsigned int out_len = 0;
        if (!HMAC(EVP_sha256(), k_, 32, in, vlen, v, &out_len) || out_len != 32) {
            fail("HMAC");
        }
    }

    std::uint8_t v_[32];
    std::uint8_t k_[32];
};

Point point_mul_g(const BIGNUM* scalar) {
    BnCtx ctx(BN_CTX_new());
    Point p(EC_POINT_new(curve()));
    if (!ctx || !p ||
        EC_POINT_mul(curve(), p.get(), scalar, nullptr, nullptr, ctx.get()) != 1) {
        fail("EC_POINT_mul");
    }
    return p;
}

PubKeyUncompressed encode_uncompressed(const EC_POINT* p) {
    BnCtx ctx(BN_CTX_new());
    PubKeyUncompressed out{};
    std::size_t len = EC_POINT_point2oct(curve(), p, POINT_CONVERSION_UNCOMPRESSED,
                                         out.data(), out.size(), ctx.get());
    if (len != out.size()) fail("EC_POINT_point2oct");
    return out;
}

}  // namespace

RecoverableSig sign_recoverable(const Digest32& secret, const Digest32& digest) {
    Bn d = bn_from(view(secret));
    const BIGNUM* n = group_order();
    if (BN_is_zero(d.get()) || BN_cmp(d.get(), n) >= 0) {
        throw Error("InvalidKey", "secret outside [1, n-1]");
    }

    BnCtx ctx(BN_CTX_new());
    Bn e = bn_from(view(digest));
    // For a 256-bit curve and digest, bits2octets reduces mod n.
    Bn e_mod(BN_new());
    if (!ctx || !e_mod || !BN_mod(e_mod.get(), e.get(), n, ctx.get())) fail("BN_mod");

    Rfc6979 drbg(secret, bn_to_32(e_mod.get()));
    for (;;) {
        Digest32 k_bytes = drbg.next();
        Bn k = bn_from(view(k_bytes));
        if (BN_is_zero(k.get()) || BN_cmp(k.get(), n) >= 0) {
            drbg.bump();
            continue;
        }

        Point r_point = point_mul_g(k.get());
        Bn x(BN_new());
        Bn y(BN_new());
        if (!x || !y ||
            EC_POINT_get_affine_coordinates(curve(), r_point.get(), x.get(), y.get(),
                                            ctx.get()) != 1) {
            fail("EC_POINT_get_affine_coordinates");
        }

        Bn r(BN_new());
        if (!r || !BN_nnmod(r.get(), x.get(), n, ctx.get())) fail("BN_nnmod");
        if (BN_is_zero(r.get())) {
            drbg.bump();
            continue;
        }

        // s = k^-1 (e + r d) mod n
        Bn k_inv(BN_mod_inverse(nullptr, k.get(), n, ctx.get()));
        Bn rd(BN_new());
        Bn s(BN_new());
        if (!k_inv || !rd || !s ||
            !BN_mod_mul(rd.get(), r.get(), d.get(), n, ctx.get()) ||
            !BN_mod_add(s.get(), rd.get(), e_mod.get(), n, ctx.get()) ||
            !BN_mod_mul(s.get(), s.get(), k_inv.get(), n, ctx.get())) {
            fail("BN_mod arithmetic");
        }
        if (BN_is_zero(s.get())) {
            drbg.bump();
            continue;
        }

        // recid bit 0: parity of R.y; bit 1: x overflowed past n (cosmically rare).
        std::uint8_t recid = static_cast<std::uint8_t>(BN_is_odd(y.get()) ? 1 : 0);
        if (BN_cmp(x.get(), n) >= 0) recid |= 2;

        // Canonical low-s: negating s mirrors R.y.
        Bn half(BN_dup(n));
        if (!half || !BN_rshift1(half.get(), half.get())) fail("BN_rshift1");
        if (BN_cmp(s.get(), half.get()) > 0) {
            if (!BN_sub(s.get(), n, s.get())) fail("BN_sub");
            recid ^= 1;
        }

        RecoverableSig sig;
        Digest32 r32 = bn_to_32(r.get());
        Digest32 s32 = bn_to_32(s.get());
        std::memcpy(sig.rs.data(), r32.data(), 32);
        std::memcpy(sig.rs.data() + 32, s32.data(), 32);
        sig.recid = recid;
        return sig;
    }
}

std::optional<PubKeyUncompressed> recover_pubkey(const RecoverableSig& sig,
                                                 const Digest32& digest) {
    if (sig.recid > 3) return std::nullopt;
    BnCtx ctx(BN_CTX_new());
    if (!ctx) fail("BN_CTX_new");
    const BIGNUM* n = group_order();

    Bn r = bn_from(ByteView(sig.rs.data(), 32));
    Bn s = bn_from(ByteView(sig.rs.data() + 32, 32));
    if (BN_is_zero(r.get()) || BN_cmp(r.get(), n) >= 0) return std::nullopt;
    if (BN_is_zero(s.get()) || BN_cmp(s.get(), n) >= 0) return std::nullopt;

    // x = r (+ n when recid signals overflow); must stay below the field prime.
    Bn p(BN_new());
    Bn a(BN_new());
    Bn b(BN_new());
    if (!p || !a || !b ||
        EC_GROUP_get_curve(curve(), p.get(), a.get(), b.get(), ctx.get()) != 1) {
        fail("EC_GROUP_get_curve");
    }
    Bn x(BN_dup(r.get()));
    if (!x) fail("BN_dup");
    if (sig.recid & 2) {
        if (!BN_add(x.get(), x.get(), n)) fail("BN_add");
    }
    if (BN_cmp(x.get(), p.get()) >= 0) return std::nullopt;

    Point r_point(EC_POINT_new(curve()));
    if (!r_point) fail("EC_POINT_new");
    if (EC_POINT_set_compressed_coordinates(curve(), r_point.get(), x.get(),
                                            sig.recid & 1, ctx.get()) != 1) {
        return std::nullopt;  // x is not on the curve
    }

    // Q = r^-1 (s R - e G)
    Bn e = bn_from(view(digest));
    Bn e_mod(BN_new());
    Bn r_inv(BN_mod_inverse(nullptr, r.get(), n, ctx.get()));
    Bn neg_e(BN_new());
    Bn u1(BN_new());
    Bn u2(BN_new());
    if (!e_mod || !r_inv || !neg_e || !u1 || !u2 ||
        !BN_mod(e_mod.get(), e.get(), n, ctx.get()) ||
        !BN_mod_sub(neg_e.get(), n, e_mod.get(), n, ctx.get()) ||
        !BN_mod_mul(u1.get(), neg_e.get(), r_inv.get(), n, ctx.get()) ||
        !BN_mod_mul(u2.get(), s.get(), r_inv.get(), n, ctx.get())) {
        fail("recover arithmetic");
    }
    Point q(EC_POINT_new(curve()));
    if (!q ||
        EC_POINT_mul(curve(), q.get(), u1.get(), r_point.get(), u2.get(),
                     ctx.get()) != 1) {
        fail("EC_POINT_mul");
    }
    if (EC_POINT_is_at_infinity(curve(), q.get())) return std::nullopt;
    return encode_uncompressed(q.get());
}

PubKeyUncompressed derive_pubkey(const Digest32& secret) {
    Bn d = bn_from(view(secret));
    if (BN_is_zero(d.get()) || BN_cmp(d.get(), group_order()) >= 0) {
        throw Error("InvalidKey", "secret outside [1, n-1]");
    }
    Point p = point_mul_g(d.get());
    return encode_uncompressed(p.get());
}

PubKeyCompressed compress_pubkey(const PubKeyUncompressed& pub) {
    PubKeyCompressed out{};
    out[0] = (pub[64] & 1) ? 0x03 : 0x02;
    std::memcpy(out.data() + 1, pub.data() + 1, 32);
    return out;
}

Address eth_address_of(const PubKeyUncompressed& pub) {
    Digest32 h = keccak256(ByteView(pub.data() + 1, 64));
    Address out{};
    std::memcpy(out.data(), h.data() + 12, 20);
    return out;
}

Bytes p2pkh_script_of(const PubKeyCompressed& pub) {
    auto h = hash160(view(pub));
    Bytes script;
    script.reserve(25);
    append_u8(script, 0x76);  // OP_DUP
    append_u8(script, 0xa9);  // OP_HASH160
    append_u8(script, 0x14);  // push 20
    append(script, view(h));
    append_u8(script, 0x88);  // OP_EQUALVERIFY
    append_u8(script, 0xac);  // OP_CHECKSIG
    return script;
}

}  // namespace ecdsa
}  // namespace solvkit
