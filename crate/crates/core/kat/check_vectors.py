#!/usr/bin/env python3
"""Recompute every record of vectors.txt from its inputs with the Python
standard library and report any mismatch. Exit status 0 when all agree."""

import hashlib
import struct
import sys

M64 = (1 << 64) - 1


def splitmix(seed, i):
    z = (seed + (i + 1) * 0x9E3779B97F4A7C15) & M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def lut(seed):
    return [[100.0 + 900.0 * ((splitmix(seed, 8 * a + c) >> 11) / 2**53) for c in range(8)]
            for a in range(128)]


def lut_text(cells):
    lines = ["# keyless memristor image",
             "# rows = address 0..127, columns = current level 0..7, unit = ohm"]
    lines += [",".join(repr(v) for v in row) for row in cells]
    return ("\n".join(lines) + "\n").encode()


def norm(raw):
    return (raw[:32] + bytes(32))[:32]


def dbl(vals):
    return b"".join(struct.pack(">d", v) for v in vals)


def compute(idb, pw, rn, seed64, pt):
    out = {}
    x = bytes(a ^ b for a, b in zip(norm(idb), norm(pw)))
    seed = hashlib.sha256(x + rn).digest()
    v0 = (seed[0] << 8) | seed[1]
    lmd = b""
    for i in range(16):
        r = ((v0 << i) | (v0 >> (16 - i))) & 0xFFFF if i else v0
        lmd += hashlib.sha256(bytes([r >> 8, r & 0xFF]) + seed[2:]).digest()
    n = 2 * len(pt) + 1
    bits = "".join(f"{b:08b}" for b in lmd)
    sel = [(int(bits[17 * k:17 * k + 7], 2), int(bits[17 * k + 7:17 * k + 10], 2),
            int(bits[17 * k + 10:17 * k + 17], 2)) for k in range(n)]
    cells = lut(seed64)
    res = [cells[a][c] for a, c, _ in sel]
    nib = [q for b in pt for q in (b >> 4, b & 15)]
    transit = [res[0] * 2.5] + [r * (1 + 0.2 * q) for r, q in zip(res[1:], nib)]
    perm = sorted(range(n), key=lambda i: sel[i][2])  # stable
    final = [transit[i] for i in perm]
    out["lut_sha256"] = hashlib.sha256(lut_text(cells)).digest()
    out["nibbles"] = bytes(nib)
    out["seed_digest"] = seed
    out["long_digest"] = lmd
    out["selectors"] = bytes(v for s in sel for v in s)
    out["resistances"] = dbl(res)
    out["transit"] = dbl(transit)
    out["permutation"] = bytes(perm)
    out["final"] = dbl(final)
    out["frame"] = b"KEM1\x01" + rn + struct.pack(">H", n) + dbl(final)
    return out


def main(path):
    recs = {}
    for line in open(path, encoding="utf-8"):
        line = line.strip()
        if line and not line.startswith("#"):
            k, v = line.split("=", 1)
            recs[k.strip()] = bytes.fromhex(v.strip())
    names = sorted({k.split(".")[0] for k in recs})
    bad = 0
    for v in names:
        g = lambda f: recs[f"{v}.{f}"]
        want = compute(g("id"), g("pw"), g("rn"), int.from_bytes(g("seed64"), "big"), g("plaintext"))
        for field, value in want.items():
            ok = recs[f"{v}.{field}"] == value
            bad += not ok
            print(f"{'ok ' if ok else 'BAD'} {v}.{field}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "vectors.txt"))
