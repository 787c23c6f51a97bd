#!/usr/bin/env python3
"""Regenerate the binary golden vectors under testdata/.

Written against the documented record layout with struct and zlib only, so
the Rust encoder is checked against an implementation it shares no code with.
"""

import json
import struct
import zlib
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def encode(breaks, counts, sums=None, order=0, name=None):
    bins = len(counts)
    flags = (1 if order else 0) | (2 if name is not None else 0)
    out = b"HGT1" + struct.pack("<BBI", 1, flags, bins)
    out += struct.pack(f"<{bins + 1}d", *breaks)
    out += struct.pack(f"<{bins}Q", *counts)
    if order:
        out += struct.pack("<B", order) + struct.pack(f"<{order * bins}d", *sums)
    if name is not None:
        raw = name.encode("utf-8")
        out += struct.pack("<H", len(raw)) + raw
    return out + struct.pack("<I", zlib.crc32(out) & 0xFFFFFFFF)


def doc(breaks, counts, sums=None, order=0, name=None):
    d = {"breaks": breaks, "counts": counts, "moment_order": order, "moment_sums": sums or []}
    if name is not None:
        d["name"] = name
    return d


VECTORS = {
    "minimal": dict(breaks=[0.0, 1.0], counts=[0]),
    "unit_bins_1_2_3": dict(breaks=[float(i) for i in range(10)], counts=[1, 1, 1, 0, 0, 0, 0, 0, 0]),
    # samples 0.25, 0.75 | 1.5 on (0,1], (1,2]
    "moments_named": dict(
        breaks=[0.0, 1.0, 2.0], counts=[2, 1], order=2, sums=[1.0, 1.5, 0.625, 2.25], name="svc.read"
    ),
}

DTRACE_QUANTIZE = dict(
    breaks=[-1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
    counts=[0, 41, 12, 47, 15, 6, 3, 0],
    name="bash",
)


def main():
    manifest = {}
    for key, v in VECTORS.items():
        (ROOT / "testdata/wire" / f"{key}.hgt").write_bytes(encode(**v))
        manifest[key] = doc(**v)
    (ROOT / "testdata/wire/vectors.json").write_text(json.dumps(manifest, indent=1) + "\n")

    (ROOT / "testdata/dtrace/quantize.expected.hgt").write_bytes(encode(**DTRACE_QUANTIZE))
    (ROOT / "testdata/dtrace/quantize.expected.json").write_text(json.dumps(doc(**DTRACE_QUANTIZE)) + "\n")


if __name__ == "__main__":
    main()
