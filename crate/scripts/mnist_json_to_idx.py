#!/usr/bin/env python3
"""Convert the per-digit JSON files of the npm `mnist` package to gzipped IDX.

Each input file `<digit>.json` holds {"data": [...]} with 784 floats per
image, stored as pixel/255 rounded to three decimals. Rounding back through
255 recovers the original bytes.

usage: mnist_json_to_idx.py <digits-dir> <out-dir> [seed]
"""
import gzip
import json
import random
import struct
import sys
from pathlib import Path


def main():
    src, out = Path(sys.argv[1]), Path(sys.argv[2])
    seed = int(sys.argv[3]) if len(sys.argv) > 3 else 0
    samples = []
    for digit in range(10):
        flat = json.loads((src / f"{digit}.json").read_text())["data"]
        for k in range(0, len(flat), 784):
            pixels = bytes(round(v * 255) for v in flat[k:k + 784])
            samples.append((pixels, digit))
    random.Random(seed).shuffle(samples)
    out.mkdir(parents=True, exist_ok=True)
    n = len(samples)
    with gzip.open(out / "train-images-idx3-ubyte.gz", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, n, 28, 28))
        for pixels, _ in samples:
            f.write(pixels)
    with gzip.open(out / "train-labels-idx1-ubyte.gz", "wb") as f:
        f.write(struct.pack(">II", 0x801, n))
        f.write(bytes(d for _, d in samples))
    print(f"wrote {n} samples to {out}")


if __name__ == "__main__":
    main()
