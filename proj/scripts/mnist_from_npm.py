#!/usr/bin/env python3
"""Rebuild MNIST IDX files from the digits bundled in the `mnist` npm package.

The package ships 10,000 MNIST digits as JSON arrays of intensities divided by
255 and rounded to three decimals; rounding back to 8-bit recovers the original
bytes exactly. Records are interleaved by class (0,1,...,9,0,1,...) so any
prefix of the output is class-balanced.

    npm pack mnist && tar xzf mnist-*.tgz
    python3 scripts/mnist_from_npm.py package/ tests/data --limit 1000 --prefix mnist-1k
"""
import argparse
import json
import pathlib
import struct


def load_digits(package_dir):
    digits = []
    for label in range(10):
        path = pathlib.Path(package_dir) / "src" / "digits" / f"{label}.json"
        data = json.loads(path.read_text())["data"]
        count = len(data) // 784
        images = []
        for i in range(count):
            pixels = data[i * 784:(i + 1) * 784]
            images.append(bytes(max(0, min(255, round(v * 255))) for v in pixels))
        digits.append(images)
    return digits


def interleave(digits, limit):
    out = []
    cursor = [0] * 10
    while len(out) < limit:
        progressed = False
        for label in range(10):
            if len(out) >= limit:
                break
            if cursor[label] < len(digits[label]):
                out.append((digits[label][cursor[label]], label))
                cursor[label] += 1
                progressed = True
        if not progressed:
            break
    return out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("package_dir")
    parser.add_argument("out_dir")
    parser.add_argument("--limit", type=int, default=10000)
    parser.add_argument("--prefix", default="mnist")
    args = parser.parse_args()

    records = interleave(load_digits(args.package_dir), args.limit)
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"{args.prefix}-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(records), 28, 28))
        for image, _ in records:
            f.write(image)
    with open(out / f"{args.prefix}-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(records)))
        f.write(bytes(label for _, label in records))
    print(f"wrote {len(records)} records to {out}")


if __name__ == "__main__":
    main()
