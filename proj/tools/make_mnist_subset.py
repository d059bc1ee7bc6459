#!/usr/bin/env python3
"""Build the bundled 5,000-image MNIST subset as gzipped IDX files.

The source is the ``mnist_5k.csv.gz`` table shipped inside the mlxtend wheel
(500 images per digit, 784 pixel columns followed by the label). The rows are
sorted by label there, so a fixed permutation (numpy seed 0) interleaves the
classes before writing.

    python3 tools/make_mnist_subset.py [--wheel mlxtend-*.whl] [--outdir data]
"""

import argparse
import glob
import gzip
import io
import os
import struct
import subprocess
import tempfile
import zipfile

import numpy as np

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def load_csv(wheel):
    if wheel is None:
        tmp = tempfile.mkdtemp()
        subprocess.check_call(
            ["pip", "download", "--no-deps", "-q", "-d", tmp, "mlxtend"])
        wheel = glob.glob(os.path.join(tmp, "mlxtend-*.whl"))[0]
    with zipfile.ZipFile(wheel) as z:
        raw = gzip.decompress(z.read(MEMBER))
    return np.loadtxt(io.BytesIO(raw), delimiter=",")


def write_idx(path, magic, array):
    header = struct.pack(">I", magic) + b"".join(
        struct.pack(">I", d) for d in array.shape)
    with gzip.GzipFile(path, "wb", mtime=0) as f:
        f.write(header + array.astype(np.uint8).tobytes())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wheel")
    ap.add_argument("--outdir", default="data")
    args = ap.parse_args()

    table = load_csv(args.wheel)
    perm = np.random.default_rng(0).permutation(len(table))
    table = table[perm]
    images = table[:, :784].reshape(-1, 28, 28)
    labels = table[:, 784]

    os.makedirs(args.outdir, exist_ok=True)
    write_idx(os.path.join(args.outdir, "mnist5k-images-idx3-ubyte.gz"),
              0x00000803, images)
    write_idx(os.path.join(args.outdir, "mnist5k-labels-idx1-ubyte.gz"),
              0x00000801, labels)
    print("wrote %d images to %s" % (len(labels), args.outdir))


if __name__ == "__main__":
    main()
