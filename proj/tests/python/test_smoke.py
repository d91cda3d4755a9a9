"""Smoke tests for the Python extension and the GRIG container contract."""

import os
import struct
import zlib
from pathlib import Path

import numpy as np
import pytest

import grig

DATA_DIR = Path(os.environ.get("GRIG_TEST_DATA_DIR", Path(__file__).resolve().parents[1] / "data"))


def load_digits(count):
    raw = (DATA_DIR / "mnist-1k-images-idx3-ubyte").read_bytes()
    labels = (DATA_DIR / "mnist-1k-labels-idx1-ubyte").read_bytes()
    magic, n, rows, cols = struct.unpack(">IIII", raw[:16])
    assert magic == 0x803 and n >= count
    images = np.frombuffer(raw, dtype=np.uint8, count=count * rows * cols, offset=16)
    return images.reshape(count, rows, cols), np.frombuffer(labels, dtype=np.uint8, count=count, offset=8)


def parse_grig(blob):
    """Stand-alone reader mirroring what a training pipeline would implement."""
    body, (crc,) = blob[:-4], struct.unpack("<I", blob[-4:])
    assert zlib.crc32(body) == crc
    magic, version, fdim, classes, reserved, count = struct.unpack("<4sHHHHI", body[:16])
    assert (magic, version, reserved) == (b"GRIG", 1, 0)
    pos, graphs = 16, []
    for _ in range(count):
        label, nodes, edges = struct.unpack("<HII", body[pos : pos + 10])
        pos += 10
        feats = np.frombuffer(body, dtype="<f4", count=nodes * fdim, offset=pos).reshape(nodes, fdim)
        pos += 4 * nodes * fdim
        pairs = np.frombuffer(body, dtype="<u4", count=2 * edges, offset=pos).reshape(edges, 2)
        pos += 8 * edges
        graphs.append((label, feats, pairs))
    assert pos == len(body)
    return fdim, classes, graphs


def test_defaults_and_validation():
    p = grig.SearchParams()
    assert (p.p_thr, p.thr1, p.var_thr, p.growth, p.sigma) == (0.85, 10.0, 400.0, 1.005, 1.0)
    with pytest.raises(grig.InvalidArgumentError):
        grig.SearchParams(p_thr=0.0)
    assert issubclass(grig.ChecksumError, grig.FormatError)
    assert issubclass(grig.FormatError, grig.Error)


def test_filters_on_arrays():
    img = np.zeros((6, 6), dtype=np.uint8)
    img[:, 3:] = 255
    smooth = grig.gaussian_smooth(np.full((4, 5), 9, dtype=np.uint8))
    assert smooth.shape == (4, 5)
    assert np.allclose(smooth, 9.0)
    grad = grig.gradient_magnitude(img, 1.0)
    assert grad.shape == (6, 6)
    assert grad[:, 2:4].min() > grad[:, [0, 5]].max()


def test_partition_covers_and_verifies():
    images, _ = load_digits(3)
    for img in images:
        rects = grig.partition(img)
        cover = np.zeros_like(img, dtype=int)
        for r in rects:
            cover[r.cy - r.ry : r.cy + r.ry + 1, r.cx - r.rx : r.cx + r.rx + 1] += 1
        assert cover.min() >= 1
        assert grig.verify_partition(img, grig.SearchParams(), rects) == []
    rects[0].rx += 1
    kinds = {kind for kind, _, _ in grig.verify_partition(images[-1], grig.SearchParams(), rects)}
    assert kinds


def test_graph_features_and_json():
    images, _ = load_digits(1)
    g = grig.build_graph(images[0])
    feats = g.features()
    assert feats.shape == (g.node_count, 10)
    assert ((feats >= 0) & (feats <= 1)).all()
    edges = g.edge_array()
    assert edges.shape == (len(g.edges), 2)
    assert (edges[:, 0] < edges[:, 1]).all()
    assert grig.ImageGraph.from_json(g.to_json()) == g


def test_ops_identities():
    images, _ = load_digits(2)
    for img in images:
        g = grig.build_graph(img)
        assert grig.flip_horizontal(grig.flip_horizontal(g)) == g
        assert grig.flip_vertical(grig.flip_vertical(g)) == g
        r = g
        for _ in range(4):
            r = grig.rotate(r, 90.0)
        assert r == g
        assert grig.upsample(g, 5, seed=11) == grig.upsample(g, 5, seed=11)
        assert grig.upsample(g, 5, seed=11).node_count == g.node_count + 5
        assert grig.downsample(g, 3).node_count == g.node_count - 3
        sub = grig.extract_subgraph(g, 0, 0, 13, 13)
        assert (sub.width, sub.height) == (14, 14)


def test_grig_container_contract(tmp_path):
    images, labels = load_digits(12)
    graphs = [(grig.build_graph(img), int(lbl)) for img, lbl in zip(images, labels)]
    path = tmp_path / "digits.grig"
    grig.write_grig(path, graphs, 10)

    fdim, classes, parsed = parse_grig(path.read_bytes())
    assert (fdim, classes, len(parsed)) == (10, 10, 12)
    via_module = grig.read_grig(path)
    for (g, lbl), (plabel, pfeats, pedges), mod in zip(graphs, parsed, via_module["graphs"]):
        assert plabel == lbl == mod["label"]
        assert np.array_equal(pfeats, g.features().astype(np.float32))
        assert np.array_equal(pfeats, mod["features"])
        assert np.array_equal(pedges, g.edge_array())
        assert np.array_equal(pedges, mod["edges"])

    blob = bytearray(path.read_bytes())
    blob[-1] ^= 0xFF
    path.write_bytes(bytes(blob))
    with pytest.raises(grig.ChecksumError):
        grig.read_grig(path)
