#!/usr/bin/env python3
"""Convert a Planetoid raw directory (ind.<name>.x, .tx, .allx, .y, .ty, .ally,
.graph, .test.index) into the hidnet dataset layout:

    edges.tsv      u<TAB>v per undirected edge, u < v
    features.txt   "n q" header, then one row per node
    labels.txt     one class id per node
    split.txt      train / val / test / none per node

The split is the usual public one: the first len(y) nodes train, the next 500
validate, and the rows listed in test.index test.
"""

import argparse
import pickle
import sys
from pathlib import Path

import numpy as np
import scipy.sparse as sp

PARTS = ["x", "y", "tx", "ty", "allx", "ally", "graph"]


def load_raw(raw: Path, name: str):
    out = {}
    for part in PARTS:
        with open(raw / f"ind.{name}.{part}", "rb") as f:
            out[part] = pickle.load(f, encoding="latin1")
    out["test_index"] = [int(line) for line in open(raw / f"ind.{name}.test.index")]
    return out


def convert(raw: Path, name: str, out_dir: Path, normalize: bool) -> None:
    d = load_raw(raw, name)
    test_idx = np.array(d["test_index"])
    test_range = np.sort(test_idx)

    tx, ty = d["tx"], d["ty"]
    if name == "citeseer":
        # Some test ids have no features; pad them with zero rows.
        full = range(test_range.min(), test_range.max() + 1)
        tx_ext = sp.lil_matrix((len(full), tx.shape[1]))
        tx_ext[test_range - test_range.min(), :] = tx
        ty_ext = np.zeros((len(full), ty.shape[1]))
        ty_ext[test_range - test_range.min(), :] = ty
        tx, ty = tx_ext, ty_ext

    features = sp.vstack((d["allx"], tx)).tolil()
    features[test_idx, :] = features[test_range, :]
    onehot = np.vstack((d["ally"], ty))
    onehot[test_idx, :] = onehot[test_range, :]
    x = np.asarray(features.todense(), dtype=np.float64)
    if normalize:
        sums = x.sum(axis=1, keepdims=True)
        sums[sums == 0] = 1.0
        x = x / sums

    n = x.shape[0]
    labeled = onehot.sum(axis=1) > 0
    labels = np.where(labeled, onehot.argmax(axis=1), 0)

    split = np.array(["none"] * n, dtype=object)
    n_train = d["y"].shape[0]
    split[:n_train] = "train"
    split[n_train : n_train + 500] = "val"
    split[test_range] = "test"
    split[~labeled] = "none"

    edges = set()
    for u, nbrs in d["graph"].items():
        for v in nbrs:
            if u != v and u < n and v < n:
                edges.add((min(u, v), max(u, v)))

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "edges.tsv", "w") as f:
        for u, v in sorted(edges):
            f.write(f"{u}\t{v}\n")
    with open(out_dir / "features.txt", "w") as f:
        f.write(f"{n} {x.shape[1]}\n")
        for row in x:
            f.write(" ".join(repr(float(v)) if v else "0" for v in row))
            f.write("\n")
    (out_dir / "labels.txt").write_text("\n".join(str(int(v)) for v in labels) + "\n")
    (out_dir / "split.txt").write_text("\n".join(split) + "\n")
    counts = {k: int((split == k).sum()) for k in ("train", "val", "test")}
    print(f"{name}: {n} nodes, {len(edges)} edges, {x.shape[1]} features, "
          f"{onehot.shape[1]} classes, split {counts}", file=sys.stderr)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("raw", type=Path, help="directory holding the ind.<name>.* files")
    ap.add_argument("out", type=Path, help="output dataset directory")
    ap.add_argument("--name", default="cora")
    ap.add_argument("--no-normalize", action="store_true", help="keep raw bag-of-words counts")
    args = ap.parse_args()
    convert(args.raw, args.name, args.out, not args.no_normalize)


if __name__ == "__main__":
    main()
