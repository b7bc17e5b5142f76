"""Readers and writers for binary datasets and decomposition artifacts.

Formats
-------
dense
    One matrix row per line, tokens ``0``/``1`` separated by whitespace or a
    given delimiter.
transactions
    FIMI style: one record per line, whitespace-separated non-negative item
    ids. Columns are the distinct ids in ascending order.
nominal
    Comma-separated categorical values, optionally with a header line of
    attribute names; expanded one-hot.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bitmat import BitMatrix
from .decompose import Decomposition


class DataFormatError(ValueError):
    """Malformed input; ``line`` is 1-based when known."""

    def __init__(self, message: str, path=None, line: Optional[int] = None):
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        super().__init__(where + message)
        self.path = path
        self.line = line


@dataclass
class NominalTable:
    columns: list[str]
    rows: list[list[str]]
    value_maps: dict[str, list[str]] = field(default_factory=dict)

    def __post_init__(self):
        for i, rec in enumerate(self.rows):
            if len(rec) != len(self.columns):
                raise DataFormatError(
                    f"record {i + 1} has {len(rec)} values, expected {len(self.columns)}"
                )
        if not self.value_maps:
            self.value_maps = {
                name: sorted({rec[a] for rec in self.rows})
                for a, name in enumerate(self.columns)
            }

    @property
    def expanded_width(self) -> int:
        return sum(len(v) for v in self.value_maps.values())


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def load_dense(path, delimiter: Optional[str] = None) -> tuple[BitMatrix, list[str]]:
    rows: list[list[int]] = []
    width = None
    for lineno, raw in enumerate(_lines(path), start=1):
        line = raw.strip()
        if not line:
            if width == 0 or width is None and not rows:
                continue
            raise DataFormatError("blank line inside dense matrix", path, lineno)
        tokens = line.split(delimiter) if delimiter else line.split()
        tokens = [t.strip() for t in tokens]
        bad = [t for t in tokens if t not in ("0", "1")]
        if bad:
            raise DataFormatError(f"non-binary token {bad[0]!r}", path, lineno)
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise DataFormatError(
                f"row has {len(tokens)} columns, expected {width}", path, lineno
            )
        rows.append([int(t) for t in tokens])
    width = width or 0
    dense = np.array(rows, dtype=np.uint8).reshape(len(rows), width)
    return BitMatrix.from_dense(dense), [str(j + 1) for j in range(width)]


def write_dense(m: BitMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in m.to_dense().tolist():
            fh.write(" ".join(map(str, row)) + "\n")


def load_transactions(path) -> tuple[BitMatrix, list[str]]:
    records: list[list[int]] = []
    for lineno, raw in enumerate(_lines(path), start=1):
        items = []
        for tok in raw.split():
            if not tok.isdigit():
                raise DataFormatError(f"item id {tok!r} is not a non-negative integer",
                                      path, lineno)
            items.append(int(tok))
        records.append(items)
    ids = sorted({i for rec in records for i in rec})
    col = {item: j for j, item in enumerate(ids)}
    dense = np.zeros((len(records), len(ids)), dtype=np.uint8)
    for r, rec in enumerate(records):
        dense[r, [col[i] for i in rec]] = 1
    return BitMatrix.from_dense(dense), [str(i) for i in ids]


def load_nominal(path, header: bool = True, delimiter: str = ",",
                 skip_columns: Sequence[int] = ()) -> NominalTable:
    with open(path, encoding="utf-8", newline="") as fh:
        raw = [r for r in csv.reader(fh, delimiter=delimiter)]
    raw = [[v.strip() for v in r] for r in raw if any(v.strip() for v in r)]
    if not raw:
        return NominalTable([], [])
    if header:
        names, body = raw[0], raw[1:]
    else:
        names, body = [f"a{i + 1}" for i in range(len(raw[0]))], raw
    for lineno, rec in enumerate(body, start=2 if header else 1):
        if len(rec) != len(names):
            raise DataFormatError(f"{len(rec)} fields, expected {len(names)}", path, lineno)
    keep = [i for i in range(len(names)) if i not in set(skip_columns)]
    return NominalTable([names[i] for i in keep], [[rec[i] for i in keep] for rec in body])


def expand_nominal(table: NominalTable) -> tuple[BitMatrix, list[str]]:
    """One column per (attribute, value) pair, exactly one 1 per attribute per row."""
    labels: list[str] = []
    offsets = []
    for name in table.columns:
        offsets.append(len(labels))
        labels += [f"{name}={v}" for v in table.value_maps[name]]
    index = [{v: i for i, v in enumerate(table.value_maps[name])} for name in table.columns]
    dense = np.zeros((len(table.rows), len(labels)), dtype=np.uint8)
    for r, rec in enumerate(table.rows):
        for a, value in enumerate(rec):
            dense[r, offsets[a] + index[a][value]] = 1
    return BitMatrix.from_dense(dense), labels


def load_matrix(path, fmt: str = "dense", **kw) -> tuple[BitMatrix, list[str]]:
    if fmt == "dense":
        return load_dense(path, kw.get("delimiter"))
    if fmt == "transactions":
        return load_transactions(path)
    if fmt == "nominal":
        return expand_nominal(load_nominal(path, header=kw.get("header", True)))
    raise ValueError(f"unknown format {fmt!r}; expected dense, transactions or nominal")


def empty_lines(m: BitMatrix) -> dict[str, list[int]]:
    """Indices of all-zero rows and all-zero columns."""
    dense = m.to_dense()
    return {
        "zero_rows": np.flatnonzero(dense.sum(axis=1) == 0).tolist(),
        "zero_cols": np.flatnonzero(dense.sum(axis=0) == 0).tolist(),
    }


def _write_rows(m: BitMatrix, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if m.n_cols == 0:
            return
        for row in m.to_dense().tolist():
            fh.write(" ".join(map(str, row)) + "\n")


def export_decomposition(d: Decomposition, labels: Optional[Sequence[str]], out_dir,
                         extra: Optional[dict] = None) -> dict[str, Path]:
    """Write ``U.txt``, ``V.txt``, ``provenance.txt`` and ``summary.txt``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {name: out / f"{name}.txt" for name in ("U", "V", "provenance", "summary")}
    _write_rows(d.U, paths["U"])
    _write_rows(d.V, paths["V"])
    with open(paths["provenance"], "w", encoding="utf-8") as fh:
        for p in d.provenance:
            label = labels[p] if labels is not None and p < len(labels) else str(p + 1)
            fh.write(f"{p}\t{label}\n")
    summary = {
        "rows": d.U.n_rows,
        "cols": d.V.n_cols,
        "k": d.k,
        "coverage": f"{d.coverage:.6f}",
        "covered_ones": d.covered_ones,
        "total_ones": d.total_ones,
        "exact": str(d.exact).lower(),
        "algorithm": d.algorithm,
        "orientation": d.orientation,
        "truncation": "post-hoc" if d.truncated else "none",
        "candidates": d.n_candidates,
    }
    summary.update(extra or {})
    with open(paths["summary"], "w", encoding="utf-8") as fh:
        for key, value in summary.items():
            fh.write(f"{key}={value}\n")
    return paths


def read_summary(path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(_lines(path), start=1):
        if not raw.strip():
            continue
        if "=" not in raw:
            raise DataFormatError("expected key=value", path, lineno)
        key, value = raw.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_decomposition(in_dir) -> Decomposition:
    """Inverse of :func:`export_decomposition`."""
    src = Path(in_dir)
    summary = read_summary(src / "summary.txt")
    m, n, k = int(summary["rows"]), int(summary["cols"]), int(summary["k"])
    if k:
        u, _ = load_dense(src / "U.txt")
        v, _ = load_dense(src / "V.txt")
    else:
        u, v = BitMatrix((m, 0)), BitMatrix((0, n))
    if u.shape != (m, k) or v.shape != (k, n):
        raise DataFormatError(f"factor shapes {u.shape}, {v.shape} disagree with summary",
                              src / "summary.txt")
    provenance = []
    for lineno, raw in enumerate(_lines(src / "provenance.txt"), start=1):
        if raw.strip():
            head = raw.split("\t", 1)[0]
            if not head.strip().isdigit():
                raise DataFormatError("expected a column index", src / "provenance.txt", lineno)
            provenance.append(int(head))
    return Decomposition(
        U=u,
        V=v,
        provenance=provenance,
        covered_ones=int(summary["covered_ones"]),
        total_ones=int(summary["total_ones"]),
        exact=summary["exact"] == "true",
        algorithm=summary.get("algorithm", "pick-largest"),
        orientation=summary.get("orientation", "columns"),
        truncated=summary.get("truncation") == "post-hoc",
        n_candidates=int(summary.get("candidates", 0)),
    )
