"""Command-line front end: ``colbmd <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
import tracemalloc
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .dataio import (
    DataFormatError,
    empty_lines,
    export_decomposition,
    load_decomposition,
    load_matrix,
    write_dense,
)
from .decompose import (
    ALGORITHMS,
    PICK_LARGEST,
    approx_decompose,
    best_orientation,
    coverage_curve,
    decompose,
    verify,
)
from .oracle import OracleLimitError, oracle_min_k
from .qmatrix import dominance_audit, ideal_response, mine_qmatrix

log = logging.getLogger("colbmd")

BENCH_LEVELS = (0.5, 0.75, 0.9, 0.95, 0.98, 1.0)
FORMATS = ("dense", "transactions", "nominal")


@dataclass
class RunConfig:
    input: Optional[Path]
    format: str = "dense"
    algorithm: str = PICK_LARGEST
    coverage: float = 1.0
    tie: str = "first"
    seed: Optional[int] = None
    both_orientations: bool = False
    out: Optional[Path] = None

    def __post_init__(self):
        if not 0.0 < self.coverage <= 1.0:
            raise ValueError(f"--coverage must lie in (0, 1], got {self.coverage}")
        if (self.tie == "random") != (self.seed is not None):
            raise ValueError("--seed is required with --tie random and only allowed with it")

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        return cls(
            input=Path(ns.input) if getattr(ns, "input", None) else None,
            format=ns.format,
            algorithm=ns.algorithm,
            coverage=getattr(ns, "coverage", 1.0),
            tie=ns.tie,
            seed=ns.seed,
            both_orientations=getattr(ns, "both_orientations", False),
            out=Path(ns.out) if ns.out else None,
        )


def _load(cfg: RunConfig):
    m, labels = load_matrix(cfg.input, cfg.format)
    zeros = empty_lines(m)
    if zeros["zero_rows"] or zeros["zero_cols"]:
        log.info("%s: %d all-zero rows, %d all-zero columns", cfg.input,
                 len(zeros["zero_rows"]), len(zeros["zero_cols"]))
    return m, labels


def _report(d, seconds: float, out=None) -> None:
    out = out or sys.stdout
    print(f"k={d.k}", file=out)
    print(f"coverage={d.coverage:.6f}", file=out)
    print(f"exact={str(d.exact).lower()}", file=out)
    print(f"wall_time_s={seconds:.4f}", file=out)
    print(f"peak_tiles={d.n_candidates}", file=out)
    if d.orientation != "columns":
        print(f"orientation={d.orientation}", file=out)


def _finish(m, d, seconds: float, cfg: RunConfig, labels) -> int:
    if d.orientation == "rows":
        labels = [str(i + 1) for i in range(m.n_rows)]
    report = verify(m, d)
    _report(d, seconds)
    if cfg.out is not None:
        export_decomposition(d, labels, cfg.out, {
            "tie": cfg.tie,
            "seed": "" if cfg.seed is None else cfg.seed,
            "wall_time_s": f"{seconds:.4f}",
        })
    if not report.passed:
        for line in report.lines():
            print(line, file=sys.stderr)
        return 1
    return 0


def cmd_decompose(cfg: RunConfig) -> int:
    m, labels = _load(cfg)
    start = time.perf_counter()
    if cfg.both_orientations:
        d, _ = best_orientation(m, cfg.algorithm, cfg.tie, cfg.seed)
    else:
        d = decompose(m, cfg.algorithm, cfg.tie, cfg.seed)
    return _finish(m, d, time.perf_counter() - start, cfg, labels)


def cmd_approx(cfg: RunConfig) -> int:
    m, labels = _load(cfg)
    start = time.perf_counter()
    d = approx_decompose(m, cfg.algorithm, cfg.coverage, cfg.tie, cfg.seed)
    return _finish(m, d, time.perf_counter() - start, cfg, labels)


def cmd_curve(cfg: RunConfig) -> int:
    m, _ = _load(cfg)
    points = coverage_curve(m, cfg.algorithm, cfg.tie, cfg.seed)
    lines = [f"{p.tiles_used},{p.coverage!r}" for p in points]
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / "curve.csv").write_text("".join(line + "\n" for line in lines))
    else:
        for line in lines:
            print(line)
    return 0


def cmd_qmine(cfg: RunConfig) -> int:
    r, _ = _load(cfg)
    start = time.perf_counter()
    res = mine_qmatrix(r, cfg.algorithm, cfg.tie, cfg.seed)
    seconds = time.perf_counter() - start
    audit = dominance_audit(res)
    ok = ideal_response(res.A, res.Q) == r
    print(f"k={res.k}")
    print(f"items={','.join(str(p + 1) for p in res.item_provenance)}")
    print(f"round_trip={'pass' if ok else 'fail'}")
    print(f"prerequisite_violations={len(audit.violations)}")
    print(f"wall_time_s={seconds:.4f}")
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        write_dense(res.A, cfg.out / "A.txt")
        write_dense(res.Q, cfg.out / "Q.txt")
        with open(cfg.out / "audit.txt", "w", encoding="utf-8") as fh:
            fh.write(f"pairs_checked={audit.pairs_checked}\n")
            fh.write(f"violations={len(audit.violations)}\n")
            for i, j, s in audit.violations:
                fh.write(f"attribute {i + 1} dominates {j + 1}; student {s + 1} lacks "
                         f"{i + 1} but has {j + 1}\n")
        with open(cfg.out / "summary.txt", "w", encoding="utf-8") as fh:
            fh.write(f"students={r.n_rows}\nitems={r.n_cols}\nk={res.k}\n")
            fh.write("attribute_items=" + ",".join(str(p + 1) for p in res.item_provenance)
                     + "\n")
            fh.write(f"round_trip={'pass' if ok else 'fail'}\n")
    return 0 if ok else 1


def cmd_verify(cfg: RunConfig, factors: Path) -> int:
    m, _ = _load(cfg)
    report = verify(m, load_decomposition(factors))
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def cmd_oracle(cfg: RunConfig, limit: int) -> int:
    m, _ = _load(cfg)
    res = oracle_min_k(m, limit)
    print(f"min_k={res.min_k}")
    print(f"witness={','.join(str(t + 1) for t in res.witness)}")
    print(f"explored={res.explored}")
    return 0


def _parse_dataset(entry: str, default_fmt: str) -> tuple[str, Path, str]:
    name = None
    if "=" in entry:
        name, entry = entry.split("=", 1)
    fmt = default_fmt
    head, sep, tail = entry.rpartition(":")
    if sep and tail in FORMATS:
        entry, fmt = head, tail
    path = Path(entry)
    return name or path.stem, path, fmt


def cmd_bench(datasets: Sequence[str], algorithms: Sequence[str], levels: Sequence[float],
              cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    rows = []
    for entry in datasets:
        name, path, fmt = _parse_dataset(entry, cfg.format)
        if not path.exists():
            print(f"# skipped {name}: {path} not found", file=out)
            continue
        m, _ = load_matrix(path, fmt)
        for algorithm in algorithms:
            for level in levels:
                tracemalloc.start()
                start = time.perf_counter()
                d = approx_decompose(m, algorithm, level, cfg.tie, cfg.seed)
                seconds = time.perf_counter() - start
                _, peak = tracemalloc.get_traced_memory()
                tracemalloc.stop()
                rows.append({
                    "dataset": name,
                    "shape": f"{m.n_rows}x{m.n_cols}",
                    "algorithm": algorithm,
                    "coverage_target": level,
                    "k": d.k,
                    "coverage": round(d.coverage, 6),
                    "wall_time_s": round(seconds, 4),
                    "peak_mb": round(peak / 2**20, 2),
                })
    header = ("dataset", "shape", "algorithm", "coverage_target", "k", "coverage",
              "wall_time_s", "peak_mb")
    widths = [max([len(h)] + [len(str(r[h])) for r in rows]) for h in header]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)), file=out)
    for r in rows:
        print("  ".join(str(r[h]).ljust(w) for h, w in zip(header, widths)), file=out)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        with open(cfg.out / "bench.jsonl", "w", encoding="utf-8") as fh:
            for r in rows:
                fh.write(json.dumps(r) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colbmd", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        p.add_argument("--input", required=needs_input, help="matrix file")
        p.add_argument("--format", choices=FORMATS, default="dense")
        p.add_argument("--algorithm", choices=ALGORITHMS, default=PICK_LARGEST)
        p.add_argument("--tie", choices=("first", "last", "random"), default="first")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")
        return p

    p = common(sub.add_parser("decompose", help="exact decomposition"))
    p.add_argument("--both-orientations", action="store_true")
    p = common(sub.add_parser("approx", help="from-below approximation"))
    p.add_argument("--coverage", type=float, required=True)
    common(sub.add_parser("curve", help="coverage after each tile"))
    common(sub.add_parser("qmine", help="mine knowledge states and Q-matrix from R"))
    p = common(sub.add_parser("verify", help="check exported factors against a matrix"))
    p.add_argument("--factors", required=True, help="directory written by decompose")
    p = common(sub.add_parser("oracle", help="exhaustive minimum column-use tiling"))
    p.add_argument("--limit", type=int, default=20)
    p = common(sub.add_parser("bench", help="k / time / memory table over datasets"), False)
    p.add_argument("datasets", nargs="*", help="[name=]path[:format]")
    p.add_argument("--algorithms", nargs="+", choices=ALGORITHMS, default=list(ALGORITHMS))
    p.add_argument("--levels", nargs="+", type=float, default=list(BENCH_LEVELS))
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig.from_args(ns)
        if ns.command == "decompose":
            return cmd_decompose(cfg)
        if ns.command == "approx":
            return cmd_approx(cfg)
        if ns.command == "curve":
            return cmd_curve(cfg)
        if ns.command == "qmine":
            return cmd_qmine(cfg)
        if ns.command == "verify":
            return cmd_verify(cfg, Path(ns.factors))
        if ns.command == "oracle":
            return cmd_oracle(cfg, ns.limit)
        if ns.command == "bench":
            return cmd_bench(ns.datasets, ns.algorithms, ns.levels, cfg)
    except (DataFormatError, OracleLimitError, ValueError, OSError) as exc:
        print(f"colbmd: error: {exc}", file=sys.stderr)
        return 2
    parser.error(f"unknown command {ns.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())

