#!/usr/bin/env python3
"""Write Gram matrices of H_{m,n} under each measure as CSV files.

    python3 scripts/gram_tables.py --out gram --max 4
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from hermiq.cli import run


@dataclass(frozen=True)
class GramConfig:
    out: Path = Path("gram")
    max_index: int = 4
    measures: tuple[str, ...] = ("slice", "polar", "lebesgue")


def main(cfg: GramConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for measure in cfg.measures:
        path = cfg.out / f"gram_{measure}.csv"
        start = time.perf_counter()
        with path.open("w") as fh:
            code = run(["ortho", "--measure", measure, "--max", str(cfg.max_index)], out=fh)
        print(f"{measure:9s} exit={code} {time.perf_counter() - start:6.2f}s -> {path}")
        # the Lebesgue measure is not expected to be orthogonal, so it does not count
        if measure != "lebesgue":
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=GramConfig.out)
    ap.add_argument("--max", dest="max_index", type=int, default=GramConfig.max_index)
    ap.add_argument("--measures", nargs="+", default=list(GramConfig.measures))
    ns = ap.parse_args()
    raise SystemExit(main(GramConfig(ns.out, ns.max_index, tuple(ns.measures))))
