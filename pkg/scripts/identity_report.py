#!/usr/bin/env python3
"""Run every identity suite and summarize the pass counts as JSON."""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from hermiq import identities


@dataclass(frozen=True)
class SuiteConfig:
    max_index: int = 4
    seed: int = 0


def main(cfg: SuiteConfig) -> int:
    summary = {"config": asdict(cfg), "suites": {}}
    failed = 0
    for name in sorted(identities.SUITES):
        start = time.perf_counter()
        reports = identities.run_suite(name, cfg.max_index, seed=cfg.seed)
        bad = [r.to_json() for r in reports if not r.ok]
        failed += len(bad)
        summary["suites"][name] = {
            "checks": len(reports),
            "failures": len(bad),
            "seconds": round(time.perf_counter() - start, 3),
            "first_failures": bad[:3],
        }
    print(json.dumps(summary, indent=2, default=str))
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", dest="max_index", type=int, default=SuiteConfig.max_index)
    ap.add_argument("--seed", type=int, default=SuiteConfig.seed)
    ns = ap.parse_args()
    raise SystemExit(main(SuiteConfig(ns.max_index, ns.seed)))
