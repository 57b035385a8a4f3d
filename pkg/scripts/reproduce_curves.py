"""Regenerate the error-probability curves of every family against standard PSK.

Writes one CSV per (family, parameter, N) under --out-dir, each with the
standard-state baseline column, plus crossings.csv summarising where every
family crosses the standard curve.

    python3 scripts/reproduce_curves.py --out-dir results
"""
from __future__ import annotations

import argparse
import csv
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from gpsk.scan import find_crossing, scan, write_csv
from gpsk.states import FamilySpec

log = logging.getLogger("reproduce")


@dataclass(frozen=True)
class PanelConfig:
    name: str
    families: tuple[FamilySpec, ...]
    n_symbols: tuple[int, ...] = (3, 4, 8)


@dataclass(frozen=True)
class RunConfig:
    out_dir: Path = Path("results")
    mean_min: float = 0.0
    mean_max: float = 1.2
    steps: int = 120
    crossing_min: float = 0.05
    workers: int = 1
    panels: tuple[PanelConfig, ...] = field(default_factory=lambda: (
        PanelConfig("optical_spin", tuple(FamilySpec.optical_spin(n) for n in (3, 5, 7, 11))),
        PanelConfig("barut_girardello", tuple(FamilySpec.barut_girardello(s) for s in (0.5, 1.5))),
        PanelConfig("susskind_glogower", (FamilySpec.modified_susskind_glogower(),)),
        PanelConfig("perelomov", tuple(FamilySpec.perelomov(s) for s in (0.5, 1.5))),
    ))


def run(cfg: RunConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    crossings = []
    for fig in cfg.panels:
        for family in fig.families:
            for n in fig.n_symbols:
                t0 = time.perf_counter()
                rows = scan(family, n, cfg.mean_min, cfg.mean_max, cfg.steps,
                            with_baseline=True, workers=cfg.workers)
                path = cfg.out_dir / f"{fig.name}_{family.label}_{family.param:g}_N{n}.csv"
                with path.open("w", newline="") as fh:
                    write_csv(rows, fh)
                report = find_crossing(family, n, cfg.crossing_min, cfg.mean_max)
                crossings.append(report.to_dict())
                log.info("%s N=%d: %s (%.1f s)", family, n, report.direction.value, time.perf_counter() - t0)

    with (cfg.out_dir / "crossings.csv").open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(crossings[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(crossings)
    for c in crossings:
        where = f"{c['crossing_mean_n']:.4f}" if c["crossing_mean_n"] is not None else "-"
        print(f"{c['family_label']:>6} {c['param']:>5g} N={c['n_symbols']}  {c['direction']:<30} {where}")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", type=Path, default=RunConfig.out_dir)
    p.add_argument("--steps", type=int, default=RunConfig.steps)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    run(RunConfig(out_dir=args.out_dir, steps=args.steps, workers=args.workers))


if __name__ == "__main__":
    main()
