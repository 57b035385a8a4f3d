"""Measure how far the closed mSG normalization can be trusted.

Scans u in (0, 20] and prints the largest gap between the closed-form
normalization and the term-by-term sum, together with <n> at the top of the
range.  The package caps mSG states at MSG_U_MAX on the strength of this.
"""
from __future__ import annotations

import argparse

import numpy as np

from gpsk.states import MSG_U_MAX, FamilySpec, coefficient_vector_u, mean_photon

LIMIT = 1e-6


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=400)
    args = p.parse_args()
    msg = FamilySpec.modified_susskind_glogower()
    grid = np.linspace(0.0, MSG_U_MAX, args.points)
    defects = np.array([coefficient_vector_u(msg, u).normalization_defect for u in grid])
    bad = grid[defects >= LIMIT]
    print(f"max defect on [0, {MSG_U_MAX:g}]: {defects.max():.3e} at u = {grid[defects.argmax()]:.3f}")
    print(f"first u with defect >= {LIMIT:g}: {bad[0] if bad.size else 'none'}")
    print(f"<n> at u = {MSG_U_MAX:g}: {mean_photon(msg, MSG_U_MAX):.6f}")


if __name__ == "__main__":
    main()
