#!/usr/bin/env python3
"""Diagnostics for the smoothing weight and the smoothed prime-power sums.

Prints the plateau/support geometry, Phi(0), the transform self-check over a
z grid, and (given a cache with enough coverage) the smoothed sums psi_m(x)
for a range of symmetric-power indices.

    python scripts/weight_report.py --x 1000000 --ell 4 --eps 0.1
    python scripts/weight_report.py --cache 11a1.stan --x 1000000 --m-max 6
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from satotate.angles import load_cache
from satotate.prime_sums import (
    SmoothingWeight,
    smoothed_psi,
    weight_laplace,
    weight_phi,
    weight_selfcheck,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--x", type=int, default=10**6)
    parser.add_argument("--ell", type=int, default=4)
    parser.add_argument("--eps", type=float, default=0.1)
    parser.add_argument("--cache", help="angle cache; enables the psi_m table")
    parser.add_argument("--m-max", type=int, default=6)
    args = parser.parse_args()

    w = SmoothingWeight(args.x, args.ell, args.eps)
    lo, hi = w.support
    print(f"weight: x={args.x}, ell={w.ell}, eps={w.eps}, A={w.A:.3e}")
    print(f"support [{lo:.6f}, {hi:.6f}], plateau [0.5, 1.0]")
    print(f"phi(midpoints): rise {weight_phi(w, 0.5 * (lo + 0.5)):.6f}, "
          f"plateau {weight_phi(w, 0.75):.6f}, fall {weight_phi(w, 0.5 * (1.0 + hi)):.6f}")

    phi0 = weight_laplace(w, 0.0).real
    print(f"Phi(0) = {phi0!r} (exact value 1/2 + eps/log x = {0.5 + w.eps / w.log_x!r})")

    grid = [complex(a, b) for a in np.linspace(-5, 5, 5) for b in np.linspace(-5, 5, 5)]
    print(f"transform self-check on 25-point grid: {weight_selfcheck(w, grid):.3e} (gate 1e-8)")

    if args.cache:
        series = load_cache(args.cache)
        print(f"\nloaded {args.cache}: coverage to {series.x_max}")
        print(f"{'m':>3} {'psi_m(x)':>16} {'psi_m(x)/x':>12}")
        for m in range(args.m_max + 1):
            val = smoothed_psi(series, m, w)
            print(f"{m:>3} {val:>16.2f} {val / args.x:>12.6f}")
        print("(m = 0 tracks x itself; every m >= 1 should sit near zero)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
