"""How far the eigenfunction theta values stray from 1/h^2, per h and per level.

For the first primary eigenfunction the script prints, at the two finest
levels, the largest deviation, the number of points outside 1/h^2 +- 0.01,
and the same maximum restricted to points whose parent gap is at least 1%
of ||u||_inf (small gaps sit at extrema of the trace and amplify noise).

    python scripts/theta_study.py --m 10
"""

import argparse
import math

import numpy as np

from hata import dirichlet_spectrum, restrict_to_interval, theta_analysis
from hata.spectral import PRIMARY


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--h", type=float, nargs="*", default=[1.5, math.sqrt(3.0), 2.0, 3.0, 4.0])
    args = ap.parse_args()

    print(f"{'h':>8} {'level':>5} {'points':>6} {'max dev':>9} {'>0.01':>6} {'dev, gap>1%':>12}")
    for h in args.h:
        r = dirichlet_spectrum(args.m, h, 10)
        u = r.function(r.labels.index(PRIMARY) + 1)
        t = restrict_to_interval(u)
        for level in (args.m - 1, args.m):
            rep = theta_analysis(t, u, levels=[level])
            dev = np.abs(rep.theta - rep.reference)
            sel = np.flatnonzero(t.left >= 0)
            sel = sel[t.birth_level[sel] == level]
            gap = np.abs(t.values[t.right[sel]] - t.values[t.left[sel]]) / t.sup_norm
            big = dev[(gap >= 0.01) & ~rep.excluded]
            print(
                f"{h:8.4f} {level:5d} {len(dev):6d} {np.nanmax(dev):9.4f} "
                f"{int(np.sum(dev > 0.01)):6d} {big.max() if big.size else float('nan'):12.4f}"
            )


if __name__ == "__main__":
    main()
