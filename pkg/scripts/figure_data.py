"""Write the CSV data behind the harmonic-trace and eigenfunction-trace figures.

    python scripts/figure_data.py --out figure_data --m 10
"""

import argparse
import math
from pathlib import Path

from hata import HarmonicStructure, harmonic_from_boundary, restrict_to_interval, theta_analysis
from hata import io
from hata.cli import RunConfig, _spectrum
from hata.spectral import PRIMARY

H_VALUES = {"3_2": 1.5, "sqrt3": math.sqrt(3.0), "3": 3.0}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("figure_data"))
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--primaries", type=int, default=3)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for tag, h in H_VALUES.items():
        cfg = RunConfig(h=h, m=args.m).validate()
        u = harmonic_from_boundary((0, 0, 1), args.m, HarmonicStructure(h))
        io.write_table(
            args.out / f"harmonic_trace_h{tag}.csv",
            io.TRACE_COLUMNS,
            io.trace_rows(restrict_to_interval(u)),
            cfg.comment,
        )
        r = _spectrum(cfg, args.m, 20)
        io.write_table(args.out / f"eigenvalues_h{tag}.csv", io.EIGENVALUE_COLUMNS,
                       io.eigenvalue_rows(r), cfg.comment)
        primaries = [k + 1 for k, lab in enumerate(r.labels) if lab == PRIMARY]
        for k in primaries[: args.primaries]:
            t = restrict_to_interval(r.function(k))
            io.write_table(args.out / f"eigen_trace_h{tag}_k{k}.csv", io.TRACE_COLUMNS,
                           io.trace_rows(t), cfg.comment)
            rep = theta_analysis(t, r.function(k), levels=[args.m - 1, args.m])
            io.write_table(args.out / f"eigen_theta_h{tag}_k{k}.csv", io.THETA_COLUMNS,
                           io.theta_rows(rep), cfg.comment)
        print(f"h={h:.6g}: wrote traces for eigenfunctions {primaries[: args.primaries]}")


if __name__ == "__main__":
    main()
