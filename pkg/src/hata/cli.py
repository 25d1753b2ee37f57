"""Command-line interface: ``hata {dimension,harmonic,eigen,theta,mesh}``.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 I/O failure.  Output goes to ``--out`` (default ``$HATA_OUT_DIR`` or the
current directory).
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .geometry import DEFAULT_ALPHA, AdmissibilityError, IfsParams, build_graph
from .harmonic import harmonic_from_boundary
from .measure import measure_weights
from .spectral import (
    SpectralError,
    classify_support,
    pair_spectrum,
    solve_dirichlet,
)
from .structure import HarmonicStructure, euclidean_dimension, resistance_dimension
from .trace import monotonicity_check, restrict_to_interval, theta_analysis

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("hata")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    alpha: complex = DEFAULT_ALPHA
    h: float = 2.0
    m: int = 10
    boundary: tuple[float, float, float] | None = None
    eigen_count: int = 20
    eigen_index: int | None = None
    fmt: str = "csv"
    out: Path = field(default_factory=lambda: Path(os.environ.get("HATA_OUT_DIR", ".")))
    vectors: bool = False
    deterministic: bool = True  # no randomness on any production path

    def validate(self) -> "RunConfig":
        try:
            IfsParams(self.alpha)
            HarmonicStructure(self.h)
        except AdmissibilityError as exc:
            raise ConfigError(str(exc)) from None
        if self.m < 0:
            raise ConfigError("m must be non-negative")
        if self.eigen_count < 0:
            raise ConfigError("count must be non-negative")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        return self

    @property
    def params(self) -> IfsParams:
        return IfsParams(self.alpha)

    @property
    def comment(self) -> str:
        return io.config_comment(self.alpha, self.h, self.m)


def _boundary(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("boundary needs three comma-separated values")
    try:
        a, b, c = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad boundary values {text!r}") from None
    return a, b, c


def cmd_dimension(cfg: RunConfig) -> int:
    d = resistance_dimension(cfg.h)
    de = euclidean_dimension(cfg.params)
    print(f"resistance_dimension {d:.12f}")
    print(f"euclidean_dimension {de:.12f}")
    print(f"critical_h {1.0 / math.sqrt(cfg.params.abs2):.12f}")
    return EXIT_OK


def _harmonic_outputs(cfg: RunConfig):
    s = HarmonicStructure(cfg.h)
    u = harmonic_from_boundary(cfg.boundary, cfg.m, s, cfg.params)
    return s, u, restrict_to_interval(u)


def cmd_harmonic(cfg: RunConfig) -> int:
    if cfg.boundary is None:
        cfg.boundary = (0.0, 0.0, 1.0)
    s, u, t = _harmonic_outputs(cfg)
    mono, first = monotonicity_check(t)
    rep = theta_analysis(t, u, levels=range(1, cfg.m + 1))
    base = cfg.out
    io.write_table(base / "harmonic.csv", io.VERTEX_COLUMNS, io.vertex_rows(u), cfg.comment, cfg.fmt)
    io.write_table(base / "trace.csv", io.TRACE_COLUMNS, io.trace_rows(t), cfg.comment, cfg.fmt)
    io.write_table(base / "theta.csv", io.THETA_COLUMNS, io.theta_rows(rep), cfg.comment, cfg.fmt)
    print(f"vertices {u.graph.n_vertices} trace_points {len(t)}")
    print(f"monotone {str(mono).lower()} first_violation {'' if first is None else first}")
    print(f"theta_max_deviation {rep.max_deviation!r} excluded {rep.n_excluded}")
    return EXIT_OK


def _spectrum(cfg: RunConfig, m: int, count: int):
    s = HarmonicStructure(cfg.h)
    g = build_graph(m, cfg.params, s.h)
    w = measure_weights(s.h, g)
    r = solve_dirichlet(g, s, w, count)
    return pair_spectrum(classify_support(r, g), s, w)


def cmd_eigen(cfg: RunConfig) -> int:
    r = _spectrum(cfg, cfg.m, cfg.eigen_count)
    io.write_table(
        cfg.out / "eigenvalues.csv", io.EIGENVALUE_COLUMNS, io.eigenvalue_rows(r), cfg.comment, cfg.fmt
    )
    if cfg.vectors:
        io.write_table(
            cfg.out / "eigenvectors.csv",
            io.EIGENVECTOR_COLUMNS,
            io.eigenvector_rows(r),
            cfg.comment,
            cfg.fmt,
        )
    for k, lam, label in zip(range(1, len(r) + 1), r.eigenvalues, r.labels):
        print(f"{k:3d} {lam:.6g} {label}")
    return EXIT_OK


def cmd_theta(cfg: RunConfig) -> int:
    if cfg.m < 2:
        raise ConfigError("theta analysis needs m >= 2")
    for m in (cfg.m - 1, cfg.m):
        if cfg.eigen_index is None:
            boundary = cfg.boundary if cfg.boundary is not None else (0.0, 0.0, 1.0)
            s = HarmonicStructure(cfg.h)
            u = harmonic_from_boundary(boundary, m, s, cfg.params)
        else:
            k = cfg.eigen_index
            interior = 2 ** (m + 1) - 2
            if not 1 <= k <= interior:
                raise ConfigError(f"eigen index {k} out of range 1..{interior} at level {m}")
            u = _spectrum(cfg, m, k).function(k)
        t = restrict_to_interval(u)
        rep = theta_analysis(t, u)
        comment = io.config_comment(cfg.alpha, cfg.h, m)
        io.write_table(cfg.out / f"theta_m{m}.csv", io.THETA_COLUMNS, io.theta_rows(rep), comment, cfg.fmt)
        print(
            f"level {m} points {len(rep.theta)} excluded {rep.n_excluded} "
            f"max_deviation {rep.max_deviation!r} reference {rep.reference!r}"
        )
    return EXIT_OK


def cmd_mesh(cfg: RunConfig) -> int:
    g = build_graph(cfg.m, cfg.params, cfg.h)
    io.write_mesh(cfg.out / "mesh.json", g, cfg.comment)
    print(f"vertices {g.n_vertices} edges {len(g.edges)}")
    return EXIT_OK


COMMANDS = {
    "dimension": cmd_dimension,
    "harmonic": cmd_harmonic,
    "eigen": cmd_eigen,
    "theta": cmd_theta,
    "mesh": cmd_mesh,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha-re", type=float, default=DEFAULT_ALPHA.real)
    common.add_argument("--alpha-im", type=float, default=DEFAULT_ALPHA.imag)
    common.add_argument("--h", type=float, default=2.0, help="structure parameter, h > 1")
    common.add_argument("--m", type=int, default=10, help="level of the approximation")
    common.add_argument("--boundary", type=_boundary, default=None, help="u(alpha),u(0),u(1)")
    common.add_argument("--count", type=int, default=20, help="number of eigenpairs")
    common.add_argument("--eigen-index", type=int, default=None, help="1-based eigenpair index")
    common.add_argument("--out", type=Path, default=None, help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--vectors", action="store_true", help="also write eigenvectors")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hata", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=func.__name__.replace("cmd_", ""))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        alpha=complex(args.alpha_re, args.alpha_im),
        h=args.h,
        m=args.m,
        boundary=args.boundary,
        eigen_count=args.count,
        eigen_index=args.eigen_index,
        fmt=args.format,
        vectors=args.vectors,
    )
    if args.out is not None:
        cfg.out = args.out
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = config_from_args(args)
        if args.command != "dimension":
            cfg.out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SpectralError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        print("residuals: " + " ".join(f"{r:.3e}" for r in exc.residuals), file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
