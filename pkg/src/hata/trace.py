"""Restrictions of vertex functions to ``[0, 1]`` and their singularity diagnostics."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .geometry import Address, IfsParams, canonicalize
from .harmonic import VertexFunction
from .structure import HarmonicStructure

THETA_EXCLUSION = 1e-9


class TraceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TraceSeries:
    """Values of a vertex function at the vertices lying on ``[0, 1]``, sorted by ``x``.

    ``left[i]`` and ``right[i]`` index the flanking parents ``p_{w1}``,
    ``p_{w2}`` of point ``i = p_{w10}``; both are ``-1`` at the endpoints.
    """

    level: int
    h: float
    x: np.ndarray
    values: np.ndarray
    birth_level: np.ndarray
    vertex: np.ndarray
    addresses: tuple[Address, ...]
    left: np.ndarray
    right: np.ndarray
    boundary_values: tuple[float, float, float]
    sup_norm: float

    def __len__(self) -> int:
        return len(self.x)

    def position(self, a: Address) -> int:
        return self._lookup[canonicalize(a)]

    @functools.cached_property
    def _lookup(self) -> dict:
        return {a: i for i, a in enumerate(self.addresses)}


def restrict_to_interval(u: VertexFunction) -> TraceSeries:
    """Trace of ``u`` on ``V_m ∩ [0, 1]`` with middle-point parentage attached."""
    g = u.graph
    ids = np.flatnonzero(g.on_unit_interval)
    ids = ids[np.argsort(g.coords[ids].real, kind="stable")]
    pos = {int(v): i for i, v in enumerate(ids)}
    left = np.full(len(ids), -1)
    right = np.full(len(ids), -1)
    for i, v in enumerate(ids):
        a = g.addresses[v]
        if not a.word:
            continue
        if a.corner != 0 or a.word[-1] != "1":
            raise TraceError(f"vertex {a} lies on [0, 1] but is not a middle point p_(w10)")
        w = a.word[:-1]
        lo = g.index[canonicalize(Address(w, 1))]
        hi = g.index[canonicalize(Address(w, 2))]
        if lo not in pos or hi not in pos:
            raise TraceError(f"parents of on-axis vertex {a} are not on [0, 1]")
        left[i], right[i] = pos[lo], pos[hi]
    x = g.coords[ids].real
    if np.any(np.diff(x) <= 0):
        raise TraceError("trace abscissae are not strictly increasing")
    bad = (left >= 0) & ~((x[np.maximum(left, 0)] < x) & (x < x[np.maximum(right, 0)]))
    if np.any(bad):
        raise TraceError("a middle point is not between its parents")
    return TraceSeries(
        level=g.level,
        h=g.h,
        x=x,
        values=u.values[ids].copy(),
        birth_level=g.birth_level[ids].copy(),
        vertex=ids,
        addresses=tuple(g.addresses[v] for v in ids),
        left=left,
        right=right,
        boundary_values=u.boundary_values,
        sup_norm=float(np.max(np.abs(u.values))),
    )


@dataclass(frozen=True, eq=False)
class ThetaReport:
    """Interpolation weights ``theta`` at middle points.

    ``theta`` is NaN where the parent values are too close to divide by;
    ``linear_theta`` is the Euclidean position of ``q`` between its parents.
    """

    x_q: np.ndarray
    theta: np.ndarray
    level: np.ndarray
    excluded: np.ndarray
    linear_theta: np.ndarray
    addresses: tuple[Address, ...]
    reference: float

    @property
    def n_excluded(self) -> int:
        return int(self.excluded.sum())

    @property
    def max_deviation(self) -> float:
        kept = self.theta[~self.excluded]
        return float(np.max(np.abs(kept - self.reference))) if kept.size else 0.0

    def by_address(self) -> dict:
        return {a: t for a, t, e in zip(self.addresses, self.theta, self.excluded) if not e}


def theta_analysis(
    t: TraceSeries, u: VertexFunction | None = None, levels=None
) -> ThetaReport:
    """Solve ``u(q) = (1 - theta) u(x) + theta u(y)`` at each middle point ``q``.

    Only points born at one of ``levels`` are reported (default: the finest
    level of the trace).  Points with ``|u(y) - u(x)| < 1e-9 ||u||_inf`` are
    excluded and counted.
    """
    levels = {t.level} if levels is None else set(levels)
    sup = t.sup_norm if u is None else float(np.max(np.abs(u.values)))
    sel = np.flatnonzero((t.left >= 0) & np.isin(t.birth_level, list(levels)))
    fx, fy, fq = t.values[t.left[sel]], t.values[t.right[sel]], t.values[sel]
    denom = fy - fx
    excluded = np.abs(denom) < THETA_EXCLUSION * sup if sup > 0 else np.ones(len(sel), bool)
    theta = np.full(len(sel), np.nan)
    ok = ~excluded
    # theta = t + (residual of the extension rule) / denom; identical to
    # (fq - fx) / denom in exact arithmetic, but the harmonic case stays exact
    # in floating point instead of losing eps * ||u|| / |denom|
    t_ref = 1.0 / t.h**2
    predicted = (1.0 - t_ref) * fx + t_ref * fy
    theta[ok] = t_ref + (fq[ok] - predicted[ok]) / denom[ok]
    xl, xr = t.x[t.left[sel]], t.x[t.right[sel]]
    return ThetaReport(
        x_q=t.x[sel],
        theta=theta,
        level=t.birth_level[sel],
        excluded=excluded,
        linear_theta=(t.x[sel] - xl) / (xr - xl),
        addresses=tuple(t.addresses[i] for i in sel),
        reference=t_ref,
    )


def monotonicity_check(t: TraceSeries) -> tuple[bool, int | None]:
    """Whether the trace is nondecreasing, and the first index ``i`` with ``f[i+1] < f[i]``."""
    drops = np.flatnonzero(np.diff(t.values) < 0)
    if drops.size:
        return False, int(drops[0])
    return True, None


def functional_equation_check(
    fine: TraceSeries, coarse: TraceSeries, s: HarmonicStructure, p: IfsParams | None = None
) -> float:
    """Largest residual of the two-branch self-affine system for ``u|V0 = chi_1``.

    For a coarse point ``y`` with address ``(v, c)`` the fine trace is read at
    ``(11v, c)``, which sits at ``|alpha|^2 y``, and at ``(2v, c)``, at
    ``(1 - |alpha|^2) y + |alpha|^2``.  The branches demand
    ``f(|alpha|^2 y) = f(y) / h^2`` and
    ``f((1 - |alpha|^2) y + |alpha|^2) = (1 - 1/h^2) f(y) + 1/h^2``.
    """
    for tr in (fine, coarse):
        if not np.allclose(tr.boundary_values, (0.0, 0.0, 1.0), rtol=0, atol=1e-15):
            raise TraceError(f"boundary values {tr.boundary_values} are not (0, 0, 1)")
    if fine.level < coarse.level + 2:
        raise TraceError("the fine trace must be at least two levels finer")
    theta = s.theta
    worst = 0.0
    for a, fy in zip(coarse.addresses, coarse.values):
        lo = fine.values[fine.position(Address("11" + a.word, a.corner))]
        hi = fine.values[fine.position(Address("2" + a.word, a.corner))]
        worst = max(worst, abs(lo - theta * fy), abs(hi - ((1 - theta) * fy + theta)))
    if p is not None:
        # the transported points must sit where the affine maps put them
        for a, y in zip(coarse.addresses, coarse.x):
            xl = fine.x[fine.position(Address("11" + a.word, a.corner))]
            xr = fine.x[fine.position(Address("2" + a.word, a.corner))]
            if abs(xl - p.abs2 * y) > 1e-12 or abs(xr - ((1 - p.abs2) * y + p.abs2)) > 1e-12:
                raise TraceError(f"address transport of {a} disagrees with the interval maps")
    return worst
