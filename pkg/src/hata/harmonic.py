"""Harmonic extension on the Hata set and piecewise-harmonic splines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import IfsParams, VertexGraph, build_graph
from .structure import HarmonicStructure

TAGS = ("harmonic", "m-harmonic-spline", "eigenfunction", "generic")


@dataclass(frozen=True, eq=False)
class VertexFunction:
    """Real values on every vertex of ``graph`` (indexed by vertex id)."""

    graph: VertexGraph
    values: np.ndarray
    tag: str = "generic"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.graph.n_vertices,):
            raise ValueError(
                f"expected {self.graph.n_vertices} values, got shape {values.shape}"
            )
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")
        object.__setattr__(self, "values", values)

    @property
    def level(self) -> int:
        return self.graph.level

    @property
    def boundary_values(self) -> tuple[float, float, float]:
        a, b, c = self.values[:3]
        return float(a), float(b), float(c)

    def __getitem__(self, address) -> float:
        return float(self.values[self.graph.vertex_id(address)])


def _same_structure(g: VertexGraph, s: HarmonicStructure) -> None:
    if g.h != s.h:
        raise ValueError(f"graph built for h={g.h}, structure has h={s.h}")


def extend_once(u: VertexFunction, s: HarmonicStructure) -> VertexFunction:
    """Extend ``u`` from ``V_m`` to ``V_{m+1}`` cell by cell.

    In each cell the two new vertices get
    ``u(p_{w10}) = u(p_{w20}) = (1 - 1/h^2) u(p_{w1}) + (1/h^2) u(p_{w2})``.
    """
    g = u.graph
    _same_structure(g, s)
    nxt = build_graph(g.level + 1, g.params, g.h)
    out = np.empty(nxt.n_vertices)
    out[: g.n_vertices] = u.values
    new = (1.0 - s.theta) * u.values[g.cells[:, 1]] + s.theta * u.values[g.cells[:, 2]]
    out[nxt.cells[0::2, 0]] = new
    out[nxt.cells[1::2, 0]] = new
    return VertexFunction(nxt, out, u.tag)


def extend_data(u: VertexFunction, target: int, s: HarmonicStructure) -> VertexFunction:
    """Piecewise-harmonic extension of level-``m`` data to level ``target > m``."""
    if target <= u.level:
        raise ValueError(f"target level {target} must exceed {u.level}")
    while u.level < target:
        u = extend_once(u, s)
    return u


def harmonic_from_boundary(
    b, m: int, s: HarmonicStructure, p: IfsParams = IfsParams()
) -> VertexFunction:
    """Harmonic function on ``V_m`` with values ``b = (u(alpha), u(0), u(1))``."""
    b = np.asarray(b, dtype=float)
    if b.shape != (3,):
        raise ValueError("boundary data must be a triple (u(alpha), u(0), u(1))")
    u = VertexFunction(build_graph(0, p, s.h), b, "harmonic")
    if m == 0:
        return u
    return extend_data(u, m, s)


def spline(g: VertexGraph, vertex: int) -> VertexFunction:
    """The level-``m`` spline ``psi_p^m`` sampled on ``V_m`` (an indicator)."""
    values = np.zeros(g.n_vertices)
    values[vertex] = 1.0
    return VertexFunction(g, values, "m-harmonic-spline")


def check_harmonicity(u: VertexFunction, s: HarmonicStructure) -> float:
    """Largest ``|H_m u(p)|`` over non-boundary vertices."""
    g = u.graph
    _same_structure(g, s)
    # edge-difference form: exactly zero on constants, unlike the row-sum form
    a, b = g.edges[:, 0], g.edges[:, 1]
    flow = g.conductance * (u.values[b] - u.values[a])
    acc = np.zeros(g.n_vertices)
    np.add.at(acc, a, flow)
    np.add.at(acc, b, -flow)
    r = acc[g.interior_ids]
    return float(np.max(np.abs(r))) if r.size else 0.0


def descend(corner_values: np.ndarray, digits: np.ndarray, theta: float) -> np.ndarray:
    """Follow the extension rule down a batch of words.

    ``corner_values`` has shape ``(n, 3)`` (values at ``p_{w0}, p_{w1}, p_{w2}``
    of a starting cell); ``digits`` has shape ``(n, k)`` with entries 1 or 2.
    Returns the corner values of the cell reached after ``k`` further letters.
    """
    vals = np.array(corner_values, dtype=float, copy=True)
    for j in range(digits.shape[1]):
        new = (1.0 - theta) * vals[:, 1] + theta * vals[:, 2]
        one = digits[:, j] == 1
        # child w1 corners: (new, p_{w1}, p_{w0}); child w2: (new, new, p_{w2})
        nxt = np.empty_like(vals)
        nxt[:, 0] = new
        nxt[:, 1] = np.where(one, vals[:, 1], new)
        nxt[:, 2] = np.where(one, vals[:, 0], vals[:, 2])
        vals = nxt
    return vals
