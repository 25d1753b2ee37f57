"""Self-similar measure with weights ``r_i^d`` and the spline integrals ``mu_p^m``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import VertexGraph
from .structure import HarmonicStructure, resistance_dimension


@dataclass(frozen=True, eq=False)
class MeasureWeights:
    """Cell weights ``mu1, mu2``, boundary integrals ``mu0`` and per-vertex ``mu_p^m``.

    ``mu0`` is ordered like the boundary ``(alpha, 0, 1)``.  ``per_vertex``
    is indexed by vertex id of the graph it was computed on (``None`` until
    :func:`measure_weights` is given a graph).
    """

    d: float
    mu1: float
    mu2: float
    mu0: tuple[float, float, float]
    per_vertex: np.ndarray | None = None

    def cell_mass(self, g: VertexGraph) -> np.ndarray:
        """``mu_w`` for every cell of ``g``."""
        return self.mu1**g.cell_ones * self.mu2 ** (g.level - g.cell_ones)


def mu_zero(h: float, d: float | None = None) -> tuple[float, float, float]:
    """Closed-form integrals ``(mu_alpha^0, mu_0^0, mu_1^0)`` of the level-0 splines."""
    s = HarmonicStructure(h)
    if d is None:
        d = resistance_dimension(s.h)
    mu1, mu2 = s.r1**d, s.r2**d
    num = np.array([mu1 * mu2, (s.h**2 - 1.0) * mu1, mu2])
    a, b, c = num / num.sum()
    return float(a), float(b), float(c)


def mu_vertex(g: VertexGraph, w: MeasureWeights) -> np.ndarray:
    """``mu_p^m = sum over cells K_w containing p of mu_w * mu^0_{corner of p in w}``."""
    acc = np.zeros(g.n_vertices)
    mass = w.cell_mass(g)
    for corner in range(3):
        np.add.at(acc, g.cells[:, corner], mass * w.mu0[corner])
    return acc


def measure_weights(
    h: float, g: VertexGraph | None = None, d: float | None = None
) -> MeasureWeights:
    """Weights for the structure ``h``, with ``mu_p^m`` filled in when ``g`` is given.

    ``d`` overrides the exponent of the cell weights ``mu_i = r_i^d``.  Any
    value other than the resistance dimension gives ``mu1 + mu2 != 1``, so the
    result is no longer a probability measure; the override exists only to
    study how the spectrum depends on the measure.
    """
    s = HarmonicStructure(h)
    if d is None:
        d = resistance_dimension(s.h)
    base = MeasureWeights(d, s.r1**d, s.r2**d, mu_zero(s.h, d))
    if g is None:
        return base
    if g.h != s.h:
        raise ValueError(f"graph built for h={g.h}, weights requested for h={s.h}")
    per_vertex = mu_vertex(g, base)
    per_vertex.setflags(write=False)
    return MeasureWeights(base.d, base.mu1, base.mu2, base.mu0, per_vertex)
