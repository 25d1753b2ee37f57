"""Harmonic structure ``(D, r)`` and the graph Laplacians ``H_m``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import sparse

from .geometry import IfsParams, VertexGraph, check_h, resistance_weights


@dataclass(frozen=True)
class HarmonicStructure:
    """The one-parameter family of regular harmonic structures, ``h > 1``."""

    h: float

    def __post_init__(self):
        object.__setattr__(self, "h", check_h(self.h))

    @property
    def r1(self) -> float:
        return resistance_weights(self.h)[0]

    @property
    def r2(self) -> float:
        return resistance_weights(self.h)[1]

    @property
    def D(self) -> np.ndarray:
        """Boundary Laplacian in the basis ``(chi_alpha, chi_0, chi_1)``."""
        h = self.h
        return np.array([[-h, h, 0.0], [h, -(h + 1.0), 1.0], [0.0, 1.0, -1.0]])

    @property
    def theta(self) -> float:
        """Weight ``1/h^2`` of the far endpoint in the extension rule."""
        return 1.0 / self.h**2


@dataclass(frozen=True, eq=False)
class LaplacianMatrix:
    level: int
    matrix: sparse.csr_matrix
    boundary: np.ndarray
    interior: np.ndarray

    def interior_block(self) -> sparse.csr_matrix:
        return self.matrix[self.interior][:, self.interior]

    def apply(self, u: np.ndarray) -> np.ndarray:
        return self.matrix @ u


def assemble_laplacian(g: VertexGraph) -> LaplacianMatrix:
    """Weighted graph Laplacian ``H_m``: off-diagonals are conductances, rows sum to zero."""
    n = g.n_vertices
    u, v = g.edges[:, 0], g.edges[:, 1]
    c = g.conductance
    rows = np.concatenate([u, v, u, v])
    cols = np.concatenate([v, u, u, v])
    vals = np.concatenate([c, c, -c, -c])
    H = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    H.sum_duplicates()
    return LaplacianMatrix(g.level, H, g.boundary_ids, g.interior_ids)


def _solve_decreasing(f: Callable[[float], float], df: Callable[[float], float]) -> float:
    # f strictly decreasing with f(0) = 1 > 0; find a sign change, bisect, polish.
    lo, hi = 0.0, 1.0
    while f(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
    while hi - lo > 1e-14 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    step = f(d) / df(d)
    if abs(step) < hi - lo + 1e-14:
        d -= step
    return d


def _similarity_dimension(a: float, b: float) -> float:
    """Root ``d`` of ``a^d + b^d = 1`` for ratios ``a, b`` in ``(0, 1)``."""
    la, lb = math.log(a), math.log(b)
    return _solve_decreasing(
        lambda d: a**d + b**d - 1.0,
        lambda d: la * a**d + lb * b**d,
    )


def resistance_dimension(h: float) -> float:
    """Dimension ``d`` in the effective resistance metric: ``(1/h)^d + (1 - 1/h^2)^d = 1``."""
    r1, r2 = resistance_weights(check_h(h))
    return _similarity_dimension(r1, r2)


def euclidean_dimension(p: IfsParams) -> float:
    """Similarity dimension with contraction ratios ``|alpha|`` and ``1 - |alpha|^2``."""
    return _similarity_dimension(math.sqrt(p.abs2), 1.0 - p.abs2)
