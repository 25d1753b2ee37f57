"""Vertex sets, addresses and cell structure of the Hata tree set.

The set is the attractor of ``F1(z) = alpha * conj(z)`` and
``F2(z) = (1 - |alpha|^2) * conj(z) + |alpha|^2``.  Boundary points are
``p0 = alpha``, ``p1 = 0`` and ``p2 = 1``.  A vertex ``p_{wi} = F_w(p_i)`` is
named by an :class:`Address` ``(word, corner)``; different names for the same
point are collapsed by :func:`canonicalize`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

import numpy as np

DEFAULT_ALPHA = complex(0.5, math.sqrt(3.0) / 6.0)

# |Im z| threshold for the on-axis filter; coordinates are O(1).
ON_AXIS_TOL = 1e-9


class AdmissibilityError(ValueError):
    """Raised for parameters outside the admissible range."""


@dataclass(frozen=True)
class IfsParams:
    """Parameter ``alpha`` of the two-map IFS."""

    alpha: complex = DEFAULT_ALPHA
    abs2: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        alpha = complex(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "abs2", abs(alpha) ** 2)
        if not (0.0 < abs(alpha) < 1.0 and 0.0 < abs(1.0 - alpha) < 1.0):
            raise AdmissibilityError(
                f"alpha={alpha!r} is not admissible: need 0 < |alpha|, |1 - alpha| < 1"
            )

    def f1(self, z: complex) -> complex:
        return self.alpha * z.conjugate()

    def f2(self, z: complex) -> complex:
        return (1.0 - self.abs2) * z.conjugate() + self.abs2

    @property
    def corners(self) -> tuple[complex, complex, complex]:
        return (self.alpha, 0j, 1 + 0j)


@dataclass(frozen=True, order=True)
class Address:
    """A vertex name ``p_{word corner}``; ``word`` is a string over ``"12"``."""

    word: str
    corner: int

    def __str__(self) -> str:
        return f"{self.word}:{self.corner}"

    @classmethod
    def parse(cls, text: str) -> "Address":
        word, _, corner = text.partition(":")
        return cls(word, int(corner))

    @property
    def birth_level(self) -> int:
        """Level at which the point first appears (valid for canonical addresses)."""
        return len(self.word)


def canonicalize(raw: Address) -> Address:
    """Return the canonical name of the point ``raw`` denotes.

    The identifications used are

    * ``(w1, 2) = (w, 0)``  since ``F1(1) = alpha``,
    * ``(w1, 1) = (w, 1)``  since 0 is fixed by ``F1``,
    * ``(w2, 2) = (w, 2)``  since 1 is fixed by ``F2``,
    * ``(w2, 1) = (w1, 0)`` since ``F2(0) = F1(alpha) = |alpha|^2``.

    The result is written at the point's birth level and is the
    lexicographically smallest name available there.

    Examples
    --------
    >>> canonicalize(Address("12", 2))
    Address(word='', corner=0)
    >>> canonicalize(Address("21", 1))
    Address(word='1', corner=0)
    """
    word, corner = raw.word, raw.corner
    if corner not in (0, 1, 2):
        raise ValueError(f"corner must be 0, 1 or 2, got {corner}")
    while word:
        last = word[-1]
        if corner == 0:
            break
        if corner == 1 and last == "2":
            word, corner = word[:-1] + "1", 0
            break
        if corner == 2 and last == "1":
            word, corner = word[:-1], 0
        else:
            # (w1, 1) -> (w, 1) and (w2, 2) -> (w, 2)
            word = word[:-1]
    return Address(word, corner)


def coordinate(a: Address, p: IfsParams) -> complex:
    """Euclidean position ``F_{w1} o ... o F_{wm}(p_corner)`` as a complex number."""
    z = p.corners[a.corner]
    for digit in reversed(a.word):
        z = p.f1(z) if digit == "1" else p.f2(z)
    return z


def words(m: int) -> Iterator[str]:
    """All words of length ``m`` in lexicographic order."""
    for letters in product("12", repeat=m):
        yield "".join(letters)


def resistance_weights(h: float) -> tuple[float, float]:
    """``(r1, r2) = (1/h, 1 - 1/h^2)``."""
    return 1.0 / h, 1.0 - 1.0 / h**2


def check_h(h: float) -> float:
    h = float(h)
    if not h > 1.0 or not math.isfinite(h):
        raise AdmissibilityError(f"h must exceed 1 (got {h})")
    return h


@dataclass(frozen=True, eq=False)
class VertexGraph:
    """Level-``m`` approximation ``V_m`` with conductance-weighted edges.

    Vertex ids are nested: the first ``|V_k|`` vertices of the level-``m``
    graph are exactly ``V_k`` in the same order, for every ``k <= m``.
    Cells are stored in lexicographic word order, so the children of cell
    ``i`` at the next level are cells ``2i`` and ``2i + 1``.
    """

    level: int
    params: IfsParams
    h: float
    addresses: tuple[Address, ...]
    coords: np.ndarray  # complex, (n,)
    is_boundary: np.ndarray  # bool, (n,)
    on_unit_interval: np.ndarray  # bool, (n,)
    birth_level: np.ndarray  # int, (n,)
    edges: np.ndarray  # int, (2 * n_cells, 2)
    conductance: np.ndarray  # float, (2 * n_cells,)
    cell_words: tuple[str, ...]
    cells: np.ndarray  # int, (n_cells, 3): ids of p_{w0}, p_{w1}, p_{w2}
    cell_ones: np.ndarray  # int, number of digit 1 in each cell word
    index: dict = field(repr=False)  # Address -> vertex id

    @property
    def n_vertices(self) -> int:
        return len(self.addresses)

    @property
    def boundary_ids(self) -> np.ndarray:
        return np.flatnonzero(self.is_boundary)

    @property
    def interior_ids(self) -> np.ndarray:
        return np.flatnonzero(~self.is_boundary)

    def vertex_id(self, a: Address) -> int:
        return self.index[canonicalize(a)]

    @functools.cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour ids of every vertex."""
        nbrs: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            nbrs[u].append(int(v))
            nbrs[v].append(int(u))
        return tuple(tuple(sorted(n)) for n in nbrs)

    @property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n_vertices)


def _on_axis(z: np.ndarray) -> np.ndarray:
    return (np.abs(z.imag) <= ON_AXIS_TOL) & (z.real >= -ON_AXIS_TOL) & (z.real <= 1 + ON_AXIS_TOL)


@functools.lru_cache(maxsize=64)
def _vertex_skeleton(m: int) -> tuple[tuple[Address, ...], tuple[str, ...], np.ndarray]:
    """Canonical vertex list and cell corner ids at level ``m`` (h and alpha free)."""
    addresses = [Address("", 0), Address("", 1), Address("", 2)]
    for k in range(1, m + 1):
        for w in words(k - 1):
            addresses.append(Address(w + "1", 0))
            addresses.append(Address(w + "2", 0))
    index = {a: i for i, a in enumerate(addresses)}
    cell_words = tuple(words(m))
    cells = np.array(
        [[index[canonicalize(Address(w, c))] for c in range(3)] for w in cell_words],
        dtype=np.int64,
    )
    return tuple(addresses), cell_words, cells


@functools.lru_cache(maxsize=64)
def build_graph(m: int, p: IfsParams = IfsParams(), h: float = 2.0) -> VertexGraph:
    """Build the level-``m`` graph for parameters ``alpha`` and ``h``.

    Each cell ``w`` contributes the edge ``(p_{w0}, p_{w1})`` with conductance
    ``h / r_w`` and ``(p_{w1}, p_{w2})`` with conductance ``1 / r_w``.
    """
    if m < 0:
        raise ValueError("level must be non-negative")
    h = check_h(h)
    r1, r2 = resistance_weights(h)
    addresses, cell_words, cells = _vertex_skeleton(m)
    n = len(addresses)

    coords = np.array([coordinate(a, p) for a in addresses], dtype=complex)
    birth = np.array([a.birth_level for a in addresses], dtype=np.int64)
    is_boundary = birth == 0
    on01 = _on_axis(coords)
    coords_out = coords.copy()
    coords_out[on01] = coords[on01].real

    ones = np.array([w.count("1") for w in cell_words], dtype=np.int64)
    r_w = r1**ones * r2 ** (m - ones)
    edges = np.empty((2 * len(cell_words), 2), dtype=np.int64)
    edges[0::2] = cells[:, [0, 1]]
    edges[1::2] = cells[:, [1, 2]]
    conductance = np.empty(2 * len(cell_words))
    conductance[0::2] = h / r_w
    conductance[1::2] = 1.0 / r_w

    for arr in (coords_out, is_boundary, on01, birth, edges, conductance, cells, ones):
        arr.setflags(write=False)
    return VertexGraph(
        level=m,
        params=p,
        h=h,
        addresses=addresses,
        coords=coords_out,
        is_boundary=is_boundary,
        on_unit_interval=on01,
        birth_level=birth,
        edges=edges,
        conductance=conductance,
        cell_words=cell_words,
        cells=cells,
        cell_ones=ones,
        index={a: i for i, a in enumerate(addresses)},
    )


def to_json(g: VertexGraph) -> dict:
    """Mesh export payload."""
    vertices = [
        {
            "id": i,
            "address": str(a),
            "x": float(g.coords[i].real),
            "y": float(g.coords[i].imag),
            "boundary": bool(g.is_boundary[i]),
            "on01": bool(g.on_unit_interval[i]),
            "birth_level": int(g.birth_level[i]),
        }
        for i, a in enumerate(g.addresses)
    ]
    edges = [
        {"u": int(u), "v": int(v), "conductance": float(c)}
        for (u, v), c in zip(g.edges, g.conductance)
    ]
    return {
        "level": g.level,
        "alpha": [g.params.alpha.real, g.params.alpha.imag],
        "h": g.h,
        "vertices": vertices,
        "edges": edges,
    }

