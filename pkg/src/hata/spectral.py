"""Dirichlet spectrum of the discrete Laplacian ``(1/mu_p^m) H_m``.

The generalized problem ``(-H) u = lam * diag(mu) u`` on interior vertices is
reduced to the symmetric matrix ``diag(mu)^-1/2 (-H) diag(mu)^-1/2`` and
solved densely.  For large ``h`` the scaled matrix is strongly graded and
the dense solver only delivers an absolute accuracy of ``eps * ||A||``; the
pairs are then polished by subspace iteration with a sparse factorization of
``-H`` followed by Rayleigh-Ritz, which is deterministic as well.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla
from scipy.sparse import csgraph
from scipy.sparse.linalg import splu

from .geometry import Address, IfsParams, VertexGraph, build_graph, canonicalize
from .harmonic import VertexFunction
from .measure import MeasureWeights, measure_weights
from .structure import HarmonicStructure, assemble_laplacian

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
SUPPORT_TOL = 1e-8
CLUSTER_GAP = 1e-6

PRIMARY, DERIVED, INDETERMINATE = "primary", "derived", "indeterminate"


class SpectralError(RuntimeError):
    """The eigensolver did not reach the residual tolerance."""

    def __init__(self, message: str, residuals: np.ndarray):
        super().__init__(message)
        self.residuals = residuals


@dataclass(frozen=True, eq=False)
class PairEntry:
    derived_k: int  # 1-based
    primary_k: int | None
    predicted: float | None  # lam_derived * r1 * mu1
    mismatch: float | None  # |predicted - lam_primary| / lam_primary


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Lowest Dirichlet eigenpairs on one level.

    ``eigenvectors[k]`` holds the ``k``-th eigenfunction on all of ``V_m``
    (zero on the boundary), normalized so that ``sum mu_p u(p)^2 = 1``
    with its largest-magnitude entry positive.
    """

    graph: VertexGraph
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    mass: np.ndarray  # mu_p^m used for the solve, on all of V_m
    labels: tuple[str, ...] | None = None
    l_fraction: np.ndarray | None = None
    clusters: tuple[tuple[int, ...], ...] = ()
    pairing: tuple[PairEntry, ...] | None = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def function(self, k: int) -> VertexFunction:
        """Eigenfunction ``k`` (1-based) as a vertex function."""
        return VertexFunction(self.graph, self.eigenvectors[k - 1], "eigenfunction")


def _fix_signs(U: np.ndarray) -> np.ndarray:
    # U has eigenvectors as columns
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[idx, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs


def _residuals(K, mu: np.ndarray, lam: np.ndarray, U: np.ndarray) -> np.ndarray:
    """``||K u - lam mu u||_inf / (lam ||u||_inf)`` per column."""
    if U.shape[1] == 0:
        return np.zeros(0)
    R = K @ U - U * lam * mu[:, None]
    return np.abs(R).max(axis=0) / (lam * np.abs(U).max(axis=0))


def _rayleigh_ritz(K, mu: np.ndarray, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    Kr = Z.T @ (K @ Z)
    Mr = Z.T @ (mu[:, None] * Z)
    Kr = 0.5 * (Kr + Kr.T)
    Mr = 0.5 * (Mr + Mr.T)
    theta, C = sla.eigh(Kr, Mr)
    return theta, Z @ C


def solve_dirichlet(
    g: VertexGraph,
    s: HarmonicStructure,
    w: MeasureWeights,
    count: int,
    max_refine: int = 40,
) -> SpectralResult:
    """The ``count`` smallest Dirichlet eigenpairs of ``-Delta_m`` on ``g``."""
    if g.h != s.h:
        raise ValueError(f"graph built for h={g.h}, structure has h={s.h}")
    if w.per_vertex is None or len(w.per_vertex) != g.n_vertices:
        raise ValueError("measure weights were not computed on this graph")
    lap = assemble_laplacian(g)
    interior = lap.interior
    n = len(interior)
    if count < 0 or count > n:
        raise ValueError(f"count must be in [0, {n}] at level {g.level}, got {count}")
    if count == 0:
        empty = np.zeros((0, g.n_vertices))
        return SpectralResult(g, np.zeros(0), empty, np.zeros(0), w.per_vertex)

    K = (-lap.interior_block()).tocsc()
    mu = np.asarray(w.per_vertex)[interior]
    scale = 1.0 / np.sqrt(mu)
    A = scale[:, None] * K.toarray() * scale[None, :]
    block = min(n, count + max(8, count // 2))
    lam, Y = sla.eigh(A, subset_by_index=[0, block - 1])
    U = Y * scale[:, None]

    res = _residuals(K, mu, lam[:count], U[:, :count])
    if res.max() > RESIDUAL_TOL:
        lu = splu(K)
        for it in range(max_refine):
            Z = lu.solve(mu[:, None] * U)
            lam, U = _rayleigh_ritz(K, mu, Z)
            res = _residuals(K, mu, lam[:count], U[:, :count])
            if res.max() <= RESIDUAL_TOL:
                log.debug("refined eigenpairs in %d subspace iterations", it + 1)
                break
        else:
            raise SpectralError(
                f"eigensolver residual {res.max():.3e} exceeds {RESIDUAL_TOL:g} * lambda",
                res,
            )

    U = _fix_signs(U[:, :count])
    U = U / np.sqrt(np.sum(mu[:, None] * U**2, axis=0))
    # Rayleigh quotients of the normalized vectors are at least as accurate as
    # the dense eigenvalues, whose absolute error scales with ||A||
    lam = np.einsum("ik,ik->k", U, K @ U)
    res = _residuals(K, mu, lam, U)
    vectors = np.zeros((count, g.n_vertices))
    vectors[:, interior] = U.T
    return SpectralResult(g, lam, vectors, res, w.per_vertex)


def interior_components(g: VertexGraph) -> tuple[np.ndarray, int]:
    """Component id per vertex after deleting ``V_0`` (boundary gets -1), and the id of L.

    L is the component containing the critical point ``|alpha|^2``.
    """
    interior = g.interior_ids
    sub = assemble_laplacian(g).matrix[interior][:, interior]
    _, comp = csgraph.connected_components(sub, directed=False)
    labels = np.full(g.n_vertices, -1)
    labels[interior] = comp
    critical = g.vertex_id(Address("1", 0)) if g.level >= 1 else None
    l_id = int(labels[critical]) if critical is not None else -1
    return labels, l_id


def _clusters(lam: np.ndarray) -> tuple[tuple[int, ...], ...]:
    groups, current = [], [0]
    for i in range(1, len(lam)):
        if lam[i] - lam[i - 1] < CLUSTER_GAP * lam[i]:
            current.append(i)
        else:
            groups.append(current)
            current = [i]
    groups.append(current)
    return tuple(tuple(k + 1 for k in c) for c in groups if len(c) > 1)


def classify_support(r: SpectralResult, g: VertexGraph | None = None) -> SpectralResult:
    """Label each eigenfunction as primary (L-supported) or derived (M-supported).

    The fraction of the squared ``mu``-norm carried by L decides the label;
    a split worse than ``1 - 1e-8`` either way is ``indeterminate``.
    Clusters of numerically equal eigenvalues are recorded, since the basis
    inside a cluster (and therefore the split) is arbitrary.
    """
    g = r.graph if g is None else g
    if len(r) == 0:
        return replace(r, labels=(), l_fraction=np.zeros(0), clusters=())
    comp, l_id = interior_components(g)
    mu = r.mass
    in_l = comp == l_id
    mass = mu[None, :] * r.eigenvectors**2
    frac = mass[:, in_l].sum(axis=1) / mass.sum(axis=1)
    labels = tuple(
        PRIMARY if f >= 1 - SUPPORT_TOL else DERIVED if f <= SUPPORT_TOL else INDETERMINATE
        for f in frac
    )
    clusters = _clusters(r.eigenvalues)
    for c in clusters:
        log.warning("eigenvalues %s are clustered; their support split is basis dependent", c)
    return replace(r, labels=labels, l_fraction=frac, clusters=clusters)


def transport_from_k1(phi: VertexFunction) -> VertexFunction:
    """``chi_{K_1} * phi o F_1^{-1}`` on the next level, by address.

    A vertex of ``V_{m+1}`` whose canonical word starts with 1 takes the
    value of ``phi`` at the address obtained by dropping that digit; every
    other vertex gets 0.
    """
    g = phi.graph
    nxt = build_graph(g.level + 1, g.params, g.h)
    out = np.zeros(nxt.n_vertices)
    for i, a in enumerate(nxt.addresses):
        if a.word.startswith("1"):
            out[i] = phi.values[g.index[canonicalize(Address(a.word[1:], a.corner))]]
    return VertexFunction(nxt, out, phi.tag)


def rayleigh_quotient(u: VertexFunction, w: MeasureWeights | None = None) -> float:
    """``u^T (-H) u / u^T diag(mu) u`` on the graph of ``u``."""
    g = u.graph
    if w is None or w.per_vertex is None or len(w.per_vertex) != g.n_vertices:
        w = measure_weights(g.h, g)
    lap = assemble_laplacian(g)
    x = u.values.copy()
    x[lap.boundary] = 0.0
    return float(-(x @ lap.apply(x)) / (x @ (w.per_vertex * x)))


def derive_eigenfunction(
    r: SpectralResult, k: int, s: HarmonicStructure, w: MeasureWeights
) -> tuple[VertexFunction, float]:
    """Derived eigenfunction of primary pair ``k`` and its predicted eigenvalue ``lam / (r1 mu1)``."""
    if r.labels is None:
        raise ValueError("classify the spectrum before deriving eigenfunctions")
    if r.labels[k - 1] != PRIMARY:
        raise ValueError(f"eigenfunction {k} is {r.labels[k - 1]}, not primary")
    phi = transport_from_k1(r.function(k))
    return phi, float(r.eigenvalues[k - 1] / (s.r1 * w.mu1))


def pair_spectrum(r: SpectralResult, s: HarmonicStructure, w: MeasureWeights) -> SpectralResult:
    """Match each derived eigenvalue with the primary closest to ``lam_d * r1 * mu1``.

    Diagnostic only: the relative mismatch is reported, never asserted.
    """
    if r.labels is None:
        raise ValueError("classify the spectrum before pairing")
    factor = s.r1 * w.mu1
    primaries = [i for i, lab in enumerate(r.labels) if lab == PRIMARY]
    entries = []
    for i, lab in enumerate(r.labels):
        if lab != DERIVED:
            continue
        target = r.eigenvalues[i] * factor
        if not primaries:
            entries.append(PairEntry(i + 1, None, float(target), None))
            continue
        lam_p = r.eigenvalues[primaries]
        mism = np.abs(target - lam_p) / lam_p
        j = int(np.argmin(mism))
        entries.append(PairEntry(i + 1, primaries[j] + 1, float(target), float(mism[j])))
    return replace(r, pairing=tuple(entries))


def dirichlet_spectrum(
    m: int,
    h: float,
    count: int,
    params: IfsParams | None = None,
    classify: bool = True,
    measure_exponent: float | None = None,
) -> SpectralResult:
    """Convenience pipeline: build, solve, classify and pair."""
    params = IfsParams() if params is None else params
    s = HarmonicStructure(h)
    g = build_graph(m, params, s.h)
    w = measure_weights(s.h, g, d=measure_exponent)
    r = solve_dirichlet(g, s, w, count)
    if classify:
        r = pair_spectrum(classify_support(r, g), s, w)
    return r
