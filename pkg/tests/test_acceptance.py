"""Acceptance criteria, one test (or one test per column) each.

Every check records a PASS/FAIL line that is printed in the terminal summary
(see ``conftest.py``).  Thresholds are the stated ones; nothing is relaxed.
Run standalone with ``python tests/test_acceptance.py`` for the lines only.
"""

import numpy as np
import pytest

from conftest import H_GRID, SQRT3, spectrum
from hata.geometry import DEFAULT_ALPHA, IfsParams, build_graph
from hata.harmonic import check_harmonicity, harmonic_from_boundary
from hata.measure import measure_weights, mu_zero
from hata.structure import HarmonicStructure, assemble_laplacian, resistance_dimension
from hata.trace import functional_equation_check, restrict_to_interval, theta_analysis
from oracles import brute_force_eigenvalues, mu_zero_lstsq

P, D = "primary", "derived"

# reference eigenvalues at m = 10 with their labels, columns h = 3/2, sqrt 3, 3
REFERENCE = {
    1.5: (
        [2.12748, 5.80965, 8.3776, 13.7502, 22.8762, 33.3334, 34.0196, 37.5447, 53.6119,
         59.5265, 91.007, 92.8821, 98.8091, 109.503, 133.249, 136.474, 146.338, 162.469,
         195.591, 213.997],
        "PDPPDPPDPPDDPPPPDDPP",
    ),
    SQRT3: (
        [10.012, 31.037, 38.7455, 83.3496, 106.366, 120.11, 193.982, 226.027, 244.389,
         322.541, 401.184, 411.618, 503.566, 580.894, 613.579, 654.576, 750.644, 783.032,
         874.566, 945.709],
        "PPDPPDPPPDPDPPPPDPDP",
    ),
    3.0: (
        [38.7802, 139.978, 255.362, 336.428, 435.129, 566.447, 741.34, 972.052, 1067.3,
         1266.44, 1623.74, 1814.55, 2248.34, 2574.77, 2909.76, 3013.28, 3299.2, 3812.6,
         4001.01, 4147.5],
        "PPPPPPPPDPPPPPPPPPDP",
    ),
}
COLUMN = {1.5: "h=3/2", SQRT3: "h=sqrt3", 3.0: "h=3"}


def _letters(labels):
    return "".join("P" if x == P else "D" if x == D else "?" for x in labels)


@pytest.mark.parametrize("h", list(REFERENCE), ids=list(COLUMN.values()))
def test_c1_reference_eigenvalues(h, acceptance):
    values, _ = REFERENCE[h]
    r = spectrum(10, h, 20)
    rel = np.abs(r.eigenvalues - values) / np.array(values)
    worst = int(rel.argmax())
    ok = acceptance(
        f"C1 eigenvalues {COLUMN[h]}",
        rel.max() <= 5e-3,
        f"max rel err {rel.max():.3e} at k={worst + 1} (got {r.eigenvalues[worst]:.6g})",
    )
    assert ok


@pytest.mark.parametrize("h", list(REFERENCE), ids=list(COLUMN.values()))
def test_c1_reference_labels(h, acceptance):
    _, want = REFERENCE[h]
    got = _letters(spectrum(10, h, 20).labels)
    diff = [k + 1 for k, (a, b) in enumerate(zip(got, want)) if a != b]
    ok = acceptance(f"C1 labels {COLUMN[h]}", got == want, f"got {got} want {want} differ at {diff}")
    assert ok


def test_c2_figure_values(acceptance):
    h = 2.0
    r = spectrum(8, h, 3)
    l1, l3 = r.eigenvalues[0], r.eigenvalues[2]
    d = resistance_dimension(h)
    r1mu1 = h ** -(d + 1)
    ratio = l3 * r1mu1 / l1
    ok = (
        abs(l1 - 9.888) / 9.888 <= 0.01
        and abs(l3 - 56.21) / 56.21 <= 0.01
        and 0.99 <= ratio <= 1.01
    )
    acceptance("C2 lambda1, lambda3 at h=2", ok, f"l1={l1:.5f} l3={l3:.5f} ratio={ratio:.6f}")
    assert ok


def test_c3_harmonicity(acceptance, rng):
    worst = 0.0
    for h in H_GRID:
        s = HarmonicStructure(h)
        for b in rng.uniform(-1, 1, size=(50, 3)):
            worst = max(worst, check_harmonicity(harmonic_from_boundary(b, 10, s), s))
    ok = acceptance("C3 harmonicity m=10", worst < 1e-10, f"max |H u| = {worst:.3e}")
    assert ok


def test_c4_linear_trace(acceptance):
    def deviation(h):
        u = harmonic_from_boundary((0, 0, 1), 10, HarmonicStructure(h))
        t = restrict_to_interval(u)
        return float(np.abs(t.values - t.x).max())

    at = deviation(1 / abs(DEFAULT_ALPHA))
    off = min(deviation(SQRT3 - 0.01), deviation(SQRT3 + 0.01))
    ok = acceptance(
        "C4 linear trace at h=1/|alpha|", at < 1e-10 and off > 1e-4, f"at={at:.2e} off={off:.2e}"
    )
    assert ok


def test_c5_harmonic_theta(acceptance, rng):
    worst = 0.0
    for h in H_GRID:
        s = HarmonicStructure(h)
        for b in [(0, 0, 1), (1, 0, 0), *rng.uniform(-1, 1, size=(5, 3))]:
            u = harmonic_from_boundary(b, 10, s)
            rep = theta_analysis(restrict_to_interval(u), u, levels=range(1, 11))
            worst = max(worst, rep.max_deviation)
    ok = acceptance("C5 harmonic theta = 1/h^2", worst < 1e-12, f"max dev {worst:.2e}")
    assert ok


def test_c6_functional_equation(acceptance):
    worst = 0.0
    for h in H_GRID:
        s = HarmonicStructure(h)
        fine = restrict_to_interval(harmonic_from_boundary((0, 0, 1), 10, s))
        coarse = restrict_to_interval(harmonic_from_boundary((0, 0, 1), 8, s))
        worst = max(worst, functional_equation_check(fine, coarse, s, IfsParams()))
    ok = acceptance("C6 functional equation m=10 vs 8", worst < 1e-12, f"max residual {worst:.2e}")
    assert ok


def _first_primary(r):
    return r.labels.index(P) + 1


def test_c7_theta_band(acceptance):
    h = 3.0
    r = spectrum(10, h, 20)
    u = r.function(_first_primary(r))
    rep = theta_analysis(restrict_to_interval(u), u)
    dev = rep.max_deviation
    i = int(np.nanargmax(np.abs(rep.theta - rep.reference)))
    ok = acceptance(
        "C7 theta band h=3 m=10",
        dev <= 0.01,
        f"max |theta-1/9| {dev:.4f} at x={rep.x_q[i]:.4f}, excluded {rep.n_excluded}",
    )
    assert ok


def test_c7_theta_level_stability(acceptance):
    h = 3.0
    coarse, fine = spectrum(9, h, 20), spectrum(10, h, 20)
    uc, uf = coarse.function(_first_primary(coarse)), fine.function(_first_primary(fine))
    rep_c = theta_analysis(restrict_to_interval(uc), uc, levels=[9]).by_address()
    rep_f = theta_analysis(restrict_to_interval(uf), uf, levels=[9]).by_address()
    common = sorted(set(rep_c) & set(rep_f))
    diff = max(abs(rep_c[a] - rep_f[a]) for a in common)
    ok = acceptance(
        "C7 theta level-9 vs level-10", diff < 0.005, f"max diff {diff:.4f} over {len(common)} points"
    )
    assert ok


def test_c8_measure(acceptance, rng):
    worst_sum = 0.0
    for h in H_GRID:
        for m in range(11):
            w = measure_weights(h, build_graph(m, IfsParams(), h))
            worst_sum = max(worst_sum, abs(w.per_vertex.sum() - 1))
    worst_mu0 = 0.0
    for h in rng.uniform(1.0, 10.0, size=100):
        h = float(max(h, 1.0 + 1e-6))
        err = np.abs(np.array(mu_zero(h)) - mu_zero_lstsq(h, resistance_dimension(h))).max()
        worst_mu0 = max(worst_mu0, err)
    ok = acceptance(
        "C8 measure sanity",
        worst_sum < 1e-10 and worst_mu0 < 1e-12,
        f"sum err {worst_sum:.1e}, mu0 err {worst_mu0:.1e}",
    )
    assert ok


def test_c9_small_oracle(acceptance):
    worst = 0.0
    for h in H_GRID:
        got = spectrum(2, h, 6).eigenvalues
        want = brute_force_eigenvalues(2, DEFAULT_ALPHA, h)
        worst = max(worst, float(np.max(np.abs(got - want) / want)))
    ok = acceptance("C9 m=2 brute-force oracle", worst < 1e-10, f"max rel err {worst:.1e}")
    assert ok


def test_c10_structural(acceptance, rng):
    problems = []
    for m in range(13):
        g = build_graph(m)
        deg = g.degrees
        if g.n_vertices != 2 ** (m + 1) + 1 or len(g.boundary_ids) != 3:
            problems.append(f"count m={m}")
        if list(np.flatnonzero(deg == 2)) != [1] or set(deg) - {1, 2, 3}:
            problems.append(f"degrees m={m}")
        if np.sum(deg == 3) != 2**m - 1:
            problems.append(f"degree-3 count m={m}")
    schur = 0.0
    for h in H_GRID:
        s = HarmonicStructure(h)
        H = assemble_laplacian(build_graph(1, IfsParams(), h)).matrix.toarray()
        for b in rng.uniform(-1, 1, size=(50, 3)):
            want = -np.linalg.solve(H[3:, 3:], H[3:, :3] @ b)
            schur = max(schur, np.abs(harmonic_from_boundary(b, 1, s).values[3:] - want).max())
    orth = 0.0
    for h in H_GRID:
        r = spectrum(10, h, 20)
        G = (r.eigenvectors * r.mass) @ r.eigenvectors.T
        orth = max(orth, np.abs(G - np.eye(len(r))).max())
    ok = acceptance(
        "C10 structural invariants",
        not problems and schur < 1e-12 and orth < 1e-8,
        f"schur {schur:.1e}, orthogonality {orth:.1e}, issues {problems or 'none'}",
    )
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
