"""Exact-diagonalization oracles in truncated product Fock bases.

These builders transcribe the Hamiltonians term by term, with no displaced
frame and no rotating truncation, so they serve as an independent check on
the block machinery.  Basis ordering everywhere: photon number outermost,
then pseudomode number, then the two qubit labels lexicographically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .fockspace import trwa_block_energies
from .model import CoefficientMode, ModelParams, TrwaParams, constant_offset
from .numerics import SymmetricMatrix, eigvals_sym, sym_set
from .reservoir import ReservoirParams
from .resonance import design_resonant

# sigma-z product labels, lexicographic: e < g, e -> +1, g -> -1
_ZLABELS = (("e", "e"), ("e", "g"), ("g", "e"), ("g", "g"))
_ZSIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
# sigma-x product labels: + before -
_XLABELS = (("+", "+"), ("+", "-"), ("-", "+"), ("-", "-"))
_XSIGNS = _ZSIGNS


@dataclass(frozen=True)
class ProductBasisState:
    """|n, q1, q2> with qubit labels in the sigma-z eigenbasis {e, g}
    (or the sigma-x basis {+, -} where a builder states so)."""
    n: int
    q1: str
    q2: str

    def ket(self) -> str:
        return f"|{self.n},{self.q1},{self.q2}>"


def _check_truncation(n_max: int) -> None:
    if n_max < 4:
        raise ValueError(f"truncation n_max={n_max} too small (need >= 4)")


def build_full_rabi(p: ModelParams, n_max: int) -> SymmetricMatrix:
    """Untransformed Hamiltonian in the sigma-z product Fock basis.

    omega a^dag a + g1 sx1 (a + a^dag) + g2 sx2 (a + a^dag)
    + delta1 sz1 + delta2 sz2, truncated at n_max photons.
    Dimension 4 (n_max + 1).
    """
    _check_truncation(n_max)
    dim = 4 * (n_max + 1)
    arr = np.zeros((dim, dim))
    labels = []
    for n in range(n_max + 1):
        for k, (z1, z2) in enumerate(_ZSIGNS):
            i = 4 * n + k
            labels.append(f"|{n},{_ZLABELS[k][0]},{_ZLABELS[k][1]}>")
            arr[i, i] = p.omega * n + p.delta1 * z1 + p.delta2 * z2
            if n < n_max:
                root = math.sqrt(n + 1.0)
                # sx1 flips q1: (e,q2) <-> (g,q2)
                j = 4 * (n + 1) + (k ^ 2)
                sym_set(arr, i, j, p.g1 * root)
                # sx2 flips q2
                j = 4 * (n + 1) + (k ^ 1)
                sym_set(arr, i, j, p.g2 * root)
    return SymmetricMatrix(arr, tuple(labels))


def build_rotated_rabi(p: ModelParams, n_max: int) -> SymmetricMatrix:
    """Qubit-rotated Hamiltonian in the sigma-x labeled product basis.

    The rotation swaps the roles of the qubit operators: couplings become
    -g_i sz_i (a + a^dag) and splittings delta_i sx_i.  With the qubits
    labeled by sigma-x eigenvalues s = +/-1 the splittings sit on the
    diagonal and each coupling flips one label with amplitude
    -g_i sqrt(n+1).  The spectrum is identical to build_full_rabi at the
    same truncation (the rotation commutes with the photon cutoff), but
    the matrix differs entrywise.  Every basis state has the definite
    parity (-1)^n s1 s2.
    """
    _check_truncation(n_max)
    dim = 4 * (n_max + 1)
    arr = np.zeros((dim, dim))
    labels = []
    for n in range(n_max + 1):
        for k, (s1, s2) in enumerate(_XSIGNS):
            i = 4 * n + k
            labels.append(f"|{n},{_XLABELS[k][0]},{_XLABELS[k][1]}>")
            arr[i, i] = p.omega * n + p.delta1 * s1 + p.delta2 * s2
            if n < n_max:
                root = math.sqrt(n + 1.0)
                sym_set(arr, i, 4 * (n + 1) + (k ^ 2), -p.g1 * root)
                sym_set(arr, i, 4 * (n + 1) + (k ^ 1), -p.g2 * root)
    return SymmetricMatrix(arr, tuple(labels))


@dataclass(frozen=True)
class ConvergenceReport:
    """Truncation check: lowest levels at n_max versus 2 n_max."""
    n_max: int
    n_levels: int
    tol: float
    deltas: tuple[float, ...]
    passed: bool

    @property
    def max_delta(self) -> float:
        return max(self.deltas) if self.deltas else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["max_delta"] = self.max_delta
        return d


def exact_spectrum(
    p: ModelParams, n_max: int, n_levels: int
) -> tuple[np.ndarray, ConvergenceReport]:
    """Lowest n_levels exact eigenvalues plus a doubled-truncation report.

    The report passes when every level moves by at most 1e-8 * omega
    between truncations n_max and 2 n_max.  A failed report is returned,
    not raised.
    """
    _check_truncation(n_max)
    if n_levels < 1 or n_levels > 4 * (n_max + 1):
        raise ValueError(f"n_levels={n_levels} outside [1, {4 * (n_max + 1)}]")
    vals = eigvals_sym(build_full_rabi(p, n_max))[:n_levels]
    vals_fine = eigvals_sym(build_full_rabi(p, 2 * n_max))[:n_levels]
    deltas = tuple(float(abs(a - b)) for a, b in zip(vals, vals_fine))
    tol = 1e-8 * p.omega
    report = ConvergenceReport(
        n_max=n_max, n_levels=n_levels, tol=tol,
        deltas=deltas, passed=max(deltas) <= tol,
    )
    return vals, report


def _max_defect(h: SymmetricMatrix, parity: np.ndarray) -> float:
    mask = parity[:, None] != parity[None, :]
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(h.data[mask])))


def parity_defect(p: ModelParams, n_max: int) -> float:
    """Largest |element| of the rotated Hamiltonian between states of
    opposite parity (-1)^n s1 s2.  Exactly zero: the builder never writes
    a parity-violating entry, so this doubles as a detector self-test hook.
    """
    h = build_rotated_rabi(p, n_max)
    parity = np.array([
        (1 if n % 2 == 0 else -1) * s1 * s2
        for n in range(n_max + 1)
        for (s1, s2) in _XSIGNS
    ])
    return _max_defect(h, parity)


@dataclass(frozen=True)
class DeviationRow:
    """Per-level comparison of ground-referenced energies."""
    level_index: int
    e_trwa: float
    e_exact: float
    abs_dev: float
    rel_dev: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TrwaExactComparison:
    """Ground-aligned level deviations between the block spectrum and the
    exact oracle at a resonant design."""
    omega: float
    delta2: float
    g2: float
    g1: float
    delta1: float
    lambda1: float
    lambda2: float
    n_max: int
    trwa_ground: float
    exact_ground: float
    rows: tuple[DeviationRow, ...]
    convergence: ConvergenceReport

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rows"] = [r.to_dict() for r in self.rows]
        d["convergence"] = self.convergence.to_dict()
        return d


def compare_trwa_exact(
    omega: float,
    delta2: float,
    g2: float,
    g1: float,
    n_levels: int = 6,
    n_max: int = 60,
    n_blocks: int = 8,
    mode: CoefficientMode = CoefficientMode.APPROX,
) -> TrwaExactComparison:
    """Compare the resonant block spectrum against exact diagonalization.

    Both spectra are offset-aligned by their own ground energies before the
    per-level deviations are taken (the block energies contain the global
    displacement constant, the exact ones do not).
    """
    des = design_resonant(omega, delta2, g2, g1)
    p = ModelParams(omega=omega, delta1=des.delta1, delta2=delta2, g1=g1, g2=g2)
    t = TrwaParams(lambda1=des.lambda1, lambda2=des.lambda2)

    trwa: list[float] = []
    for par in (1, -1):
        trwa.extend(trwa_block_energies(p, t, par, n_blocks, mode))
    trwa.sort()
    if len(trwa) < n_levels:
        raise ValueError(f"only {len(trwa)} block levels for n_levels={n_levels}")

    exact, report = exact_spectrum(p, n_max, n_levels)
    rows = []
    for k in range(n_levels):
        et = trwa[k] - trwa[0]
        ee = float(exact[k] - exact[0])
        dev = abs(et - ee)
        rows.append(DeviationRow(
            level_index=k, e_trwa=et, e_exact=ee, abs_dev=dev,
            rel_dev=dev / max(abs(ee), 1e-300),
        ))
    return TrwaExactComparison(
        omega=omega, delta2=delta2, g2=g2, g1=g1,
        delta1=des.delta1, lambda1=des.lambda1, lambda2=des.lambda2,
        n_max=n_max, trwa_ground=trwa[0], exact_ground=float(exact[0]),
        rows=tuple(rows), convergence=report,
    )


def build_full_pseudomode(r: ReservoirParams, m_max: int, n_max: int) -> SymmetricMatrix:
    """Two-mode Hamiltonian: cavity a, pseudomode b, both qubits, sigma-z basis.

    omega a^dag a + omega1 b^dag b + V (b^dag a + a^dag b)
    + sum_i [ g_i sx_i (a + a^dag) + g_i' sx_i (b + b^dag) + delta_i sz_i ]

    Dimension 4 (m_max + 1)(n_max + 1); index order photon n, then
    pseudomode m, then qubit labels.
    """
    if m_max < 1 or n_max < 1:
        raise ValueError(f"need m_max, n_max >= 1, got ({m_max}, {n_max})")
    mdim = m_max + 1
    dim = 4 * mdim * (n_max + 1)
    arr = np.zeros((dim, dim))
    labels = []

    def at(n: int, m: int, k: int) -> int:
        return 4 * (n * mdim + m) + k

    for n in range(n_max + 1):
        for m in range(mdim):
            for k, (z1, z2) in enumerate(_ZSIGNS):
                i = at(n, m, k)
                labels.append(f"|{m},{n},{_ZLABELS[k][0]},{_ZLABELS[k][1]}>")
                arr[i, i] = r.omega * n + r.omega1 * m + r.delta1 * z1 + r.delta2 * z2
                if n < n_max:
                    root = math.sqrt(n + 1.0)
                    sym_set(arr, i, at(n + 1, m, k ^ 2), r.g1 * root)
                    sym_set(arr, i, at(n + 1, m, k ^ 1), r.g2 * root)
                if m < m_max:
                    root = math.sqrt(m + 1.0)
                    sym_set(arr, i, at(n, m + 1, k ^ 2), r.g1p * root)
                    sym_set(arr, i, at(n, m + 1, k ^ 1), r.g2p * root)
                if m < m_max and n > 0:
                    # V b^dag a: (m, n) -> (m+1, n-1), spins untouched
                    sym_set(arr, i, at(n - 1, m + 1, k),
                            r.v * math.sqrt(m + 1.0) * math.sqrt(n))
    return SymmetricMatrix(arr, tuple(labels))


def parity_defect_pseudomode(r: ReservoirParams, m_max: int, n_max: int) -> float:
    """Largest |element| of the two-mode Hamiltonian between states of
    opposite parity.

    The conserved parity multiplies both photon-number parities by both
    qubit inversions; on a sigma-z product state its eigenvalue is
    (-1)^(m+n) z1 z2.  Exactly zero by construction.
    """
    h = build_full_pseudomode(r, m_max, n_max)
    mdim = m_max + 1
    parity = np.array([
        (1 if (m + n) % 2 == 0 else -1) * z1 * z2
        for n in range(n_max + 1)
        for m in range(mdim)
        for (z1, z2) in _ZSIGNS
    ])
    return _max_defect(h, parity)
