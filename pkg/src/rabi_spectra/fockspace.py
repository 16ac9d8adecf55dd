"""Parity chains of the effective Hamiltonian and its block decomposition.

In the displaced, spin-x labeled frame the effective Hamiltonian conserves
the Z2 parity exp(i pi a^dag a) (x1) sx1 (x) sx2, so the Fock (x) spin basis
splits into two chains, each holding exactly two states per photon number.
Within a chain, adjacent photon numbers differ by exactly one spin flip and
the matrix elements follow three patterns:

  diagonal        omega*n + c0 + s1*delta1*G0(n; lam1) + s2*delta2*G0(n; lam2)
  same n          2*lam2*g1 + 2*g2*lam1 + 2*lam1*lam2*omega   (double flip)
  n <-> n+1       (g_i + lam_i*omega)*sqrt(n+1) + s_i'*delta_i*F1(n+1, n; lam_i)

where qubit i is the one that flips and s_i' is its sign in the
higher-photon state.  Under a resonant design in approx mode the elements
with s_1' = +1 or s_2' = -1 vanish identically, which tiles each chain into
closed 4x4 blocks plus a small boundary block at photon number zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np

from .model import (
    CoefficientMode,
    ModelParams,
    TrwaParams,
    coeff_f1,
    coeff_g0,
    constant_offset,
    resonance_residual,
)
from .numerics import NoBracketError, NonFiniteError, SymmetricMatrix, eigh, sym_set
from .resonance import DegenerateDesignError, SingularError, design_resonant

_SPIN_CHARS = {1: "+", -1: "-"}


@dataclass(frozen=True)
class ChainState:
    """One Fock (x) spin-x basis state |n, s1, s2> with s in {+1, -1}."""
    n: int
    s1: int
    s2: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"photon number must be nonnegative, got {self.n}")
        if self.s1 not in (-1, 1) or self.s2 not in (-1, 1):
            raise ValueError(f"spin labels must be +1 or -1, got ({self.s1}, {self.s2})")

    @property
    def parity(self) -> int:
        """Eigenvalue of exp(i pi a^dag a) (x) sx1 (x) sx2."""
        return (1 if self.n % 2 == 0 else -1) * self.s1 * self.s2

    def ket(self) -> str:
        return f"|{self.n},{_SPIN_CHARS[self.s1]},{_SPIN_CHARS[self.s2]}>"


def _normalize_parity(parity) -> int:
    if parity in (1, -1):
        return parity
    if parity == "+":
        return 1
    if parity == "-":
        return -1
    raise ValueError(f"parity must be +1/-1 or '+'/'-', got {parity!r}")


@dataclass(frozen=True)
class ParityChain:
    """Ordered basis of one parity sector up to photon number n_max."""
    parity: int
    n_max: int
    states: tuple[ChainState, ...]

    def index(self, state: ChainState) -> int:
        return self.states.index(state)

    def labels(self) -> tuple[str, ...]:
        return tuple(s.ket() for s in self.states)


def build_parity_chain(parity, n_max: int) -> ParityChain:
    """Enumerate the parity sector: two states per photon number, ascending n.

    At each n the spin pair is fixed by parity = (-1)^n s1 s2; the (-,+)
    member precedes (+,-) and (+,+) precedes (-,-).
    """
    par = _normalize_parity(parity)
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    states = []
    for n in range(n_max + 1):
        product = par * (1 if n % 2 == 0 else -1)
        if product == -1:
            states.append(ChainState(n, -1, 1))
            states.append(ChainState(n, 1, -1))
        else:
            states.append(ChainState(n, 1, 1))
            states.append(ChainState(n, -1, -1))
    chain = ParityChain(parity=par, n_max=n_max, states=tuple(states))
    assert all(s.parity == par for s in chain.states)
    return chain


def _diag_element(p: ModelParams, t: TrwaParams, n: int, s1: int, s2: int,
                  mode: CoefficientMode) -> float:
    return (
        p.omega * n
        + constant_offset(p, t)
        + s1 * p.delta1 * coeff_g0(t.lambda1, n, mode)
        + s2 * p.delta2 * coeff_g0(t.lambda2, n, mode)
    )


def _hop_element(p: ModelParams, t: TrwaParams, n_lo: int, qubit: int, s_hi: int,
                 mode: CoefficientMode) -> float:
    """Element between |n_lo, ...> and |n_lo+1, ...> when `qubit` flips.

    s_hi is the flipped qubit's sign in the higher-photon state; it sets
    the sign of the F1 correction.
    """
    if qubit == 1:
        g, lam, delta = p.g1, t.lambda1, p.delta1
    else:
        g, lam, delta = p.g2, t.lambda2, p.delta2
    return (g + lam * p.omega) * math.sqrt(n_lo + 1.0) + s_hi * delta * coeff_f1(lam, n_lo, mode)


def _pair_element(p: ModelParams, t: TrwaParams, a: ChainState, b: ChainState,
                  mode: CoefficientMode) -> float:
    """Off-diagonal element between two distinct chain states (0 when unlinked)."""
    lo, hi = (a, b) if a.n <= b.n else (b, a)
    dn = hi.n - lo.n
    flip1 = lo.s1 != hi.s1
    flip2 = lo.s2 != hi.s2
    if dn == 0 and flip1 and flip2:
        return resonance_residual(t.lambda1, t.lambda2, p.g1, p.g2, p.omega)
    if dn == 1 and flip1 != flip2:
        if flip1:
            return _hop_element(p, t, lo.n, 1, hi.s1, mode)
        return _hop_element(p, t, lo.n, 2, hi.s2, mode)
    return 0.0


def build_effective_chain_matrix(
    p: ModelParams,
    t: TrwaParams,
    chain: ParityChain,
    mode: CoefficientMode = CoefficientMode.APPROX,
) -> SymmetricMatrix:
    """Assemble the effective Hamiltonian restricted to one parity chain."""
    states = chain.states
    dim = len(states)
    arr = np.zeros((dim, dim))
    for i, si in enumerate(states):
        arr[i, i] = _diag_element(p, t, si.n, si.s1, si.s2, mode)
        for j in range(i + 1, dim):
            sj = states[j]
            if sj.n - si.n > 1:
                break
            v = _pair_element(p, t, si, sj, mode)
            if v != 0.0:
                sym_set(arr, i, j, v)
    return SymmetricMatrix(arr, chain.labels())


@dataclass(frozen=True)
class Block4:
    """One 4x4 block of the resonant decomposition, window index n.

    Basis order: |2n+1,+,->, |2n+2,+,+>, |2n+2,-,->, |2n+3,-,+>.
    The named entries mirror the window bookkeeping: a is the 1x1 value on
    |2n+1,-,+> (which closes the previous block), b_prime the diagonal on
    |2n+3,+,-> (which opens the next one), x and y the upper couplings at
    sqrt(2n+2).  The lower couplings inside `matrix` carry their exact
    sqrt(2n+3) elements rather than reusing x and y.
    """
    n: int
    a: float
    b: float
    c: float
    d: float
    a_prime: float
    b_prime: float
    x: float
    y: float
    matrix: SymmetricMatrix

    @property
    def states(self) -> tuple[ChainState, ...]:
        n = self.n
        return (
            ChainState(2 * n + 1, 1, -1),
            ChainState(2 * n + 2, 1, 1),
            ChainState(2 * n + 2, -1, -1),
            ChainState(2 * n + 3, -1, 1),
        )


def build_block4(
    p: ModelParams,
    t: TrwaParams,
    n: int,
    mode: CoefficientMode = CoefficientMode.APPROX,
) -> Block4:
    """Build the window-n block of the plus chain (photons 2n+1 .. 2n+3)."""
    if n < 0:
        raise ValueError(f"block index must be nonnegative, got {n}")
    diag = lambda nn, s1, s2: _diag_element(p, t, nn, s1, s2, mode)
    a = diag(2 * n + 1, -1, 1)
    b = diag(2 * n + 1, 1, -1)
    c = diag(2 * n + 2, 1, 1)
    d = diag(2 * n + 2, -1, -1)
    a_prime = diag(2 * n + 3, -1, 1)
    b_prime = diag(2 * n + 3, 1, -1)
    x = _hop_element(p, t, 2 * n + 1, 2, 1, mode)    # (B, C): qubit 2 raised
    y = _hop_element(p, t, 2 * n + 1, 1, -1, mode)   # (B, D): qubit 1 lowered
    y_lo = _hop_element(p, t, 2 * n + 2, 1, -1, mode)  # (C, A'): qubit 1 lowered
    x_lo = _hop_element(p, t, 2 * n + 2, 2, 1, mode)   # (D, A'): qubit 2 raised
    same_n = resonance_residual(t.lambda1, t.lambda2, p.g1, p.g2, p.omega)
    arr = np.zeros((4, 4))
    arr[0, 0], arr[1, 1], arr[2, 2], arr[3, 3] = b, c, d, a_prime
    sym_set(arr, 0, 1, x)
    sym_set(arr, 0, 2, y)
    sym_set(arr, 1, 2, same_n)
    sym_set(arr, 1, 3, y_lo)
    sym_set(arr, 2, 3, x_lo)
    labels = (
        ChainState(2 * n + 1, 1, -1).ket(),
        ChainState(2 * n + 2, 1, 1).ket(),
        ChainState(2 * n + 2, -1, -1).ket(),
        ChainState(2 * n + 3, -1, 1).ket(),
    )
    return Block4(
        n=n, a=a, b=b, c=c, d=d, a_prime=a_prime, b_prime=b_prime, x=x, y=y,
        matrix=SymmetricMatrix(arr, labels),
    )


def block_eigenvector_to_wavefunction(
    block: Block4, eigvec: Sequence[float]
) -> list[tuple[str, float]]:
    """Attach ket labels to a block eigenvector, normalized to unit norm."""
    v = np.asarray(eigvec, dtype=float)
    if v.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("zero eigenvector")
    v = v / norm
    return [(lab, float(c)) for lab, c in zip(block.matrix.labels, v)]


def closed_block_index_groups(parity, n_blocks: int) -> list[tuple[int, ...]]:
    """Index sets of the closed blocks of a chain under a resonant design.

    The plus chain opens with a 3-state boundary group {|0,+,+>, |0,-,->,
    |1,-,+>} followed by 4-blocks starting at |2k+1,+,->; the minus chain
    opens with the lone state |0,-,+> followed by 4-blocks starting at
    |2k,+,->.  Indices refer to positions in build_parity_chain order.
    """
    par = _normalize_parity(parity)
    if n_blocks < 1:
        raise ValueError("need at least one block")
    if par == 1:
        groups = [(0, 1, 2)]
        start = 3
    else:
        groups = [(0,)]
        start = 1
    for k in range(n_blocks):
        base = start + 4 * k
        groups.append((base, base + 1, base + 2, base + 3))
    return groups


def chain_n_max_for_blocks(n_blocks: int) -> int:
    """Photon truncation that contains every group from closed_block_index_groups."""
    return 2 * n_blocks + 3


def trwa_block_energies(
    p: ModelParams,
    t: TrwaParams,
    parity,
    n_blocks: int,
    mode: CoefficientMode = CoefficientMode.APPROX,
) -> list[float]:
    """Eigenvalues of all closed blocks of one parity chain, ascending."""
    par = _normalize_parity(parity)
    chain = build_parity_chain(par, chain_n_max_for_blocks(n_blocks))
    h = build_effective_chain_matrix(p, t, chain, mode)
    energies: list[float] = []
    for group in closed_block_index_groups(par, n_blocks):
        sub = h.submatrix(group)
        if sub.dim == 1:
            energies.append(sub.entry(0, 0))
        else:
            energies.extend(float(v) for v in eigh(sub).values)
    energies.sort()
    return energies


@dataclass(frozen=True)
class SpectrumRow:
    """One labeled energy level of the block spectrum sweep."""
    g1: float
    delta1: float | None
    lambda1: float | None
    lambda2: float | None
    parity: str
    level_index: int | None
    energy: float | None
    offset: float | None
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SpectrumTable:
    """Block-spectrum sweep over g1 at fixed (omega, delta2, g2)."""
    omega: float
    delta2: float
    g2: float
    mode: str
    n_blocks: int
    rows: tuple[SpectrumRow, ...]

    def energies_for(self, g1: float) -> list[tuple[int, str, float]]:
        return [
            (r.level_index, r.parity, r.energy)
            for r in self.rows
            if r.g1 == g1 and r.error is None
        ]


_SPECTRUM_ERRORS = (NoBracketError, SingularError, NonFiniteError, DegenerateDesignError)


def spectrum_vs_g1(
    omega: float,
    delta2: float,
    g2: float,
    g1_grid: Sequence[float],
    n_blocks: int = 8,
    mode: CoefficientMode = CoefficientMode.APPROX,
) -> SpectrumTable:
    """Sweep g1, re-deriving the resonant design at each point, and emit the
    sorted block eigenvalues of both parity chains.

    Each row carries the global level index within its g1 point (energies
    ascending across both parities), the parity label of the block the
    level came from, and the constant diagonal offset so spectra can be
    compared shift-free.  Design failures become single rows with the
    error token and empty numeric fields.
    """
    rows: list[SpectrumRow] = []
    for g1 in g1_grid:
        try:
            des = design_resonant(omega, delta2, g2, g1)
        except _SPECTRUM_ERRORS as exc:
            name = type(exc).__name__
            token = name[:-5] if name.endswith("Error") else name
            rows.append(SpectrumRow(g1, None, None, None, "", None, None, None, token))
            continue
        if not des.physical:
            rows.append(SpectrumRow(
                g1, des.delta1, des.lambda1, des.lambda2, "", None, None, None,
                "NonphysicalDesign",
            ))
            continue
        p = ModelParams(omega=omega, delta1=des.delta1, delta2=delta2, g1=g1, g2=g2)
        t = TrwaParams(lambda1=des.lambda1, lambda2=des.lambda2)
        c0 = constant_offset(p, t)
        labeled: list[tuple[float, str]] = []
        for par, tag in ((1, "+"), (-1, "-")):
            labeled.extend((e, tag) for e in trwa_block_energies(p, t, par, n_blocks, mode))
        labeled.sort(key=lambda pair: pair[0])
        for idx, (energy, tag) in enumerate(labeled):
            rows.append(SpectrumRow(
                g1=g1, delta1=des.delta1, lambda1=des.lambda1, lambda2=des.lambda2,
                parity=tag, level_index=idx, energy=energy, offset=c0,
            ))
    return SpectrumTable(
        omega=omega, delta2=delta2, g2=g2, mode=str(mode.value),
        n_blocks=n_blocks, rows=tuple(rows),
    )
