"""Model parameters and displaced-frame coefficient functions.

The Hamiltonian is a single bosonic mode of frequency omega coupled to two
qubits with splittings delta1, delta2 and couplings g1, g2 (units of omega
throughout).  After displacing the mode by lambda_i per qubit, the dressed
qubit operators pick up photon-number dependent weights built from
generalized Laguerre polynomials:

    G0(n)      = exp(-2 lam^2) L_n(4 lam^2)
    F1(n+1, n) = 2 lam exp(-2 lam^2) L_n^1(4 lam^2) / sqrt(n+1)

The small-lambda approximation replaces L_n -> 1 and L_n^1 -> n+1, which
turns F1(n+1, n) into 2 lam exp(-2 lam^2) sqrt(n+1).  Primed coefficients
(G0', F1') are the same functions evaluated at lambda2.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .numerics import eval_laguerre


class CoefficientMode(str, enum.Enum):
    """Laguerre treatment: full polynomials or the small-lambda limit."""
    APPROX = "approx"
    EXACT = "exact"


@dataclass(frozen=True)
class ModelParams:
    """Two-qubit one-mode parameters, all in units where hbar = 1.

    omega must be positive; splittings and couplings nonnegative.
    """
    omega: float
    delta1: float
    delta2: float
    g1: float
    g2: float

    def __post_init__(self):
        if not (self.omega > 0.0) or not math.isfinite(self.omega):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        for name in ("delta1", "delta2", "g1", "g2"):
            v = getattr(self, name)
            if v < 0.0 or not math.isfinite(v):
                raise ValueError(f"{name} must be nonnegative and finite, got {v}")

    @property
    def ultrastrong(self) -> bool:
        """Advisory flag: both couplings within 0.1 <= g/omega <= 1."""
        return all(0.1 <= g / self.omega <= 1.0 for g in (self.g1, self.g2))


@dataclass(frozen=True)
class TrwaParams:
    """Displacement parameters of the two qubit-conditioned mode shifts."""
    lambda1: float
    lambda2: float

    def __post_init__(self):
        for name in ("lambda1", "lambda2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def approx_valid(self) -> bool:
        """Small-displacement regime where the Laguerre truncation is controlled."""
        return abs(self.lambda1) <= 0.1 and abs(self.lambda2) <= 0.1


def coeff_g0(lam: float, n: int, mode: CoefficientMode = CoefficientMode.EXACT) -> float:
    """Diagonal dressing weight G0(n) at displacement lam."""
    mode = CoefficientMode(mode)
    if n < 0:
        raise ValueError(f"photon number n={n} must be nonnegative")
    damp = math.exp(-2.0 * lam * lam)
    if mode == CoefficientMode.APPROX:
        return damp
    return damp * eval_laguerre(n, 0, 4.0 * lam * lam)


def coeff_f1(lam: float, n: int, mode: CoefficientMode = CoefficientMode.EXACT) -> float:
    """One-photon dressing weight F1(n+1, n) at displacement lam.

    exact:  2 lam exp(-2 lam^2) L_n^1(4 lam^2) / sqrt(n+1)
    approx: 2 lam exp(-2 lam^2) sqrt(n+1)
    """
    mode = CoefficientMode(mode)
    if n < 0:
        raise ValueError(f"photon number n={n} must be nonnegative")
    damp = 2.0 * lam * math.exp(-2.0 * lam * lam)
    if mode == CoefficientMode.APPROX:
        return damp * math.sqrt(n + 1.0)
    return damp * eval_laguerre(n, 1, 4.0 * lam * lam) / math.sqrt(n + 1.0)


def residual_eq8(omega: float, delta1: float, g1: float, lambda1: float) -> float:
    """Qubit-1 resonance residual (g1 + lambda1*omega) + 2*delta1*lambda1*exp(-2*lambda1^2).

    Zero at the displacement that cancels the qubit-1 one-photon coupling
    in the small-lambda limit.  Odd in lambda1 when g1 = 0.
    """
    return (g1 + lambda1 * omega) + 2.0 * delta1 * lambda1 * math.exp(-2.0 * lambda1 * lambda1)


def residual_eq9(omega: float, delta2: float, g2: float, lambda2: float) -> float:
    """Qubit-2 resonance residual (g2 + lambda2*omega) - 2*delta2*lambda2*exp(-2*lambda2^2).

    Note the relative minus sign against residual_eq8: the qubit-2 branch
    cancels with a positive displacement when 2*delta2 > omega.
    """
    return (g2 + lambda2 * omega) - 2.0 * delta2 * lambda2 * math.exp(-2.0 * lambda2 * lambda2)


def resonance_residual(lambda1: float, lambda2: float, g1: float, g2: float, omega: float) -> float:
    """Cross condition 2*lambda2*g1 + 2*g2*lambda1 + 2*lambda1*lambda2*omega.

    This is the same-photon-number matrix element between the two
    double-spin-flip partners inside a parity chain; a resonant design
    drives it to zero.
    """
    return 2.0 * lambda2 * g1 + 2.0 * g2 * lambda1 + 2.0 * lambda1 * lambda2 * omega


def constant_offset(p: ModelParams, t: TrwaParams) -> float:
    """Global diagonal shift produced by the displacements.

    lambda1^2 omega + lambda2^2 omega + 2 lambda1 g1 + 2 lambda2 g2.
    Reported separately so spectra can be compared shift-free.
    """
    return (
        t.lambda1 * t.lambda1 * p.omega
        + t.lambda2 * t.lambda2 * p.omega
        + 2.0 * t.lambda1 * p.g1
        + 2.0 * t.lambda2 * p.g2
    )
