"""Displacement solvers and the resonant parameter design.

Two scalar conditions fix the displacements:

  qubit 1:  (g1 + lam1*omega) + 2*delta1*lam1*exp(-2*lam1^2) = 0,  lam1 <= 0
  qubit 2:  (g2 + lam2*omega) - 2*delta2*lam2*exp(-2*lam2^2) = 0

and a cross condition ties them together,

  2*lam2*g1 + 2*g2*lam1 + 2*lam1*lam2*omega = 0.

The design flow solves the qubit-2 condition for lam2, takes lam1 from the
cross condition, and then inverts the qubit-1 condition for delta1 (g1 is
the last adjustable variable).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Sequence

from .model import residual_eq8, residual_eq9, resonance_residual
from .numerics import NoBracketError, NonFiniteError, find_root

# Bracket width used by the solvers.  Downstream block-closure checks need
# residuals near machine precision, so the solvers polish well past the
# 1e-12 residual contract.
_LAMBDA_TOL = 1e-15


class SingularError(ArithmeticError):
    """No root exists inside the admissible bracket (parameters out of regime)."""


class DegenerateDesignError(ValueError):
    """The design formulas degenerate (division by zero coupling or displacement)."""


def lambda_guess(omega: float, delta: float, g: float) -> float:
    """Closed-form starting estimate -g / (omega + 2*delta*exp(-(g/(omega+2*delta))^2)).

    Only an estimate; the solvers use fixed brackets and do not depend on it.
    """
    q = g / (omega + 2.0 * delta)
    return -g / (omega + 2.0 * delta * math.exp(-q * q))


def solve_lambda1(omega: float, delta1: float, g1: float, tol: float = _LAMBDA_TOL) -> float:
    """Solve the qubit-1 condition for lambda1 in [-1, 0].

    g1 = 0 returns 0.0 exactly.  delta1 = 0 reduces to g1 + lam*omega = 0.
    Raises NoBracketError when no sign change exists on [-1, 0], which
    signals parameters outside the method's regime.
    """
    _check_qubit_params(omega, delta1, g1)
    if g1 == 0.0:
        return 0.0
    return find_root(lambda lam: residual_eq8(omega, delta1, g1, lam), -1.0, 0.0, tol)


def solve_lambda2(omega: float, delta2: float, g2: float, tol: float = _LAMBDA_TOL) -> float:
    """Solve the qubit-2 condition for the root of smallest magnitude.

    When 2*delta2 > omega the admissible bracket is (0, lam_star) with
    lam_star = sqrt(ln(2*delta2/omega)/2), the point where the linear and
    dressed terms change dominance.  The residual there dips below zero
    between two positive crossings; the smaller crossing is returned.
    Raises SingularError when the dip never reaches zero.

    Otherwise (2*delta2 <= omega) the residual is monotone and the unique
    root is negative; the bracket is [-1, 0].
    """
    _check_qubit_params(omega, delta2, g2)
    if g2 == 0.0:
        return 0.0

    def f(lam: float) -> float:
        return residual_eq9(omega, delta2, g2, lam)

    if 2.0 * delta2 > omega:
        lam_star = math.sqrt(0.5 * math.log(2.0 * delta2 / omega))

        # Locate the single interior minimum of f on (0, lam_star): f' is
        # negative at 0, positive by lam = 1/2 at the latest, and strictly
        # increasing in between.
        def fp(lam: float) -> float:
            return omega - 2.0 * delta2 * math.exp(-2.0 * lam * lam) * (1.0 - 4.0 * lam * lam)

        lam_dip = find_root(fp, 0.0, min(0.5, lam_star), tol)
        f_dip = f(lam_dip)
        if f_dip > 0.0:
            raise SingularError(
                f"no root of the qubit-2 condition in (0, {lam_star:.6g}): "
                f"minimum residual {f_dip:.3g} at lambda2={lam_dip:.6g}"
            )
        if f_dip == 0.0:
            return lam_dip
        return find_root(f, 0.0, lam_dip, tol)

    # monotone branch: root, if any, lies in [-1, 0)
    if f(-1.0) > 0.0:
        raise NoBracketError(
            f"qubit-2 residual has no sign change on [-1, 0] "
            f"(omega={omega}, delta2={delta2}, g2={g2})"
        )
    return find_root(f, -1.0, 0.0, tol)


def _check_qubit_params(omega: float, delta: float, g: float) -> None:
    if not (omega > 0.0 and math.isfinite(omega)):
        raise ValueError(f"omega must be positive and finite, got {omega}")
    if delta < 0.0 or not math.isfinite(delta):
        raise ValueError(f"delta must be nonnegative and finite, got {delta}")
    if g < 0.0 or not math.isfinite(g):
        raise ValueError(f"g must be nonnegative and finite, got {g}")


@dataclass(frozen=True)
class ResonantDesign:
    """Solved displacements plus the derived qubit-1 splitting.

    res_eq8/res_eq9/res_eq10 record the absolute residuals of the three
    design conditions at the returned values.
    """
    omega: float
    delta2: float
    g2: float
    g1: float
    lambda1: float
    lambda2: float
    delta1: float
    res_eq8: float
    res_eq9: float
    res_eq10: float

    @property
    def approx_valid(self) -> bool:
        return abs(self.lambda1) <= 0.1 and abs(self.lambda2) <= 0.1

    @property
    def physical(self) -> bool:
        """delta1 > 0 is required for a physical qubit splitting."""
        return self.delta1 > 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["approx_valid"] = self.approx_valid
        d["physical"] = self.physical
        return d


def design_resonant(omega: float, delta2: float, g2: float, g1: float) -> ResonantDesign:
    """Complete a resonant parameter set from (omega, delta2, g2, g1).

    lam2 from the qubit-2 condition, lam1 = -lam2*g1/(g2 + lam2*omega) from
    the cross condition, delta1 by inverting the qubit-1 condition.  The
    derived delta1 may come out nonphysical (<= 0); that is reported via
    the ``physical`` flag, not raised.
    """
    if g1 == 0.0:
        raise DegenerateDesignError("g1 = 0 leaves lambda1 = 0 and delta1 undetermined")
    lam2 = solve_lambda2(omega, delta2, g2)
    denom = g2 + lam2 * omega
    if denom == 0.0:
        raise DegenerateDesignError("g2 + lambda2*omega = 0: cross condition degenerate")
    lam1 = -lam2 * g1 / denom
    if lam1 == 0.0:
        raise DegenerateDesignError(
            "lambda1 = 0 (lambda2 vanished): cannot invert the qubit-1 condition"
        )
    delta1 = -(g1 + lam1 * omega) / (2.0 * lam1 * math.exp(-2.0 * lam1 * lam1))
    return ResonantDesign(
        omega=omega,
        delta2=delta2,
        g2=g2,
        g1=g1,
        lambda1=lam1,
        lambda2=lam2,
        delta1=delta1,
        res_eq8=abs(residual_eq8(omega, delta1, g1, lam1)),
        res_eq9=abs(residual_eq9(omega, delta2, g2, lam2)),
        res_eq10=abs(resonance_residual(lam1, lam2, g1, g2, omega)),
    )


@dataclass(frozen=True)
class WindowScanRow:
    """One sweep point of a window scan.

    Fields that a given scan kind does not produce stay None.  ``error``
    holds a short token (NoBracket, Singular, ...) when the point failed;
    failed points never abort a sweep.
    """
    omega: float
    delta2: float
    g2: float
    g1: float | None = None
    lambda1: float | None = None
    lambda2: float | None = None
    delta1: float | None = None
    in_window: bool = False
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


_SCAN_FIELDS = (
    "omega", "delta2", "g2", "g1", "lambda1", "lambda2", "delta1", "in_window", "error",
)


def _error_token(exc: Exception) -> str:
    name = type(exc).__name__
    return name[:-5] if name.endswith("Error") else name


def _check_grid(name: str, values: Sequence[float]) -> None:
    vals = list(values)
    if not vals:
        raise ValueError(f"{name} grid is empty")
    for v in vals:
        if not math.isfinite(v):
            raise ValueError(f"{name} grid contains non-finite value {v}")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError(f"{name} grid must be strictly increasing")


def scan_lambda2_window(
    omega_values: Sequence[float],
    delta2_values: Sequence[float],
    g2_grid: Sequence[float],
    threshold: float = 0.1,
) -> list[WindowScanRow]:
    """Sweep lambda2 over (omega, delta2, g2) and flag |lambda2| <= threshold.

    Row order is the nested grid order: omega outermost, g2 innermost.
    """
    _check_grid("omega", omega_values)
    _check_grid("delta2", delta2_values)
    _check_grid("g2", g2_grid)
    rows = []
    for omega in omega_values:
        for delta2 in delta2_values:
            for g2 in g2_grid:
                try:
                    lam2 = solve_lambda2(omega, delta2, g2)
                except (NoBracketError, SingularError, NonFiniteError) as exc:
                    rows.append(WindowScanRow(omega, delta2, g2, error=_error_token(exc)))
                else:
                    rows.append(WindowScanRow(
                        omega, delta2, g2,
                        lambda2=lam2,
                        in_window=abs(lam2) <= threshold,
                    ))
    return rows


def scan_delta1_window(
    omega_values: Sequence[float],
    delta2_values: Sequence[float],
    g1: float,
    g2_grid: Sequence[float],
    threshold: float = 0.1,
) -> list[WindowScanRow]:
    """Sweep the designed delta1 over (omega, delta2, g2) at fixed g1.

    A point is in the window when the derived delta1 is physical (> 0) and
    |lambda1| <= threshold.
    """
    _check_grid("omega", omega_values)
    _check_grid("delta2", delta2_values)
    _check_grid("g2", g2_grid)
    rows = []
    for omega in omega_values:
        for delta2 in delta2_values:
            for g2 in g2_grid:
                try:
                    des = design_resonant(omega, delta2, g2, g1)
                except (NoBracketError, SingularError, NonFiniteError, DegenerateDesignError) as exc:
                    rows.append(WindowScanRow(omega, delta2, g2, g1=g1, error=_error_token(exc)))
                else:
                    rows.append(WindowScanRow(
                        omega, delta2, g2, g1=g1,
                        lambda1=des.lambda1,
                        lambda2=des.lambda2,
                        delta1=des.delta1,
                        in_window=des.physical and abs(des.lambda1) <= threshold,
                    ))
    return rows
