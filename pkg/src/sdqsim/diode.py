"""Asymmetric-SQUID superconducting diode: current-phase relation, Josephson
potential, and diode observables.

Units: energies in units of the gap of junction 1, currents in units of
e*Delta/(2*hbar), phases in radians. All quantities are then O(1).

The single-junction potential is ``U(phi) = -delta * sqrt(1 - tau sin^2(phi/2))``
and the supercurrent is its phase derivative times 4 in these units (optionally
suppressed by a thermal tanh factor). The SQUID potential adds a second
junction shifted by the bias flux; its odd third-order Taylor coefficient at
the potential minimum is the microscopic source of nonreciprocity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    DegenerateMinimumWarning,
    InvalidCurrentError,
    NumericalError,
    ValidationError,
)

__all__ = [
    "JunctionParams",
    "SquidConfig",
    "DiodeCharacterization",
    "junction_cpr",
    "junction_potential",
    "squid_potential",
    "squid_potential_derivative",
    "total_cpr",
    "find_phi_min",
    "taylor_coefficients",
    "critical_currents",
    "diode_efficiency",
    "characterize_diode",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class JunctionParams:
    """A single short junction: transmission ``tau`` in [0, 1] and gap ``delta``."""

    tau: float
    delta: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValidationError(f"tau must lie in [0,1], got {self.tau}")
        if not self.delta > 0.0:
            raise ValidationError(f"delta must be positive, got {self.delta}")


@dataclass(frozen=True)
class SquidConfig:
    """Two junctions in a loop, the second shifted by the bias flux ``phi_b``.

    ``temperature`` is k_B T in units of the junction-1 gap; it enters only the
    current-phase relation, not the zero-temperature potential.
    """

    j1: JunctionParams
    j2: JunctionParams
    phi_b: float
    temperature: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.phi_b):
            raise ValidationError(f"phi_b must be finite, got {self.phi_b}")
        if self.temperature < 0.0:
            raise ValidationError(
                f"temperature must be >= 0, got {self.temperature}"
            )


@dataclass(frozen=True)
class DiodeCharacterization:
    """Diode observables extracted from one SQUID configuration.

    ``c`` holds the Taylor coefficients c_1..c_4 of the potential at its
    minimum (energy per radian^n); c_3 is the nonreciprocity generator.
    """

    ic_plus: float
    ic_minus: float
    eta: float
    phi_min: float
    c: np.ndarray = field(repr=False)


def _sqrt_term_derivatives(tau, phi, order):
    """Value and first ``order`` phase derivatives of sqrt(1 - tau sin^2(phi/2)).

    Hand-differentiated chain rule on A(phi) = 1 - tau/2 + (tau/2) cos(phi);
    analytic forms stay accurate for tau -> 1 where finite differences would
    need step tuning.
    """
    phi = np.asarray(phi, dtype=float)
    a = 1.0 - tau / 2.0 + (tau / 2.0) * np.cos(phi)
    a1 = -(tau / 2.0) * np.sin(phi)
    a2 = -(tau / 2.0) * np.cos(phi)
    a3 = -a1
    a4 = -a2
    s = np.sqrt(a)
    out = [s]
    if order >= 1:
        out.append(a1 / (2.0 * s))
    if order >= 2:
        out.append(a2 / (2.0 * s) - a1**2 / (4.0 * s**3))
    if order >= 3:
        out.append(
            a3 / (2.0 * s) - 0.75 * a1 * a2 / s**3 + 0.375 * a1**3 / s**5
        )
    if order >= 4:
        out.append(
            a4 / (2.0 * s)
            - a1 * a3 / s**3
            - 0.75 * a2**2 / s**3
            + 2.25 * a1**2 * a2 / s**5
            - 0.9375 * a1**4 / s**7
        )
    return out


def junction_potential(j: JunctionParams, phi):
    """Zero-temperature Josephson energy of one junction; 2*pi-periodic, even."""
    (s,) = _sqrt_term_derivatives(j.tau, phi, 0)
    return -j.delta * s


def junction_cpr(j: JunctionParams, phi, temperature: float = 0.0):
    """Supercurrent of one junction at phase ``phi`` (units of e*Delta/2hbar).

    At temperature 0 the thermal factor is exactly 1. Odd in ``phi``.
    """
    if temperature < 0.0:
        raise ValidationError(f"temperature must be >= 0, got {temperature}")
    (s,) = _sqrt_term_derivatives(j.tau, phi, 0)
    current = j.delta * j.tau * np.sin(phi) / s
    if temperature > 0.0:
        current = current * np.tanh(j.delta * s / (2.0 * temperature))
    return current


def squid_potential(s: SquidConfig, phi):
    """Total Josephson potential: junction 1 at ``phi``, junction 2 at ``phi - phi_b``."""
    return junction_potential(s.j1, phi) + junction_potential(s.j2, phi - s.phi_b)


def squid_potential_derivative(s: SquidConfig, phi, order: int):
    """n-th phase derivative of the SQUID potential, n in 1..4 (analytic)."""
    if order not in (1, 2, 3, 4):
        raise ValidationError(f"derivative order must be 1..4, got {order}")
    d1 = _sqrt_term_derivatives(s.j1.tau, phi, order)[order]
    d2 = _sqrt_term_derivatives(s.j2.tau, np.asarray(phi) - s.phi_b, order)[order]
    return -s.j1.delta * d1 - s.j2.delta * d2


def total_cpr(s: SquidConfig, phi):
    """Total supercurrent through the loop at phase ``phi``."""
    return junction_cpr(s.j1, phi, s.temperature) + junction_cpr(
        s.j2, np.asarray(phi) - s.phi_b, s.temperature
    )


def _wrap_angle(phi: float) -> float:
    """Map an angle into [-pi, pi)."""
    return float((phi + np.pi) % TWO_PI - np.pi)


def _refine_minimum(s: SquidConfig, x0: float, half_width: float) -> float:
    """Polish one bracketed local minimum: Newton on U', bracketed fallback."""
    lo, hi = x0 - half_width, x0 + half_width
    x = x0
    for _ in range(60):
        d1 = float(squid_potential_derivative(s, x, 1))
        if abs(d1) < 1e-14:
            return x
        d2 = float(squid_potential_derivative(s, x, 2))
        if d2 <= 0.0:
            break
        step = d1 / d2
        x_new = x - step
        if not lo <= x_new <= hi:
            break
        if abs(x_new - x) < 1e-16:
            return x_new
        x = x_new
    d_lo = float(squid_potential_derivative(s, lo, 1))
    d_hi = float(squid_potential_derivative(s, hi, 1))
    if d_lo < 0.0 < d_hi:
        return float(brentq(lambda p: float(squid_potential_derivative(s, p, 1)), lo, hi, xtol=1e-14))
    res = minimize_scalar(
        lambda p: float(squid_potential(s, p)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return float(res.x)


def find_phi_min(s: SquidConfig, grid_points: int = 2048) -> float:
    """Global minimizer of the SQUID potential on [-pi, pi).

    A uniform grid scan brackets every local minimum; each bracket is polished
    by Newton iteration on the first derivative with a bracketed fallback. If
    two distinct minima are degenerate within 1e-12 in energy, the one with
    smaller |phi| wins; an exact |phi| tie is broken toward the sign of the
    bias flux (the branch continuously connected from |phi_b| slightly below
    the tie point), and a :class:`DegenerateMinimumWarning` reports both.
    """
    phis = np.linspace(-np.pi, np.pi, grid_points, endpoint=False)
    u = squid_potential(s, phis)
    is_min = (u <= np.roll(u, 1)) & (u <= np.roll(u, -1))
    half_width = TWO_PI / grid_points
    candidates: list[tuple[float, float]] = []
    for i in np.flatnonzero(is_min):
        x = _wrap_angle(_refine_minimum(s, float(phis[i]), half_width))
        if any(
            abs(_wrap_angle(x - prev)) < 1e-7 for prev, _ in candidates
        ):
            continue
        candidates.append((x, float(squid_potential(s, x))))
    if not candidates:
        raise NumericalError("no local minimum found on the phase grid")

    e0 = min(e for _, e in candidates)
    degenerate = [(x, e) for x, e in candidates if e <= e0 + 1e-12]
    if len(degenerate) > 1:
        warnings.warn(
            DegenerateMinimumWarning(
                "degenerate potential minima at phi="
                + ", ".join(f"{x:.12g}" for x, _ in degenerate)
                + "; keeping the smallest |phi| on the bias side",
                [x for x, _ in degenerate],
            )
        )
    best_abs = min(abs(x) for x, _ in degenerate)
    tied = [x for x, _ in degenerate if abs(x) <= best_abs + 1e-9]
    bias_sign = 1.0 if s.phi_b >= 0.0 else -1.0
    phi_min = max(tied, key=lambda x: bias_sign * x)

    d1 = float(squid_potential_derivative(s, phi_min, 1))
    d2 = float(squid_potential_derivative(s, phi_min, 2))
    if abs(d1) > 1e-10:
        raise NumericalError(f"stationarity not reached: |U'|={abs(d1):.3e}")
    if not d2 > 0.0:
        raise NumericalError(f"curvature not positive at phi_min: U''={d2:.3e}")
    return phi_min


def taylor_coefficients(s: SquidConfig, phi_min: float) -> np.ndarray:
    """Taylor coefficients c_1..c_4 of the potential at ``phi_min`` (analytic)."""
    return np.array(
        [float(squid_potential_derivative(s, phi_min, n)) for n in (1, 2, 3, 4)]
    )


def critical_currents(
    s: SquidConfig, grid_points: int = 4096
) -> tuple[float, float]:
    """Forward and backward critical currents of the SQUID.

    Returns ``(ic_plus, ic_minus)``: the maximum of the total current-phase
    relation over one period and the magnitude of its minimum.
    """
    phis = np.linspace(0.0, TWO_PI, grid_points, endpoint=False)
    currents = total_cpr(s, phis)
    half_width = TWO_PI / grid_points

    def refine(x0: float, sign: float) -> float:
        # sign=-1 refines a maximum, sign=+1 a minimum; returns the current value
        res = minimize_scalar(
            lambda p: sign * float(total_cpr(s, p)),
            bounds=(x0 - half_width, x0 + half_width),
            method="bounded",
            options={"xatol": 1e-12},
        )
        return sign * float(res.fun)

    ic_max = refine(float(phis[int(np.argmax(currents))]), -1.0)
    ic_min = refine(float(phis[int(np.argmin(currents))]), 1.0)
    ic_plus = max(ic_max, float(np.max(currents)))
    ic_minus = abs(min(ic_min, float(np.min(currents))))
    if not (ic_plus > 0.0 and ic_minus > 0.0):
        raise NumericalError(
            f"critical currents not positive: ic_plus={ic_plus}, ic_minus={ic_minus}"
        )
    return ic_plus, ic_minus


def diode_efficiency(ic_plus: float, ic_minus: float) -> float:
    """Normalized critical-current asymmetry |ic+ - ic-| / (ic+ + ic-)."""
    if ic_plus <= 0.0 or ic_minus <= 0.0:
        raise InvalidCurrentError(
            f"critical currents must be positive, got ({ic_plus}, {ic_minus})"
        )
    return abs((ic_plus - ic_minus) / (ic_plus + ic_minus))


def characterize_diode(s: SquidConfig) -> DiodeCharacterization:
    """Bundle the standard diode observables for one configuration."""
    phi_min = find_phi_min(s)
    c = taylor_coefficients(s, phi_min)
    ic_plus, ic_minus = critical_currents(s)
    return DiodeCharacterization(
        ic_plus=ic_plus,
        ic_minus=ic_minus,
        eta=diode_efficiency(ic_plus, ic_minus),
        phi_min=phi_min,
        c=c,
    )
