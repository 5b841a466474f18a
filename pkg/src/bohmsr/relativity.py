"""Reflection coefficients whose Bohmian average kinematics reproduce special relativity.

An obstacle reflecting a fraction

    rho^2 = (v0^3 - c sqrt(v0^4 - 4 c^4)) / (v0^3 + c sqrt(v0^4 - 4 c^4))

of an incident beam of energy ``m0 v0^2 / 2`` lets particles approach it with
average speed ``v_av = c sqrt(v0^4 - 4 c^4) / v0^2``, which is exactly the
relativistic speed of a body of rest mass ``m0`` and total energy
``m0 v0^2 / 2``. The photon-like coefficient ``(v0 - c) / (v0 + c)`` pins the
average speed at ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import optimize

from .errors import DomainError
from .wavefield import PhysicalConstants

Kind = Literal["massive", "photon"]

#: Radicand noise (in units of c^4) treated as an exact zero at the rest-energy edge.
RADICAND_EPS = 1e-12
#: Relative tolerance of the E = m c^2 check in :func:`sr_report`.
IDENTITY_RTOL = 1e-10


@dataclass(frozen=True)
class SRParticle:
    """Rest mass ``m0``, speed limit ``c`` and characteristic speed ``v0``."""

    m0: float
    c: float
    v0: float

    def __post_init__(self):
        if not (self.m0 > 0 and self.c > 0):
            raise DomainError("m0 and c must be positive")
        if not (self.v0 > 0 and math.isfinite(self.v0)):
            raise DomainError(f"v0 must be positive and finite, got {self.v0!r}")

    @classmethod
    def from_energy(cls, E: float, consts: PhysicalConstants) -> "SRParticle":
        return cls(m0=consts.m0, c=consts.c, v0=math.sqrt(2.0 * E / consts.m0))

    @property
    def energy(self) -> float:
        """Bohmian energy m0 v0^2 / 2."""
        return 0.5 * self.m0 * self.v0**2


@dataclass(frozen=True)
class SRReport:
    v0: float
    rho_sq: float
    T_sq: float
    v_av: float
    gamma: float
    m: float
    E: float
    E_bohm: float
    identities_pass: bool


def _massive_root(v0_sq: float, excess: float, c: float) -> float:
    """sqrt(v0^4 - 4 c^4) from ``excess = v0^2 - 2 c^2``.

    The factored radicand keeps full precision near the rest-energy edge.
    """
    radicand = excess * (v0_sq + 2.0 * c * c)
    if abs(radicand) < RADICAND_EPS * c**4:
        return 0.0
    if radicand < 0.0:
        raise DomainError(
            f"v0 = {math.sqrt(v0_sq)!r} is below the rest-energy floor c*sqrt(2) = {c * math.sqrt(2)!r}"
        )
    return math.sqrt(radicand)


def _massive_parts(p: SRParticle) -> tuple[float, float]:
    v0_sq = p.v0 * p.v0
    return p.v0 * v0_sq, p.c * _massive_root(v0_sq, v0_sq - 2.0 * p.c**2, p.c)


def massive_reflection_sq(p: SRParticle) -> float:
    cube, cr = _massive_parts(p)
    return (cube - cr) / (cube + cr)


def massive_transmission_sq(p: SRParticle) -> float:
    """``1 - massive_reflection_sq`` without the cancellation at large v0."""
    cube, cr = _massive_parts(p)
    return 2.0 * cr / (cube + cr)


def _check_photon(p: SRParticle):
    if p.v0 < p.c:
        raise DomainError(f"photon-like coefficient needs v0 >= c, got v0={p.v0!r}, c={p.c!r}")


def photon_reflection_sq(p: SRParticle) -> float:
    _check_photon(p)
    return (p.v0 - p.c) / (p.v0 + p.c)


def photon_transmission_sq(p: SRParticle) -> float:
    _check_photon(p)
    return 2.0 * p.c / (p.v0 + p.c)


def emergent_velocity(p: SRParticle, kind: Kind = "massive") -> float:
    """Average approach speed implied by the chosen coefficient."""
    if kind == "photon":
        _check_photon(p)
        return p.c
    if kind != "massive":
        raise ValueError(f"unknown kind {kind!r}")
    v0_sq = p.v0 * p.v0
    return p.c * _massive_root(v0_sq, v0_sq - 2.0 * p.c**2, p.c) / v0_sq


def speed_deficit(p: SRParticle) -> float:
    """``c - v_av`` for the massive coefficient, free of cancellation.

    Needed because ``1 - v_av^2 / c^2`` underflows to noise once v0 >> c.
    """
    v0_sq = p.v0 * p.v0
    root = _massive_root(v0_sq, v0_sq - 2.0 * p.c**2, p.c)
    return 4.0 * p.c**5 / (v0_sq * (v0_sq + root))


def sr_report(p: SRParticle, kind: Kind = "massive") -> SRReport:
    """Relativistic bookkeeping of one incident energy.

    For ``kind="massive"`` the Lorentz factor is taken from ``v_av`` and the
    check is ``gamma m0 c^2 == m0 v0^2 / 2``. Photon-like rows have infinite
    ``gamma`` and ``m``; the check is then ``v_av == c``.
    """
    E_bohm = p.energy
    if kind == "photon":
        rho_sq = photon_reflection_sq(p)
        T_sq = photon_transmission_sq(p)
        v_av = p.v0 * T_sq / (2.0 - T_sq)
        ok = abs(v_av - p.c) <= 1e-12 * p.c
        return SRReport(p.v0, rho_sq, T_sq, v_av, math.inf, math.inf, E_bohm, E_bohm, ok)

    rho_sq = massive_reflection_sq(p)
    T_sq = massive_transmission_sq(p)
    v_av = emergent_velocity(p)
    beta = v_av / p.c
    # 1 - beta^2 factored as (1 - beta)(1 + beta) with the exact deficit
    one_minus_beta_sq = (speed_deficit(p) / p.c) * (1.0 + beta)
    gamma = 1.0 / math.sqrt(one_minus_beta_sq)
    m = gamma * p.m0
    E = m * p.c**2
    ok = abs(E - E_bohm) / E_bohm < IDENTITY_RTOL and v_av <= p.c
    return SRReport(p.v0, rho_sq, T_sq, v_av, gamma, m, E, E_bohm, bool(ok))


def _transmission_at_energy(E: float, consts: PhysicalConstants) -> float:
    # energies are passed through as (E - E0) so that E == E0 is an exact zero
    c = consts.c
    v0_sq = 2.0 * E / consts.m0
    excess = 2.0 * (E - consts.rest_energy) / consts.m0
    cr = c * _massive_root(v0_sq, excess, c)
    return 2.0 * cr / (v0_sq * math.sqrt(v0_sq) + cr)


def transmission_curve(E_min: float, E_max: float, n: int, consts: PhysicalConstants) -> np.ndarray:
    """Table of ``(E / E0, T^2)`` on ``n`` evenly spaced energies.

    Returns an ``(n, 2)`` array.
    """
    E0 = consts.rest_energy
    if n < 2:
        raise DomainError(f"need at least 2 points, got n={n}")
    if E_min < E0 * (1.0 - 1e-12):
        raise DomainError(f"E_min = {E_min!r} is below the rest energy {E0!r}")
    if not E_max > E_min:
        raise DomainError("E_max must exceed E_min")
    energies = np.linspace(max(E_min, E0), E_max, n)
    T_sq = np.array([_transmission_at_energy(E, consts) for E in energies])
    return np.column_stack([energies / E0, T_sq])


def locate_resonance(consts: PhysicalConstants, tol: float = 1e-8, n_scan: int = 91) -> float:
    """Energy of the transmission maximum on ``[E0, 10 E0]``.

    A coarse grid scan brackets the peak, then golden-section search refines it.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    E0 = consts.rest_energy
    grid = np.linspace(1.0, 10.0, n_scan)
    values = [_transmission_at_energy(e * E0, consts) for e in grid]
    i = int(np.clip(np.argmax(values), 1, n_scan - 2))

    result = optimize.minimize_scalar(
        lambda e: -_transmission_at_energy(e * E0, consts),
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method="golden",
        options={"xtol": 0.5 * tol / (E0 * grid[i])},
    )
    return float(result.x) * E0
