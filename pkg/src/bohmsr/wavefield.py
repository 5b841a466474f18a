"""Bohmian fields of the incident-plus-reflected plane-wave state.

For ``x`` to the left of an obstacle the stationary wave function is::

    psi(x) = exp(i k x) + u exp(-i k x),    u = rho * exp(i phi)

Everything here is closed form and vectorised over ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateStateError, DomainError, NodeError

TWO_PI = 2.0 * math.pi

#: Threshold on the velocity denominator below which a rho = 1 state is at a node.
EPS_DENOMINATOR = 1e-12
#: Node cutoff for phase extraction, relative to the maximum field amplitude.
EPS_AMPLITUDE = 1e-12


@dataclass(frozen=True)
class PhysicalConstants:
    """Reduced Planck constant, rest mass and limiting speed.

    Defaults are natural units.
    """

    hbar: float = 1.0
    m0: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "m0", "c"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    @property
    def rest_energy(self) -> float:
        return self.m0 * self.c**2

    def speed(self, k: float) -> float:
        """Characteristic speed hbar*k/m0 of a plane wave."""
        return self.hbar * k / self.m0

    def wavenumber(self, v0: float) -> float:
        return self.m0 * v0 / self.hbar

    def energy(self, k: float) -> float:
        """Kinetic energy hbar^2 k^2 / 2 m0 (= m0 v0^2 / 2)."""
        return (self.hbar * k) ** 2 / (2.0 * self.m0)


def _wrap_phase(phi: float) -> float:
    wrapped = math.fmod(phi, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


@dataclass(frozen=True)
class SuperpositionState:
    """Incident wavenumber and complex reflection amplitude ``rho * exp(i phi)``.

    ``phi`` is wrapped into ``[0, 2*pi)`` on construction.
    """

    k: float
    rho: float
    phi: float = 0.0

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError(f"k must be positive and finite, got {self.k!r}")
        if not (0.0 <= self.rho <= 1.0):
            raise DomainError(f"rho must lie in [0, 1], got {self.rho!r}")
        if not math.isfinite(self.phi):
            raise DomainError(f"phi must be finite, got {self.phi!r}")
        object.__setattr__(self, "phi", _wrap_phase(float(self.phi)))

    @classmethod
    def from_amplitude(cls, k: float, u: complex) -> "SuperpositionState":
        """Build the state from a complex reflection amplitude ``u``."""
        rho = abs(u)
        # |r| from a unitary solver may exceed 1 by an ulp
        if 1.0 < rho <= 1.0 + 1e-14:
            rho = 1.0
        return cls(k=k, rho=rho, phi=math.atan2(u.imag, u.real))

    @property
    def u(self) -> complex:
        return self.rho * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def degenerate(self) -> bool:
        """True for total reflection, where the velocity field vanishes identically."""
        return self.rho == 1.0

    @property
    def period(self) -> float:
        """Spatial period pi/k of the velocity field."""
        return math.pi / self.k


@dataclass(frozen=True)
class FieldSample:
    """Amplitude/phase decomposition of psi at one or more positions."""

    x: np.ndarray | float
    v: np.ndarray | float
    Q: np.ndarray | float
    R: np.ndarray | float
    S_grad: np.ndarray | float = field(repr=False)


def _denominator(state: SuperpositionState, x):
    rho = state.rho
    return 1.0 + rho * rho + 2.0 * rho * np.cos(2.0 * state.k * x - state.phi)


def _check_degenerate(state, den):
    if state.degenerate and np.any(np.abs(den) < EPS_DENOMINATOR):
        raise DegenerateStateError("velocity is 0/0 at a node of the total-reflection standing wave")


def _as_output(values, x):
    return float(values) if np.ndim(x) == 0 else values


def wavefunction(state: SuperpositionState, x):
    """psi(x) and psi'(x)."""
    x = np.asarray(x, dtype=float)
    forward = np.exp(1j * state.k * x)
    backward = state.u * np.exp(-1j * state.k * x)
    return forward + backward, 1j * state.k * (forward - backward)


def velocity_at(state: SuperpositionState, consts: PhysicalConstants, x):
    """Particle velocity from the closed-form phase gradient.

    Returns 0 for a totally reflected state (``state.degenerate``) away from
    nodes, and raises :class:`DegenerateStateError` at nodes.
    """
    den = _denominator(state, np.asarray(x, dtype=float))
    _check_degenerate(state, den)
    v0 = consts.speed(state.k)
    return _as_output(v0 * (1.0 - state.rho**2) / den, x)


def quantum_potential_at(state: SuperpositionState, consts: PhysicalConstants, x):
    """Quantum potential ``E * (1 - ((1 - rho^2) / den)^2)`` with ``E = hbar^2 k^2 / 2 m0``."""
    den = _denominator(state, np.asarray(x, dtype=float))
    _check_degenerate(state, den)
    ratio = (1.0 - state.rho**2) / den
    return _as_output(consts.energy(state.k) * (1.0 - ratio * ratio), x)


def amplitude_phase_at(state: SuperpositionState, consts: PhysicalConstants, x) -> FieldSample:
    """Decompose psi = R exp(iS/hbar) numerically from the complex field.

    This route never uses the closed-form velocity, so it can be checked
    against :func:`velocity_at`.
    """
    psi, dpsi = wavefunction(state, x)
    R = np.abs(psi)
    cutoff = EPS_AMPLITUDE * (1.0 + state.rho)
    if np.any(R < cutoff):
        raise NodeError("psi vanishes; phase undefined", x=x)
    S_grad = consts.hbar * np.imag(dpsi / psi)
    ratio = (1.0 - state.rho**2) / R**2
    Q = consts.energy(state.k) * (1.0 - ratio * ratio)
    return FieldSample(
        x=_as_output(np.asarray(x, dtype=float), x),
        v=_as_output(S_grad / consts.m0, x),
        Q=_as_output(Q, x),
        R=_as_output(R, x),
        S_grad=_as_output(S_grad, x),
    )


def v_extremes(state: SuperpositionState, consts: PhysicalConstants) -> tuple[float, float]:
    """Minimum and maximum of the velocity field, ``v0 (1 -+ rho) / (1 +- rho)``."""
    if state.rho >= 1.0:
        raise DegenerateStateError("v_max is infinite for total reflection")
    v0 = consts.speed(state.k)
    rho = state.rho
    return v0 * (1.0 - rho) / (1.0 + rho), v0 * (1.0 + rho) / (1.0 - rho)


def superluminal_threshold(v0: float, c: float) -> float:
    """Reflection amplitude above which v_max exceeds ``c``.

    ``v0 == c`` is accepted as the boundary case and gives 0.
    """
    if not (0.0 < v0 <= c):
        raise DomainError(f"threshold requires 0 < v0 <= c, got v0={v0!r}, c={c!r}")
    return (c - v0) / (c + v0)


def average_velocity(rho: float, v0: float) -> float:
    """Position-independent mean speed ``v0 (1 - rho^2) / (1 + rho^2)``."""
    if not (0.0 <= rho <= 1.0):
        raise DomainError(f"rho must lie in [0, 1], got {rho!r}")
    rho2 = rho * rho
    return v0 * (1.0 - rho2) / (1.0 + rho2)
