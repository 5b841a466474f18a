"""Rectangular barrier: scattering amplitudes and piecewise Bohmian fields.

Convention: unit incident wave from the left, absolute coordinates, so that

    x < x_left:        psi = exp(i k x) + r exp(-i k x)
    x > x_left + a:    psi = t exp(i k x)

With this choice the region left of the barrier is exactly the state of
:class:`~bohmsr.wavefield.SuperpositionState` with ``u = r``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NodeError, PreconditionError
from .wavefield import EPS_AMPLITUDE, PhysicalConstants, SuperpositionState

#: Minimum kappa*a accepted by :func:`thick_barrier_scaling`.
OPACITY_MIN = 5.0
#: Maximum E/V0 accepted by :func:`thick_barrier_scaling`.
DEEP_TUNNELING_MAX = 0.1


@dataclass(frozen=True)
class SquareBarrier:
    V0: float
    a: float
    x_left: float = 0.0

    def __post_init__(self):
        if not (self.V0 > 0 and self.a > 0):
            raise DomainError(f"barrier needs V0 > 0 and a > 0, got V0={self.V0!r}, a={self.a!r}")

    @property
    def x_right(self) -> float:
        return self.x_left + self.a

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.x_left) & (x <= self.x_right), self.V0, 0.0)


@dataclass(frozen=True)
class ScatteringSolution:
    """Amplitudes of one stationary scattering state.

    Inside the barrier ``psi = tau * exp(i k x_left) * (cosh(q y) + i k sinh(q y) / q)``
    with ``y = x - x_right`` and complex ``q`` (real for tunnelling, imaginary
    above the barrier, zero at ``E == V0``).
    """

    E: float
    k: float
    q: complex
    r: complex
    t: complex
    tau: complex

    @property
    def reflection(self) -> float:
        return abs(self.r) ** 2

    @property
    def transmission(self) -> float:
        return abs(self.t) ** 2

    def incident_state(self) -> SuperpositionState:
        """The left-region superposition with ``u = r``."""
        return SuperpositionState.from_amplitude(self.k, self.r)


def _sinhc(q: complex, a: float) -> complex:
    """sinh(q a) / q, continuous at q = 0."""
    z = q * a
    if abs(z) < 1e-8:
        return a * (1.0 + z * z / 6.0)
    return cmath.sinh(z) / q


def solve_barrier(b: SquareBarrier, E: float, consts: PhysicalConstants) -> ScatteringSolution:
    """Match psi and psi' at both edges of the barrier.

    ``E == V0`` is handled by the continuous limit of ``sinh(q a) / q``.
    """
    if not E > 0:
        raise DomainError(f"energy must be positive, got {E!r}")
    hbar, m0 = consts.hbar, consts.m0
    k = math.sqrt(2.0 * m0 * E) / hbar
    q = cmath.sqrt(2.0 * m0 * (b.V0 - E)) / hbar
    a = b.a

    if q.imag == 0.0 and q.real * a > 20.0:
        # opaque: divide through by cosh(q a) to avoid overflow
        qa = q.real * a
        tanh_over_q = math.tanh(qa) / q.real
        sech = 2.0 * math.exp(-qa) / (1.0 + math.exp(-2.0 * qa))
        den = 2j * k - (q * q - k * k) * tanh_over_q
        r_loc = (k * k + q * q) * tanh_over_q / den
        tau = 2j * k * sech / den
    else:
        ch = cmath.cosh(q * a)
        s1 = _sinhc(q, a)
        den = 2j * k * ch - (q * q - k * k) * s1
        r_loc = (k * k + q * q) * s1 / den
        tau = 2j * k / den

    phase_left = cmath.exp(1j * k * b.x_left)
    r = r_loc * phase_left * phase_left
    t = tau * cmath.exp(-1j * k * a)
    return ScatteringSolution(E=E, k=k, q=q, r=r, t=t, tau=tau)


def barrier_wavefunction(sol: ScatteringSolution, b: SquareBarrier, x):
    """psi(x) and psi'(x) of the piecewise solution."""
    x = np.asarray(x, dtype=float)
    k, q = sol.k, sol.q
    psi = np.empty(x.shape, dtype=complex)
    dpsi = np.empty(x.shape, dtype=complex)

    left = x < b.x_left
    right = x > b.x_right
    inside = ~(left | right)

    xl = x[left]
    fwd, bwd = np.exp(1j * k * xl), sol.r * np.exp(-1j * k * xl)
    psi[left] = fwd + bwd
    dpsi[left] = 1j * k * (fwd - bwd)

    xr = x[right]
    psi[right] = sol.t * np.exp(1j * k * xr)
    dpsi[right] = 1j * k * psi[right]

    # anchored at the right edge so the decaying solution carries no cancellation
    y = x[inside] - b.x_right
    pre = sol.tau * cmath.exp(1j * k * b.x_left)
    ch = np.cosh(q * y)
    if q == 0:
        sh_over_q, q_sh = y.astype(complex), np.zeros_like(y, dtype=complex)
    else:
        sh = np.sinh(q * y)
        sh_over_q, q_sh = sh / q, q * sh
    psi[inside] = pre * (ch + 1j * k * sh_over_q)
    dpsi[inside] = pre * (q_sh + 1j * k * ch)
    return psi, dpsi


def barrier_velocity_at(sol: ScatteringSolution, b: SquareBarrier, consts: PhysicalConstants, x):
    """Bohmian velocity ``(hbar/m0) Im(psi'/psi)`` on the whole line."""
    psi, dpsi = barrier_wavefunction(sol, b, x)
    if np.any(np.abs(psi) < EPS_AMPLITUDE * (1.0 + abs(sol.r))):
        raise NodeError("psi vanishes; velocity undefined", x=x)
    v = consts.hbar / consts.m0 * np.imag(dpsi / psi)
    return float(v) if np.ndim(x) == 0 else v


def barrier_quantum_potential_at(sol: ScatteringSolution, b: SquareBarrier, consts: PhysicalConstants, x):
    """Quantum potential from the stationary energy balance ``m0 v^2 / 2 + V + Q = E``."""
    v = np.asarray(barrier_velocity_at(sol, b, consts, x))
    Q = sol.E - b.potential(x) - 0.5 * consts.m0 * v * v
    return float(Q) if np.ndim(x) == 0 else Q


def probability_current(sol: ScatteringSolution, consts: PhysicalConstants) -> float:
    """Current ``(hbar k / m0) |t|^2``, the same in every region."""
    return consts.hbar * sol.k / consts.m0 * sol.transmission


def thick_barrier_scaling(b: SquareBarrier, v0_range, consts: PhysicalConstants, n: int = 25):
    """Log-log slope of the average approach speed against v0, deep in the tunnelling regime.

    Parameters
    ----------
    v0_range : (float, float)
        Lower and upper characteristic speed; ``n`` points are spaced
        logarithmically between them.

    Rows for the same grid come from :func:`scan_barrier`.
    """
    lo, hi = v0_range
    if not 0 < lo < hi:
        raise DomainError(f"need 0 < lo < hi, got {v0_range!r}")
    v0s = np.geomspace(lo, hi, n)
    E = 0.5 * consts.m0 * v0s**2
    if E.max() > DEEP_TUNNELING_MAX * b.V0:
        raise PreconditionError(f"E/V0 = {E.max() / b.V0:.3g} exceeds {DEEP_TUNNELING_MAX}; not deep tunnelling")
    kappa_a = np.sqrt(2.0 * consts.m0 * (b.V0 - E)) / consts.hbar * b.a
    if kappa_a.min() <= OPACITY_MIN:
        raise PreconditionError(f"kappa*a = {kappa_a.min():.3g} <= {OPACITY_MIN}; barrier not opaque")

    table = scan_barrier(b, v0s, consts)
    slope = np.polyfit(np.log(v0s), np.log(table[:, 2]), 1)[0]
    return float(slope)


def scan_barrier(b: SquareBarrier, v0s, consts: PhysicalConstants) -> np.ndarray:
    """Rows ``(v0, T^2, v_av)`` for each characteristic speed, no preconditions."""
    rows = []
    for v0 in np.asarray(v0s, dtype=float):
        sol = solve_barrier(b, 0.5 * consts.m0 * v0 * v0, consts)
        T_sq = sol.transmission
        # v0 T^2 / (2 - T^2) keeps precision when T^2 underflows rho^2 = 1 - T^2
        rows.append((v0, T_sq, v0 * T_sq / (2.0 - T_sq)))
    return np.array(rows)

