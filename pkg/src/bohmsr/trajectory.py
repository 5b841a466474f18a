"""Particle paths along stationary velocity fields.

Two independent routes are provided:

* closed-form inversion of the time of flight for the plane-wave
  superposition (:func:`time_of_flight`, :func:`analytic_trajectory`);
* adaptive Dormand-Prince 5(4) integration of ``dx/dt = v(x)`` for any field
  (:func:`integrate`), with wrappers for the free and barrier fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .barrier import (
    ScatteringSolution,
    SquareBarrier,
    barrier_quantum_potential_at,
    barrier_velocity_at,
)
from .errors import DegenerateStateError, DomainError, SpanTooShortError, StallError, StepFailureError
from .wavefield import (
    PhysicalConstants,
    SuperpositionState,
    quantum_potential_at,
    v_extremes,
    velocity_at,
)

DEFAULT_TOL = 1e-10
#: Minimum step, as a fraction of the field's characteristic length.
MIN_STEP_FRACTION = 1e-14
#: Speeds below this fraction of the reference speed count as stalled.
STALL_FRACTION = 1e-9

# Dormand-Prince 5(4) tableau; the last row of A doubles as the 5th-order weights (FSAL).
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_A[6] + (0.0,), _B4))
# Shampine's 4th-order continuous extension: x(t + s h) = x + h * sum_i k_i * sum_j P[i][j] s^(j+1)
_P = np.array(
    [
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-ordered samples of one particle path.

    ``n_accepted``, ``n_rejected`` and ``max_local_error`` are filled by the
    ODE route; for analytic paths they are zero.
    """

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    Q: np.ndarray
    method: str
    n_accepted: int = 0
    n_rejected: int = 0
    max_local_error: float = 0.0
    dense: np.ndarray | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        for name in ("t", "x", "v", "Q"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def __len__(self):
        return len(self.t)

    @property
    def samples(self) -> np.ndarray:
        """``(N, 4)`` array with columns t, x, v, Q."""
        return np.column_stack([self.t, self.x, self.v, self.Q])

    def diagnostics(self) -> dict:
        return {
            "method": self.method,
            "n_samples": len(self),
            "n_accepted": self.n_accepted,
            "n_rejected": self.n_rejected,
            "max_local_error": self.max_local_error,
        }

    def time_at(self, x_target: float) -> float:
        """Time at which the path reaches ``x_target``.

        Uses the integrator's continuous extension when present, otherwise
        cubic Hermite interpolation of t(x) with slopes 1/v. Requires x to be
        strictly increasing.
        """
        x, t, v = self.x, self.t, self.v
        if not x[0] <= x_target <= x[-1]:
            raise DomainError(f"x = {x_target!r} is outside the trajectory span [{x[0]!r}, {x[-1]!r}]")
        i = int(np.searchsorted(x, x_target, side="right")) - 1
        i = min(max(i, 0), len(x) - 2)
        if x_target == x[i]:
            return float(t[i])
        if x_target == x[i + 1]:
            return float(t[i + 1])
        dt = t[i + 1] - t[i]
        if self.dense is not None:
            coeffs = self.dense[i]
            poly = np.polynomial.Polynomial(np.concatenate([[x[i] - x_target], dt * coeffs]))
            s = brentq(poly, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            return float(t[i] + s * dt)
        h = x[i + 1] - x[i]
        s = (x_target - x[i]) / h
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        return float(h00 * t[i] + h10 * h / v[i] + h01 * t[i + 1] + h11 * h / v[i + 1])


def time_of_flight(state: SuperpositionState, consts: PhysicalConstants, x_start: float, x_end: float) -> float:
    """Exact travel time between two points of the free velocity field."""
    if state.degenerate:
        raise DegenerateStateError("total reflection: the particle never arrives")
    if not x_end > x_start:
        raise DomainError("x_end must exceed x_start")
    k, rho, phi = state.k, state.rho, state.phi
    v0 = consts.speed(k)
    rho2 = rho * rho
    oscillation = (rho / k) * (math.sin(2 * k * x_end - phi) - math.sin(2 * k * x_start - phi))
    return ((1 + rho2) * (x_end - x_start) + oscillation) / (v0 * (1 - rho2))


def analytic_trajectory(state: SuperpositionState, consts: PhysicalConstants, x0: float, times) -> Trajectory:
    """Invert :func:`time_of_flight` by root finding at each requested time."""
    v_min, v_max = v_extremes(state, consts)
    times = np.asarray(times, dtype=float)
    xs = []
    for t in times:
        if t == 0.0:
            xs.append(x0)
            continue
        lo, hi = x0 + 0.5 * v_min * t, x0 + 2.0 * v_max * t
        xs.append(
            brentq(
                lambda x: time_of_flight(state, consts, x0, x) - t,
                lo,
                hi,
                xtol=1e-15 * max(1.0, abs(x0)),
                rtol=4 * np.finfo(float).eps,
            )
        )
    xs = np.array(xs)
    return Trajectory(
        t=times,
        x=xs,
        v=velocity_at(state, consts, xs),
        Q=quantum_potential_at(state, consts, xs),
        method="analytic",
    )


def integrate(
    field: Callable[[float], float],
    x0: float,
    t_end: float,
    tol: float = DEFAULT_TOL,
    *,
    potential: Callable | None = None,
    length_scale: float = 1.0,
    v_ref: float | None = None,
    max_dx: float | None = None,
    t_stall: float | None = None,
) -> Trajectory:
    """Integrate ``dx/dt = field(x)`` from ``x0`` over ``[0, t_end]``.

    Parameters
    ----------
    field : callable
        Scalar velocity field.
    tol : float
        Local error bound per step, relative to ``length_scale``.
    potential : callable, optional
        Vectorised quantum potential evaluated at the samples; ``Q`` is NaN
        when omitted.
    length_scale : float
        Characteristic length (e.g. the field period); sets the absolute part
        of the error scale and the minimum step.
    v_ref : float, optional
        Reference speed for stall detection; defaults to ``|field(x0)|``.
    max_dx : float, optional
        Upper bound on the distance covered by one step.
    t_stall : float, optional
        How long the speed may stay below ``1e-9 * v_ref`` before
        :class:`StallError` is raised. Defaults to ``1e-3 * t_end``.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    v_start = float(field(x0))
    v_ref = abs(v_start) if v_ref is None else v_ref
    v_stall = STALL_FRACTION * v_ref
    t_stall = 1e-3 * t_end if t_stall is None else t_stall
    h_min = MIN_STEP_FRACTION * length_scale / max(v_ref, np.finfo(float).tiny)

    ts, xs, vs = [0.0], [float(x0)], [v_start]
    dense = []
    n_acc = n_rej = 0
    max_err = 0.0
    stalled_for = 0.0

    t, x, f0 = 0.0, float(x0), v_start
    h = 0.01 * length_scale / abs(f0) if f0 != 0 else 1e-3 * t_end
    h = min(h, t_end)

    while t < t_end:
        if max_dx is not None and f0 != 0:
            h = min(h, max_dx / abs(f0))
        last = t + h >= t_end
        if last:
            h = t_end - t

        k = [f0]
        for row in _A[1:]:
            k.append(float(field(x + h * sum(a * ki for a, ki in zip(row, k)))))
        x_new = x + h * sum(b * ki for b, ki in zip(_A[6], k))
        err = abs(h * sum(e * ki for e, ki in zip(_E, k)))
        scale = tol * max(abs(x_new - x), MIN_STEP_FRACTION * length_scale)
        ratio = err / scale

        if ratio <= 1.0:
            t = t_end if last else t + h
            x, f0 = x_new, k[6]
            ts.append(t)
            xs.append(x)
            vs.append(f0)
            dense.append(np.dot(k, _P))
            n_acc += 1
            max_err = max(max_err, err)
            if abs(f0) < v_stall:
                stalled_for += h
                if stalled_for >= t_stall:
                    raise StallError(f"particle stalled at x = {x!r} (t = {t!r})", x=x, t=t)
            else:
                stalled_for = 0.0
            factor = 5.0 if ratio == 0 else min(5.0, 0.9 * ratio**-0.2)
        else:
            n_rej += 1
            factor = max(0.2, 0.9 * ratio**-0.2)
        h *= factor
        if h < h_min and t < t_end:
            raise StepFailureError(f"step size {h!r} below minimum {h_min!r} at x = {x!r}")

    xs_arr = np.array(xs)
    Q = potential(xs_arr) if potential is not None else np.full_like(xs_arr, np.nan)
    return Trajectory(
        t=np.array(ts),
        x=xs_arr,
        v=np.array(vs),
        Q=Q,
        method="ode",
        n_accepted=n_acc,
        n_rejected=n_rej,
        max_local_error=max_err,
        dense=np.array(dense).reshape(-1, 4),
    )


def integrate_state(
    state: SuperpositionState,
    consts: PhysicalConstants,
    x0: float,
    t_end: float,
    tol: float = DEFAULT_TOL,
) -> Trajectory:
    """ODE trajectory along the free plane-wave field."""
    period = state.period
    return integrate(
        lambda x: velocity_at(state, consts, x),
        x0,
        t_end,
        tol,
        potential=lambda x: quantum_potential_at(state, consts, x),
        length_scale=period,
        v_ref=consts.speed(state.k),
        max_dx=period / 8,
    )


def integrate_barrier(
    sol: ScatteringSolution,
    b: SquareBarrier,
    consts: PhysicalConstants,
    x0: float,
    t_end: float,
    tol: float = DEFAULT_TOL,
) -> Trajectory:
    """ODE trajectory across a square barrier."""
    period = math.pi / sol.k
    return integrate(
        lambda x: barrier_velocity_at(sol, b, consts, x),
        x0,
        t_end,
        tol,
        potential=lambda x: barrier_quantum_potential_at(sol, b, consts, x),
        length_scale=period,
        v_ref=consts.speed(sol.k),
        max_dx=min(period, b.a) / 8,
    )


def measure_average_velocity(
    traj: Trajectory, k: float, x_start: float | None = None, x_limit: float | None = None
) -> float:
    """Distance over time across the largest whole number of periods ``pi/k``.

    The window begins at ``x_start`` (default: the first sample) and ends no
    later than ``x_limit`` (default: the last sample), so that e.g. only the
    region in front of an obstacle is measured.
    """
    period = math.pi / k
    x_start = float(traj.x[0]) if x_start is None else x_start
    x_last = float(traj.x[-1]) if x_limit is None else min(x_limit, float(traj.x[-1]))
    n_periods = math.floor((x_last - x_start) / period)
    if n_periods < 1:
        raise SpanTooShortError("trajectory spans less than one period of the velocity field")
    x_end = x_start + n_periods * period
    if x_end > x_last:
        n_periods -= 1
        x_end = x_start + n_periods * period
    if n_periods < 1:
        raise SpanTooShortError("trajectory spans less than one period of the velocity field")
    return (x_end - x_start) / (traj.time_at(x_end) - traj.time_at(x_start))
