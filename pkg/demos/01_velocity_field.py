"""
Velocity field of an incident plus reflected plane wave
=======================================================

"""

import numpy as np

from bohmsr.wavefield import (
    PhysicalConstants,
    SuperpositionState,
    amplitude_phase_at,
    quantum_potential_at,
    superluminal_threshold,
    v_extremes,
    velocity_at,
)

consts = PhysicalConstants()
state = SuperpositionState(k=1.0, rho=0.5)

# one spatial period of the field
x = np.linspace(-state.period, 0.0, 9)
for xi, vi, qi in zip(x, velocity_at(state, consts, x), quantum_potential_at(state, consts, x)):
    print(f"x = {xi:+.4f}   v = {vi:.6f}   Q = {qi:+.6f}")

lo, hi = v_extremes(state, consts)
print("v_min, v_max:", lo, hi, " product:", lo * hi)

# the phase-gradient route gives the same velocity
sample = amplitude_phase_at(state, consts, x)
print("max |v_closed - v_phase|:", np.max(np.abs(sample.v - velocity_at(state, consts, x))))

# a slow particle can still have superluminal local speed
beta = 0.01
k = consts.wavenumber(beta)
rho_c = superluminal_threshold(beta, consts.c)
for rho in (0.5 * rho_c, rho_c, 0.5 * (1 + rho_c)):
    print(f"rho = {rho:.6f}   v_max / c = {v_extremes(SuperpositionState(k, rho), consts)[1]:.6f}")

# peak speed vs reflection
for rho in (0.0, 0.3, 0.6, 0.9, 0.99):
    print(rho, v_extremes(SuperpositionState(1.0, rho), consts)[1])
