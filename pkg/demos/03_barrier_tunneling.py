"""
Square barrier, deep tunnelling
===============================

"""

import numpy as np

from bohmsr.barrier import SquareBarrier, scan_barrier, solve_barrier, thick_barrier_scaling
from bohmsr.wavefield import PhysicalConstants, average_velocity

consts = PhysicalConstants()
b = SquareBarrier(V0=50.0, a=10.0)

sol = solve_barrier(b, 1.0, consts)
print("|r|^2 + |t|^2 - 1 =", sol.reflection + sol.transmission - 1)

# an above-barrier case for contrast
print(solve_barrier(SquareBarrier(1.0, 2.0), 3.0, consts).transmission)

v0s = np.geomspace(0.05, 0.2, 6)
table = scan_barrier(b, v0s, consts)
for v0, T_sq, v_av in table:
    print(f"v0 = {v0:.4f}   T^2 = {T_sq:.3e}   v_av = {v_av:.3e}")

# left of the barrier the state is a plain superposition with u = r,
# but rho rounds to 1 here, so the (1 - rho^2) form loses everything
state = sol.incident_state()
v0 = consts.speed(state.k)
print(average_velocity(state.rho, v0), "vs", v0 * sol.transmission / (2 - sol.transmission))

print("log-log slope:", thick_barrier_scaling(b, (0.05, 0.2), consts))
