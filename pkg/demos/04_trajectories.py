import math

from bohmsr.barrier import SquareBarrier, solve_barrier
from bohmsr.errors import StallError
from bohmsr.trajectory import (
    integrate_barrier,
    integrate_state,
    measure_average_velocity,
    time_of_flight,
)
from bohmsr.wavefield import PhysicalConstants, SuperpositionState, average_velocity

consts = PhysicalConstants()

# mean speed measured from a trajectory vs the closed form
for rho in (0.1, 0.5, 0.9):
    state = SuperpositionState(1.0, rho)
    x0 = -20 * math.pi
    t_end = 1.05 * time_of_flight(state, consts, x0, x0 + 10 * math.pi)
    traj = integrate_state(state, consts, x0, t_end)
    print(rho, measure_average_velocity(traj, state.k), average_velocity(rho, 1.0), traj.diagnostics())

# total reflection: nothing moves
try:
    integrate_state(SuperpositionState(1.0, 1.0), consts, -1.0, 10.0)
except StallError as err:
    print("stalled:", err)

# a particle crossing a barrier
b = SquareBarrier(V0=2.0, a=1.0)
sol = solve_barrier(b, 1.5, consts)
traj = integrate_barrier(sol, b, consts, -10.0, 60.0)
print("final x:", traj.x[-1], " min v inside:", traj.v[(traj.x > 0) & (traj.x < 1)].min())
