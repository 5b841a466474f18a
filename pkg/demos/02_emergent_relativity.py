"""
Relativistic kinematics from a reflection coefficient
=====================================================

"""

import math

import numpy as np

from bohmsr.relativity import (
    SRParticle,
    locate_resonance,
    sr_report,
    transmission_curve,
)
from bohmsr.wavefield import PhysicalConstants

consts = PhysicalConstants()

print(f"{'v0/c':>10} {'rho^2':>12} {'v_av/c':>12} {'gamma':>12} {'E/E_bohm - 1':>14}")
for v0 in np.geomspace(math.sqrt(2), 1e3, 8):
    r = sr_report(SRParticle(1.0, 1.0, float(v0)))
    print(f"{v0:10.4f} {r.rho_sq:12.8f} {r.v_av:12.8f} {r.gamma:12.4f} {r.E / r.E_bohm - 1:14.2e}")

# v0 = 2c is the clean case
r = sr_report(SRParticle(1.0, 1.0, 2.0))
print("v0 = 2c:", r.v_av, math.sqrt(3) / 2, r.gamma)

# photon-like coefficient pins the mean at c
for v0 in (1.0, 3.0, 30.0):
    print("photon", v0, sr_report(SRParticle(1.0, 1.0, v0), "photon").v_av)

# transmission against total energy
curve = transmission_curve(consts.rest_energy, 10 * consts.rest_energy, 10, consts)
print(curve)
E_res = locate_resonance(consts)
print("resonance at E/E0 =", E_res, " sqrt(3) =", math.sqrt(3))
print("peak T^2 =", sr_report(SRParticle.from_energy(E_res, consts)).T_sq, 2 / (1 + 3**0.75))
