"""
Continuum limit
===============

u_m = u_xx + 2u + u^3: finite-time blow-up of the homogeneous solution,
the conservative Duffing oscillator, and the PDE itself.
"""

import numpy as np

from ecasym.continuum import (
    PdeGrid,
    blow_up_time,
    duffing_integrate,
    ode_closed_form,
    ode_integrate,
    pde_integrate,
)

for u0 in (0.1, 1.0, 2.0):
    m_star = blow_up_time(u0)
    tr = ode_integrate(u0, 0.9 * m_star, 1e-5)
    exact = np.array([ode_closed_form(u0, m) for m in tr.m])
    print(f"u0={u0}: m* = {m_star:.6f}, RK4 max rel err on [0, 0.9 m*] = {np.max(np.abs(tr.u / exact - 1)):.1e}")

tr = ode_integrate(1.0, 1.0, 1e-5)
print(f"detected blow-up at m = {tr.blown_up_at:.5f} (m* = {blow_up_time(1.0):.5f})")

d = duffing_integrate(1.0, 0.0, 10.0, 1e-4)
print(f"Duffing: E0 = {d.energy[0]}, relative drift = {d.energy_drift:.1e}, period = {d.period():.4f}")

# an even bump stays exactly even without the transport term, and drifts with it
grid = PdeGrid.bump(0.5, 1.0, 201, 0.05, 0.001, boundary="zero")
sym = pde_integrate(grid, 0.5)
adv = pde_integrate(grid, 0.5, advect=True)
print("parabolic run even:", np.array_equal(sym.values, sym.values[::-1]))
print(f"centre of mass with Rule 30 transport: {np.sum(adv.x * adv.values) / np.sum(adv.values):+.3f}")

big = pde_integrate(PdeGrid.constant(1.0, 16, 0.5, 1e-5), 1.0)
print(f"PDE with u = 1 everywhere blows up at m = {big.blown_up_at:.4f}")
