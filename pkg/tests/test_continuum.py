import math

import numpy as np
import pytest

from ecasym.continuum import (
    BLOW_UP_THRESHOLD,
    BlowUpError,
    PdeGrid,
    StabilityError,
    blow_up_time,
    duffing_integrate,
    ode_closed_form,
    ode_integrate,
    pde_integrate,
    rule30_transport_speed,
)
from ecasym.rule_algebra import DomainError


def test_blow_up_time_values():
    assert blow_up_time(1.0) == pytest.approx(0.25 * math.log(3), rel=1e-15)
    assert blow_up_time(1.0) == pytest.approx(0.274653, abs=1e-6)
    assert blow_up_time(math.sqrt(2)) == pytest.approx(0.173287, abs=1e-6)
    assert blow_up_time(1.0) > blow_up_time(10.0) > blow_up_time(100.0) > 0
    with pytest.raises(DomainError):
        blow_up_time(0.0)


def test_closed_form_basics():
    assert ode_closed_form(1.0, 0.0) == 1.0
    assert ode_closed_form(1.0, 0.27) > 10
    with pytest.raises(BlowUpError):
        ode_closed_form(1.0, blow_up_time(1.0))
    with pytest.raises(DomainError):
        ode_closed_form(-1.0, 0.1)


@pytest.mark.parametrize("u0", [0.1, 0.5, 1.0, 2.0])
def test_closed_form_solves_ode(u0):
    # central differences at several interior times
    h = 1e-6
    for frac in (0.0, 0.3, 0.6):
        m = frac * blow_up_time(u0) + (h if frac == 0 else 0)
        deriv = (ode_closed_form(u0, m + h) - ode_closed_form(u0, m - h)) / (2 * h)
        u = ode_closed_form(u0, m)
        assert deriv == pytest.approx(2 * u + u ** 3, rel=1e-6)


@pytest.mark.parametrize("u0", [0.1, 1.0, 2.0])
def test_rk4_matches_closed_form(u0):
    tr = ode_integrate(u0, 0.9 * blow_up_time(u0), 1e-5)
    exact = np.array([ode_closed_form(u0, m) for m in tr.m])
    assert np.max(np.abs(tr.u - exact) / exact) < 1e-6
    assert not tr.blown_up


def test_rk4_order():
    m_end = 0.9 * blow_up_time(1.0)
    errs = []
    for dt in (1e-3, 5e-4, 2.5e-4):
        tr = ode_integrate(1.0, m_end, dt)
        errs.append(abs(tr.u[-1] - ode_closed_form(1.0, tr.m[-1])))
    for a, b in zip(errs, errs[1:]):
        assert 13 < a / b < 20


def test_fixed_point():
    tr = ode_integrate(0.0, 5.0, 1e-2)
    assert np.all(tr.u == 0) and not tr.blown_up


def test_blow_up_detection():
    tr = ode_integrate(1.0, 1.0, 1e-5)
    assert tr.blown_up
    assert abs(tr.u[-1]) > BLOW_UP_THRESHOLD
    assert tr.blown_up_at == pytest.approx(blow_up_time(1.0), rel=1e-2)


def test_duffing_energy():
    tr = duffing_integrate(1.0, 0.0, 10.0, 1e-4)
    assert tr.energy[0] == 1.25
    assert tr.energy_drift < 1e-8


def test_duffing_rest():
    tr = duffing_integrate(0.0, 0.0, 1.0, 1e-2)
    assert np.all(tr.u == 0)


def test_duffing_period_and_return():
    tr = duffing_integrate(1.0, 0.0, 20.0, 1e-3)
    period = tr.period()
    assert period is not None and 0 < period < 20
    # back near the start after one period
    i = int(round(period / 1e-3))
    assert abs(tr.u[i] - 1.0) < 1e-4 and abs(tr.v[i]) < 1e-3
    # hardening spring: faster than the linear period 2*pi/sqrt(2)
    assert period < 2 * math.pi / math.sqrt(2)


def test_pde_zero_stays_zero():
    out = pde_integrate(PdeGrid.constant(0.0, 21, 0.1, 0.004), 1.0)
    assert np.all(out.values == 0) and out.blown_up_at is None


def test_pde_constant_matches_ode():
    u0 = 1.0
    m_end = 0.9 * blow_up_time(u0)
    out, snaps = pde_integrate(PdeGrid.constant(u0, 8, 0.5, 2e-6), m_end, record_every=2000)
    for m, v in snaps:
        exact = ode_closed_form(u0, m)
        assert np.all(v == v[0])
        assert abs(v[0] - exact) / exact < 1e-4
    assert out.m == pytest.approx(m_end)


def test_pde_blow_up_close_to_m_star():
    out = pde_integrate(PdeGrid.constant(1.0, 8, 0.5, 1e-5), 1.0)
    assert out.blown_up_at == pytest.approx(blow_up_time(1.0), rel=1e-2)


@pytest.mark.parametrize("boundary", ["periodic", "zero"])
def test_pde_even_data_stays_even(boundary):
    grid = PdeGrid.bump(1.5, 1.0, 201, 0.05, 0.001, boundary=boundary)
    assert np.array_equal(grid.values, grid.values[::-1])
    out, snaps = pde_integrate(grid, 0.3, record_every=10)
    for _, v in snaps:
        assert np.array_equal(v, v[::-1])


def test_advection_breaks_parity():
    grid = PdeGrid.bump(0.5, 1.0, 201, 0.05, 0.001, boundary="zero")
    out = pde_integrate(grid, 0.2, advect=True)
    assert not np.allclose(out.values, out.values[::-1])
    assert np.allclose(rule30_transport_speed([0.0, 1.0]), [3.0, 6.0])


def test_stability_guard():
    grid = PdeGrid.constant(0.1, 11, 0.1, 0.01)
    with pytest.raises(StabilityError):
        pde_integrate(grid, 0.1)
    pde_integrate(grid, 0.02, enforce_stability=False)
