"""Acceptance criteria, one test per check; tests are named test_cNN_*.

A summary line per criterion is printed at the end of the run (see
conftest.py).
"""

import math
import time
import warnings

import numpy as np
import pytest

from ecasym.continuum import (
    PdeGrid,
    blow_up_time,
    duffing_integrate,
    ode_closed_form,
    ode_integrate,
    pde_integrate,
)
from ecasym.evolution import RIGHT_HALF, center_column, evolve_single_seed, support
from ecasym.reproduce import reproduce
from ecasym.rule22 import cardinality22, mersenne_poly, poly22, support22
from ecasym.rule_algebra import census, classify
from ecasym.statistics import (
    DEFAULT_SEED,
    block_entropy,
    deviation,
    equidistribution_test,
    fit_power_law,
    mutual_information,
    sensitivity_profile,
)

pytestmark = pytest.mark.acceptance


@pytest.fixture(scope="module")
def rule22_rows():
    return evolve_single_seed(22, 256)


# 1. closed-form cardinality, m <= 64, exact, < 1 s
def test_c01_cardinality(rule22_rows):
    start = time.perf_counter()
    rows = evolve_single_seed(22, 64)
    mismatches = [m for m in range(1, 65) if cardinality22(m) != rows[m].count()]
    elapsed = time.perf_counter() - start
    assert mismatches == []
    assert elapsed < 1.0


# 2. recursion vs simulation, m <= 64 and m <= 256, exact, < 5 s
def test_c02_recursion(rule22_rows):
    start = time.perf_counter()
    bad = [m for m in range(1, 257) if support22(m) != support(rule22_rows[m], RIGHT_HALF).positions]
    elapsed = time.perf_counter() - start
    assert bad == []
    assert elapsed < 5.0


# 3. degree and Mersenne product, exact
def test_c03_degree():
    assert all(max(support22(m)) == m for m in range(1, 257))


def test_c03_mersenne():
    assert all(mersenne_poly(n) == poly22(2 ** n - 1) for n in range(2, 7))


# 4. census
def test_c04_twelve_symmetric_nonlinear():
    assert len(census().symmetric_nonlinear) == 12


def test_c04_rule22_symmetric():
    assert classify(22).s3_symmetric


def test_c04_rule22_tri_permutive():
    r = classify(22)
    assert r.left_permutive and r.right_permutive and r.center_permutive


def test_c04_rule30_left_permutive_only():
    r = classify(30)
    assert r.left_permutive and not r.right_permutive and not r.center_permutive and not r.s3_symmetric


# 5. deviation fit, full-row counts, m <= 128, b in [0.95, 1.30], < 10 s
def test_c05_deviation_fit():
    start = time.perf_counter()
    fit = fit_power_law(deviation(128, "total"))
    elapsed = time.perf_counter() - start
    print(f"b = {fit.slope:.4f}, r^2 = {fit.r_squared:.3f}, n = {fit.n_points}")
    assert 0.95 <= fit.slope <= 1.30
    assert elapsed < 10.0


# 6. sensitivity asymmetry, rule 30, t = 20, 5000 trials, < 60 s
def test_c06_asymmetry():
    start = time.perf_counter()
    p = sensitivity_profile(30, 20, 5000, DEFAULT_SEED)
    elapsed = time.perf_counter() - start
    interior = [p.estimate(j) for j in range(-19, 0)]
    print(f"sigma_L/sigma_R = {p.ratio:.3f}, interior left mean = {np.mean(interior):.3f}")
    assert 2.5 <= p.ratio <= 4.0
    assert 0.40 <= np.mean(interior) <= 0.60
    assert elapsed < 60.0


def test_c06_edge_exact():
    for t in range(1, 5):
        assert sensitivity_profile(30, t, exhaustive=True).estimate(-t) == 1.0


# 7. rule 22 exhaustive profile is mirror symmetric, t <= 10
def test_c07_symmetric_profile():
    for t in range(1, 11):
        p = sensitivity_profile(22, t, exhaustive=True)
        assert all(p.estimate(j) == p.estimate(-j) for j in range(1, t + 1))


# 8. equidistribution
def test_c08_rule30_exhaustive():
    for t in (1, 2, 3):
        assert equidistribution_test(30, t, exhaustive=True).p_hat == 0.5


def test_c08_rule22_exhaustive():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ps = [equidistribution_test(22, t, exhaustive=True).p_hat for t in (1, 2, 3)]
    print(f"rule 22 exhaustive p for t=1..3: {ps}")
    assert ps == [0.5, 0.5, 0.5]


@pytest.mark.parametrize("code", [30, 22])
def test_c08_sampled(code):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        z = equidistribution_test(code, 10, 100_000, DEFAULT_SEED).z_score
    print(f"rule {code}, t=10: z = {z:.3f}")
    assert abs(z) < 4


# 9. mutual information, rule 30, t = 20, 1e5 trials, < 5e-4 bits, < 2 min
def test_c09_mutual_information():
    start = time.perf_counter()
    mi = mutual_information(30, 20, 100_000, DEFAULT_SEED)
    elapsed = time.perf_counter() - start
    print(f"I = {mi:.3e} bits")
    assert 0 <= mi < 5e-4
    assert elapsed < 120.0


# 10. block statistics of the rule 30 center column, N = 4096, < 1 s
def test_c10_block_statistics():
    start = time.perf_counter()
    rep = block_entropy(center_column(30, 4095), 8)
    elapsed = time.perf_counter() - start
    assert rep.sequence_length == 4096
    assert rep[8].H_n / 8 > 0.99
    assert all(rep[n].p_n == 2 ** n for n in range(1, 7))
    assert elapsed < 1.0


# 11. continuum numerics
def test_c11_ode_vs_closed_form():
    m_star = blow_up_time(1.0)
    tr = ode_integrate(1.0, 0.9 * m_star, 1e-5)
    exact = np.array([ode_closed_form(1.0, m) for m in tr.m])
    assert np.max(np.abs(tr.u - exact) / exact) < 1e-6


def test_c11_blow_up_time():
    tr = ode_integrate(1.0, 1.0, 1e-5)
    assert tr.blown_up
    assert abs(tr.blown_up_at - 0.25 * math.log(3)) / (0.25 * math.log(3)) < 0.01


def test_c11_duffing_energy():
    assert duffing_integrate(1.0, 0.0, 10.0, 1e-4).energy_drift < 1e-8


def test_c11_pde_constant():
    m_star = blow_up_time(1.0)
    _, snaps = pde_integrate(PdeGrid.constant(1.0, 8, 0.5, 2e-6), 0.9 * m_star, record_every=1000)
    worst = max(abs(v.max() - ode_closed_form(1.0, m)) / ode_closed_form(1.0, m) for m, v in snaps)
    assert worst < 1e-4


def test_c11_pde_even():
    grid = PdeGrid.bump(2.0, 1.0, 201, 0.05, 0.001, boundary="zero")
    _, snaps = pde_integrate(grid, 0.5, record_every=25)
    assert all(np.max(np.abs(v - v[::-1])) == 0.0 for _, v in snaps)


# 12. reproduce: < 5 min, byte-stable across reruns and thread counts
def test_c12_reproduce(tmp_path):
    start = time.perf_counter()
    reproduce(tmp_path / "a")
    elapsed = time.perf_counter() - start
    reproduce(tmp_path / "b")
    reproduce(tmp_path / "c", threads=4)
    assert elapsed < 300.0
    names = sorted(p.name for p in (tmp_path / "a").iterdir() if p.name != "manifest.json")
    for other in ("b", "c"):
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / other / name).read_bytes(), name
