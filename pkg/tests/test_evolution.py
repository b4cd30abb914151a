from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_evolve, naive_positions
from ecasym.evolution import (
    FULL_ROW,
    RIGHT_HALF,
    Row,
    center_column,
    diagonal_identity_scan,
    evaluate_lanes,
    evolve_single_seed,
    evolve_window,
    render_pbm,
    seed_row,
    step,
    support,
)
from ecasym.rule_algebra import DomainError, census


def test_step_examples():
    row1 = step(seed_row(), 22)
    assert row1.positions() == [-1, 0, 1]
    assert row1.generation == 1 and row1.width == 3 and row1.offset == -1
    assert step(row1, 22).positions() == [-2, 2]


def test_empty_row_stays_empty():
    empty = Row(0, 0, 5)
    for code in range(0, 256, 2):
        assert step(empty, code).count() == 0


@pytest.mark.parametrize("code, m, expected", [
    (30, 3, [-3, -2, 0, 1, 2, 3]),
    (22, 4, [-4, 4]),
])
def test_single_seed_examples(code, m, expected):
    rows = evolve_single_seed(code, m)
    assert len(rows) == m + 1
    assert rows[0].positions() == [0]
    assert rows[m].positions() == expected


def test_rule0_dies():
    rows = evolve_single_seed(0, 5)
    assert all(r.count() == 0 for r in rows[1:])


def test_matches_naive_simulator_for_all_rules():
    for code in range(256):
        fast = evolve_single_seed(code, 24)
        for row, (off, cells) in zip(fast, naive_evolve(code, 24)):
            assert row.positions() == naive_positions(off, cells)


@pytest.mark.parametrize("view, m, expected", [
    (RIGHT_HALF, 1, (0, 1)),
    (RIGHT_HALF, 2, (2,)),
    (RIGHT_HALF, 6, (2, 6)),
    (FULL_ROW, 6, (-6, -2, 2, 6)),
])
def test_support_rule22(view, m, expected):
    assert support(evolve_single_seed(22, m)[m], view).positions == expected


def test_support_views_agree():
    for row in evolve_single_seed(30, 40):
        full = support(row, FULL_ROW).positions
        right = support(row, RIGHT_HALF).positions
        assert right == tuple(p for p in full if p >= 0)
        assert all(x < y for x, y in zip(full, full[1:]))


def test_light_cone_all_rules():
    for code in range(256):
        for row in evolve_single_seed(code, 256):
            pos = row.positions()
            if pos:
                assert -row.generation <= pos[0] and pos[-1] <= row.generation


def test_symmetric_rules_are_mirror_symmetric():
    for r in census().rules:
        if not r.s3_symmetric:
            continue
        for row in evolve_single_seed(r, 64):
            pos = row.positions()
            assert pos == sorted(-p for p in pos)


def test_rule150_is_trinomial_mod2():
    # rule 150 multiplies by (x^-1 + 1 + x) each step
    for row in evolve_single_seed(150, 128):
        m = row.generation
        coeffs = np.zeros(2 * m + 1, dtype=np.int64)
        coeffs[m] = 1
        for _ in range(m):
            coeffs = (np.roll(coeffs, 1) + coeffs + np.roll(coeffs, -1)) % 2
        assert row.positions() == [i - m for i in np.flatnonzero(coeffs)]


def test_rule90_is_pascal_mod2():
    # binomial parity check on the XOR-of-neighbors rule
    for row in evolve_single_seed(90, 128):
        m = row.generation
        expected = [i for i in range(-m, m + 1) if (i - m) % 2 == 0 and comb(m, (m + i) // 2) % 2]
        assert row.positions() == expected


def test_center_column_examples():
    assert center_column(30, 3).tolist() == [1, 1, 0, 1]
    assert center_column(0, 4).tolist() == [1, 0, 0, 0, 0]
    assert center_column(204, 50).tolist() == [1] * 51


def test_center_column_matches_rows():
    rows = evolve_single_seed(30, 100)
    assert center_column(30, 100).tolist() == [r.cell(0) for r in rows]


def test_evolve_window_shrinks():
    init = Row.from_cells([1, 0, 1] * 13 + [1, 1], offset=-20)
    out = evolve_window(30, init, 20)
    assert out.width == 1 and out.offset == 0 and out.generation == 20
    assert evolve_window(30, init, 0) == init
    with pytest.raises(DomainError):
        evolve_window(30, init, 21)


def test_window_matches_padded_single_seed():
    col = center_column(30, 40)
    for t in range(41):
        cells = [0] * (2 * t + 1)
        cells[t] = 1
        out = evolve_window(30, Row.from_cells(cells, offset=-t), t)
        assert out.bits == col[t]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 255), st.lists(st.integers(0, 1), min_size=9, max_size=40), st.integers(0, 4))
def test_window_agrees_with_full_evolution(code, cells, steps):
    init = Row.from_cells(cells, offset=-3)
    win = evolve_window(code, init, steps)
    full = init
    for _ in range(steps):
        full = step(full, code)
    if code & 1:
        return  # the zero background is not quiescent; only compare quiescent rules
    for p in range(win.offset, win.stop):
        assert win.cell(p) == full.cell(p)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 255), st.lists(st.integers(0, 1), min_size=1, max_size=30), st.integers(-50, 50))
def test_step_is_shift_equivariant(code, cells, d):
    row = Row.from_cells(cells, offset=5)
    assert step(row.shifted(d), code) == step(row, code).shifted(d)


def test_evaluate_lanes_matches_rows():
    rng = np.random.default_rng(1)
    bits = rng.integers(0, 2, size=(64, 21)).astype(bool)
    lanes = np.packbits(bits.T, axis=1, bitorder="little")
    for code in (22, 30, 110, 135):
        out = np.unpackbits(evaluate_lanes(code, lanes, 10)[0], bitorder="little")[:64]
        ref = [evolve_window(code, Row.from_cells(b.astype(int)), 10).bits for b in bits]
        assert out.tolist() == ref


def test_diagonal_scan():
    report = diagonal_identity_scan(64)
    assert len(report) == 12
    r30 = next(r for r in report if (r["rule"], r["side"], r["offset"]) == (30, "right", 0))
    assert 2 in r30["first_mismatches"]
    assert all(0.0 <= r["fraction"] <= 1.0 for r in report)


def test_diagonal_scan_vacuous():
    assert all(r["n"] == 0 and r["fraction"] == 1.0 for r in diagonal_identity_scan(0))


def read_pbm(path):
    data = path.read_bytes()
    parts = data.split(b"\n", 2)
    assert parts[0] == b"P4"
    w, h = map(int, parts[1].split())
    rowbytes = (w + 7) // 8
    arr = np.frombuffer(parts[2], dtype=np.uint8).reshape(h, rowbytes)
    return np.unpackbits(arr, axis=1)[:, :w]


@pytest.mark.parametrize("code", [22, 150])
def test_render_symmetric(tmp_path, code):
    path = tmp_path / f"r{code}.pbm"
    assert render_pbm(evolve_single_seed(code, 64), path) == (129, 65)
    img = read_pbm(path)
    assert img.shape == (65, 129)
    assert np.array_equal(img, img[:, ::-1])
    assert img[0].sum() == 1 and img[0, 64] == 1


def test_render_single_pixel(tmp_path):
    path = tmp_path / "seed.pbm"
    render_pbm([seed_row()], path)
    assert read_pbm(path).tolist() == [[1]]


def test_render_empty():
    with pytest.raises(DomainError):
        render_pbm([], "unused.pbm")
