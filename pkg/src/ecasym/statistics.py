"""Empirical measurements on Rule 22 / Rule 30 and friends.

Random initial conditions are finite windows of i.i.d. fair bits covering
exactly the dependence cone of the observed cells, so no boundary is ever
modeled. Windows are evolved bit-sliced (`evaluate_lanes`), 8 trials per byte.

Randomness is counter based: the bits of trial i are a splitmix64 hash of
(seed, i, word index). A trial's window therefore does not depend on how
trials are chunked or scheduled, and any number of worker threads gives the
same counts.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .evolution import RIGHT_HALF, evaluate_lanes, iter_single_seed, support
from .rule22 import cardinality22, right_half_count22
from .rule_algebra import DomainError, RuleSpec, as_rule

__all__ = [
    "DEFAULT_SEED",
    "EXHAUSTIVE_MAX_WIDTH",
    "EntropyReport",
    "FitResult",
    "InsufficientDataError",
    "SensitivityProfile",
    "block_entropy",
    "deviation",
    "equidistribution_test",
    "fit_power_law",
    "mutual_information",
    "plugin_mutual_information",
    "random_windows",
    "sensitivity_profile",
]

DEFAULT_SEED = 0x5EED_2230
# automatic exhaustive mode up to 2**24 windows; explicit requests may go to 2**26
EXHAUSTIVE_MAX_WIDTH = 24
EXHAUSTIVE_HARD_LIMIT = 26
CHUNK = 1 << 13

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MASK64 = (1 << 64) - 1


class InsufficientDataError(DomainError):
    pass


# ---------------------------------------------------------------- sampling


def _splitmix64(x: np.ndarray) -> np.ndarray:
    x = x + _GOLDEN
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _seed_key(seed: int) -> np.uint64:
    s = np.array([seed & _MASK64], dtype=np.uint64)
    return _splitmix64(s)[0]


def random_windows(seed: int, start: int, stop: int, width: int) -> np.ndarray:
    """Bits of trials start..stop-1 as a bool array of shape (n, width).

    Word w of trial i is splitmix64(key(seed) + golden * (i * nwords + w));
    cell k is bit k % 64 of word k // 64.
    """
    nwords = (width + 63) // 64
    idx = np.arange(start, stop, dtype=np.uint64)[:, None] * np.uint64(nwords)
    idx = idx + np.arange(nwords, dtype=np.uint64)[None, :]
    with np.errstate(over="ignore"):
        words = _splitmix64(_seed_key(seed) + idx * _GOLDEN)
    shifts = np.arange(64, dtype=np.uint64)
    bits = ((words[:, :, None] >> shifts) & np.uint64(1)).astype(bool)
    return bits.reshape(stop - start, nwords * 64)[:, :width]


def _sampled_lanes(seed: int, start: int, stop: int, width: int) -> np.ndarray:
    bits = random_windows(seed, start, stop, width)
    return np.packbits(bits.T, axis=1, bitorder="little")


def _exhaustive_lanes(width: int) -> np.ndarray:
    """Lanes enumerating all 2**width windows; window n has cell k = bit k of n."""
    nbytes = max(1, (1 << width) // 8)
    byte_idx = np.arange(nbytes, dtype=np.int64)
    lanes = np.empty((width, nbytes), dtype=np.uint8)
    for k in range(width):
        if k < 3:
            lanes[k] = (0xAA, 0xCC, 0xF0)[k]
        else:
            lanes[k] = np.where((byte_idx >> (k - 3)) & 1, 0xFF, 0x00)
    return lanes


def _unpack(lane: np.ndarray, n: int) -> np.ndarray:
    return np.unpackbits(lane, count=n, bitorder="little").astype(bool)


def _chunks(trials: int):
    return [(s, min(s + CHUNK, trials)) for s in range(0, trials, CHUNK)]


def _map_chunks(fn, trials: int, threads: int):
    spans = _chunks(trials)
    if threads <= 1 or len(spans) == 1:
        return [fn(a, b) for a, b in spans]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ab: fn(*ab), spans))


def _use_exhaustive(exhaustive: bool | None, width: int) -> bool:
    if exhaustive is None:
        return width <= EXHAUSTIVE_MAX_WIDTH
    if exhaustive and width > EXHAUSTIVE_HARD_LIMIT:
        raise DomainError(f"exhaustive enumeration of 2**{width} windows is too large")
    return bool(exhaustive)


# ------------------------------------------------------------- sensitivity


@dataclass(frozen=True)
class SensitivityProfile:
    rule_code: int
    t: int
    offsets: tuple[int, ...]
    estimates: tuple[float, ...]
    flips: tuple[int, ...]
    trials: int
    seed: int | None
    exhaustive: bool
    sigma_left: float = field(init=False)
    sigma_right: float = field(init=False)

    def __post_init__(self):
        left = math.fsum(e for j, e in zip(self.offsets, self.estimates) if j < 0)
        right = math.fsum(e for j, e in zip(self.offsets, self.estimates) if j > 0)
        object.__setattr__(self, "sigma_left", left)
        object.__setattr__(self, "sigma_right", right)

    @property
    def ratio(self) -> float:
        return self.sigma_left / self.sigma_right if self.sigma_right else math.inf

    def estimate(self, j: int) -> float:
        return self.estimates[j + self.t]


def sensitivity_profile(
    rule: RuleSpec | int,
    t: int,
    trials: int = 5000,
    seed: int = DEFAULT_SEED,
    exhaustive: bool | None = False,
    threads: int = 1,
) -> SensitivityProfile:
    """Probability that flipping cell j at time 0 changes eta_t(0).

    Offsets j run over -t..t. In exhaustive mode every one of the 2**(2t+1)
    windows is used and the estimates are exact; `trials` and `seed` are then
    ignored. ``exhaustive=None`` picks exhaustive mode when it is cheap.
    """
    if t < 1 or trials < 1:
        raise DomainError("need t >= 1 and trials >= 1")
    rule = as_rule(rule)
    width = 2 * t + 1
    offsets = tuple(range(-t, t + 1))

    if _use_exhaustive(exhaustive, width):
        n = 1 << width
        f = _unpack(evaluate_lanes(rule, _exhaustive_lanes(width), t)[0], n)
        flips = []
        for k in range(width):
            half = f.reshape(-1, 2, 1 << k)
            flips.append(2 * int(np.count_nonzero(half[:, 0, :] != half[:, 1, :])))
        return SensitivityProfile(rule.code, t, offsets, tuple(c / n for c in flips),
                                  tuple(flips), n, None, True)

    def run(a: int, b: int) -> np.ndarray:
        lanes = _sampled_lanes(seed, a, b, width)
        base = evaluate_lanes(rule, lanes, t)[0]
        counts = np.zeros(width, dtype=np.int64)
        for k in range(width):
            lanes[k] ^= 0xFF
            out = evaluate_lanes(rule, lanes, t)[0]
            lanes[k] ^= 0xFF
            counts[k] = np.count_nonzero(_unpack(out ^ base, b - a))
        return counts

    total = sum(_map_chunks(run, trials, threads))
    flips = tuple(int(c) for c in total)
    return SensitivityProfile(rule.code, t, offsets, tuple(c / trials for c in flips),
                              flips, trials, seed, False)


# -------------------------------------------------------- equidistribution


@dataclass(frozen=True)
class EquidistributionResult:
    rule_code: int
    t: int
    ones: int
    trials: int
    seed: int | None
    exhaustive: bool

    @property
    def p_hat(self) -> float:
        return self.ones / self.trials

    @property
    def z_score(self) -> float:
        return (self.p_hat - 0.5) / math.sqrt(0.25 / self.trials)


def equidistribution_test(
    rule: RuleSpec | int,
    t: int,
    trials: int = 100_000,
    seed: int = DEFAULT_SEED,
    exhaustive: bool | None = False,
    threads: int = 1,
) -> EquidistributionResult:
    """Fraction of random windows with eta_t(0) = 1, and its z-score against 1/2."""
    if t < 1:
        raise DomainError("t must be >= 1")
    rule = as_rule(rule)
    if not rule.left_permutive:
        warnings.warn(f"rule {rule.code} is not left-permutive; no equidistribution is implied",
                      stacklevel=2)
    width = 2 * t + 1
    if _use_exhaustive(exhaustive, width):
        n = 1 << width
        out = evaluate_lanes(rule, _exhaustive_lanes(width), t)[0]
        ones = int(np.count_nonzero(_unpack(out, n)))
        return EquidistributionResult(rule.code, t, ones, n, None, True)
    if trials < 1:
        raise DomainError("trials must be >= 1")

    def run(a: int, b: int) -> int:
        out = evaluate_lanes(rule, _sampled_lanes(seed, a, b, width), t)[0]
        return int(np.count_nonzero(_unpack(out, b - a)))

    ones = sum(_map_chunks(run, trials, threads))
    return EquidistributionResult(rule.code, t, ones, trials, seed, False)


# ------------------------------------------------------- mutual information


def plugin_mutual_information(x, y) -> float:
    """Plug-in mutual information (bits) between two discrete samples."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape != y.shape or x.size == 0:
        raise DomainError("x and y must be non-empty and of equal length")
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    joint = np.zeros((xi.max() + 1, yi.max() + 1), dtype=np.int64)
    np.add.at(joint, (xi, yi), 1)
    return _mi_from_counts(joint)


def _mi_from_counts(joint: np.ndarray) -> float:
    n = joint.sum()
    p = joint / n
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    nz = p > 0
    return float(np.sum(p[nz] * np.log2(p[nz] / (px @ py)[nz])))


def mutual_information(
    rule: RuleSpec | int,
    t: int,
    trials: int = 100_000,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
) -> float:
    """Plug-in I(eta_t(-1); (eta_t(0), eta_t(1))) in bits.

    Windows cover positions -t-1..t+1, the union of the three cones.
    """
    return mutual_information_counts(rule, t, trials, seed, threads)[0]


def mutual_information_counts(rule, t, trials=100_000, seed=DEFAULT_SEED, threads=1):
    """As `mutual_information`, also returning the 2x4 joint count table."""
    if t < 1 or trials < 1:
        raise DomainError("need t >= 1 and trials >= 1")
    rule = as_rule(rule)
    width = 2 * t + 3

    def run(a: int, b: int) -> np.ndarray:
        out = evaluate_lanes(rule, _sampled_lanes(seed, a, b, width), t)
        x, c0, c1 = (_unpack(out[i], b - a).astype(np.int64) for i in range(3))
        return np.bincount(4 * x + 2 * c0 + c1, minlength=8)

    joint = sum(_map_chunks(run, trials, threads)).reshape(2, 4)
    return _mi_from_counts(joint), joint


# --------------------------------------------------------- block entropy


@dataclass(frozen=True)
class BlockStat:
    n: int
    H_n: float
    p_n: int


@dataclass(frozen=True)
class EntropyReport:
    sequence_length: int
    max_n: int
    entries: tuple[BlockStat, ...]

    def __getitem__(self, n: int) -> BlockStat:
        return self.entries[n - 1]


def block_entropy(sequence, max_n: int) -> EntropyReport:
    """Shannon entropy H_n (bits) and distinct-block count p_n of overlapping n-blocks."""
    seq = np.asarray(sequence, dtype=np.int64)
    if max_n < 1 or max_n > 62:
        raise DomainError("max_n must be in 1..62")
    if seq.size < max_n:
        raise DomainError(f"sequence of length {seq.size} is shorter than max_n={max_n}")
    if np.any((seq != 0) & (seq != 1)):
        raise DomainError("sequence must be binary")
    entries = []
    for n in range(1, max_n + 1):
        blocks = np.lib.stride_tricks.sliding_window_view(seq, n)
        codes = blocks @ (1 << np.arange(n, dtype=np.int64))
        _, counts = np.unique(codes, return_counts=True)
        p = counts / counts.sum()
        h = float(-np.sum(p * np.log2(p)))
        entries.append(BlockStat(n, max(h, 0.0), int(counts.size)))
    return EntropyReport(int(seq.size), max_n, tuple(entries))


# -------------------------------------------------------------- deviation


def active_counts(code: int, max_m: int, view: str = "total") -> list[int]:
    """Simulated active-cell counts for m = 1..max_m (``total`` or ``right``)."""
    out = []
    for row in iter_single_seed(code, max_m):
        if row.generation == 0:
            continue
        out.append(row.count() if view == "total" else len(support(row, RIGHT_HALF)))
    return out


def deviation(max_m: int, view: str = "total", rule22_source: str = "formula") -> list[tuple[int, int]]:
    """eps(m) = count30(m) - count22(m) for m = 1..max_m.

    Both rules are counted the same way: full row (``total``) or
    right half (``right``). Rule 30 is simulated; Rule 22 comes from its
    closed form unless ``rule22_source="simulation"``.
    """
    if max_m < 1:
        raise DomainError("max_m must be >= 1")
    if view not in ("total", "right"):
        raise DomainError(f"unknown view {view!r}")
    c30 = active_counts(30, max_m, view)
    if rule22_source == "simulation":
        c22 = active_counts(22, max_m, view)
    else:
        closed = cardinality22 if view == "total" else right_half_count22
        c22 = [closed(m) for m in range(1, max_m + 1)]
    return [(m, a - b) for m, a, b in zip(range(1, max_m + 1), c30, c22)]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    filter_note: str
    excluded: tuple[int, ...] = ()


def fit_power_law(points) -> FitResult:
    """OLS fit of ln(eps) = b ln(m) + c over the points with eps > 0."""
    pts = [(float(m), float(e)) for m, e in points]
    keep = [(m, e) for m, e in pts if e > 0 and m > 0]
    excluded = tuple(int(m) if m == int(m) else m for m, e in pts if not (e > 0 and m > 0))
    if len(keep) < 2:
        raise InsufficientDataError(f"need at least 2 positive points, got {len(keep)}")
    x = np.log([m for m, _ in keep])
    y = np.log([e for _, e in keep])
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise InsufficientDataError("all points share the same m")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    note = f"excluded {len(excluded)} non-positive points" + (f" at m={list(excluded)}" if excluded else "")
    return FitResult(slope, intercept, r2, len(keep), note, excluded)
