"""Closed forms for Rule 22 single-seed supports.

Two counts are in play and are kept apart by name:

* ``total``: active cells in the full row at generation m. This is the
  quantity the popcount formula gives (3 cells at m=1, 2 at m=2).
* ``right_half``: |S_m| with S_m = {r >= 0 : eta_m(r) = 1}.

They are related by total = 2*|S_m| - [0 in S_m], since the pattern is
mirror symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .evolution import RIGHT_HALF, iter_single_seed, support
from .rule_algebra import DomainError

__all__ = [
    "PolyF2",
    "cardinality22",
    "mersenne_poly",
    "poly22",
    "right_half_count22",
    "support22",
    "verify_closed_forms",
]


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"m must be an integer >= 1, got {m!r}")


def cardinality22(m: int) -> int:
    """Full-row active-cell count of Rule 22 at generation m.

    2**popcount(m // 2) * 3**(m % 2); exact for any m.
    """
    _check_m(m)
    return (1 << (m >> 1).bit_count()) * (3 if m & 1 else 1)


@dataclass(frozen=True, order=True)
class PolyF2:
    """Polynomial over F2, stored as its sorted exponents."""

    exponents: tuple[int, ...] = field(default=())

    def __post_init__(self):
        exps = tuple(self.exponents)
        if any(e < 0 for e in exps) or any(x >= y for x, y in zip(exps, exps[1:])):
            raise DomainError("exponents must be strictly increasing and non-negative")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_int(cls, value: int) -> PolyF2:
        exps = []
        while value:
            low = value & -value
            exps.append(low.bit_length() - 1)
            value ^= low
        return cls(tuple(exps))

    def to_int(self) -> int:
        out = 0
        for e in self.exponents:
            out |= 1 << e
        return out

    @property
    def degree(self) -> int:
        return self.exponents[-1] if self.exponents else -1

    def __bool__(self) -> bool:
        return bool(self.exponents)

    def __add__(self, other: PolyF2) -> PolyF2:
        return PolyF2.from_int(self.to_int() ^ other.to_int())

    def __mul__(self, other: PolyF2) -> PolyF2:
        # carry-less product
        a, out = self.to_int(), 0
        for e in other.exponents:
            out ^= a << e
        return PolyF2.from_int(out)

    def __str__(self) -> str:
        if not self.exponents:
            return "0"
        return " + ".join("1" if e == 0 else f"x^{e}" for e in self.exponents)


def support22(m: int) -> tuple[int, ...]:
    """Right-half support of Rule 22 at generation m, by recursion only.

    S_1 = {0, 1}, S_2 = {2}; odd m thickens S_{m-1} (every cell spawns
    c-1, c, c+1); even m = 2k keeps the cells of S_k with the parity of k
    and doubles them. Recursion depth is O(log m).
    """
    _check_m(m)
    memo: dict[int, tuple[int, ...]] = {1: (0, 1), 2: (2,)}

    def go(n: int) -> tuple[int, ...]:
        if n in memo:
            return memo[n]
        if n & 1:
            prev = go(n - 1)
            cells = {c + d for c in prev for d in (-1, 0, 1)}
            if -1 in cells:
                # only reachable from S_1, which is a base case
                assert n < 3, "thickening reached a negative position"
                cells.discard(-1)
            out = tuple(sorted(cells))
        else:
            k = n >> 1
            out = tuple(2 * r for r in go(k) if (r - k) % 2 == 0)
        memo[n] = out
        return out

    # iterative warm-up keeps the call stack shallow for large m
    chain = []
    n = m
    while n not in memo:
        chain.append(n)
        n = n - 1 if n & 1 else n >> 1
    for n in reversed(chain):
        go(n)
    return memo[m]


def right_half_count22(m: int) -> int:
    return len(support22(m))


def poly22(m: int) -> PolyF2:
    """Generating polynomial sum of x**r over the right-half support."""
    return PolyF2(support22(m))


def mersenne_poly(n: int) -> PolyF2:
    """x (1 + x + x^2) prod_{j=2}^{n-1} (1 + x^(2^j)), expanded over F2."""
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    p = PolyF2((1, 2, 3))
    for j in range(2, n):
        p = p * PolyF2((0, 1 << j))
    return p


@dataclass
class VerifyReport:
    max_m: int
    cardinality_mismatches: list[int]
    support_mismatches: list[int]
    degree_mismatches: list[int]

    @property
    def ok(self) -> bool:
        return not (self.cardinality_mismatches or self.support_mismatches or self.degree_mismatches)

    def as_dict(self) -> dict:
        return {
            "max_m": self.max_m,
            "ok": self.ok,
            "cardinality_mismatches": self.cardinality_mismatches,
            "support_mismatches": self.support_mismatches,
            "degree_mismatches": self.degree_mismatches,
        }


def verify_closed_forms(max_m: int) -> VerifyReport:
    """Check the closed forms against simulation for 1 <= m <= max_m."""
    card, supp, deg = [], [], []
    for row in iter_single_seed(22, max(max_m, 0)):
        m = row.generation
        if m == 0:
            continue
        if row.count() != cardinality22(m):
            card.append(m)
        right = support(row, RIGHT_HALF).positions
        if right != support22(m):
            supp.append(m)
        if not right or max(right) != m:
            deg.append(m)
    return VerifyReport(max_m, card, supp, deg)
