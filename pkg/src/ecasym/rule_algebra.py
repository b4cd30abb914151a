"""Boolean algebra of elementary CA rules.

Neighborhood convention: input (a, b, c) = (left, center, right) is the
truth-table index k = 4a + 2b + c, so bit k of the Wolfram code is the
output for that neighborhood.

ANF masks use the monomial order (1, a, b, c, ab, ac, bc, abc): bit 0 is the
constant term, bit 7 is abc.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

__all__ = [
    "DomainError",
    "MONOMIALS",
    "RuleSpec",
    "anf_of_rule",
    "anf_string",
    "census",
    "classify",
    "evaluate_anf",
    "mirror",
    "truth_table",
    "zeta",
]


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


MONOMIALS = ("1", "a", "b", "c", "a*b", "a*c", "b*c", "a*b*c")

# variable subset of each monomial, as a truth-table style index (a=4, b=2, c=1)
_MONOMIAL_SUBSET = (0, 4, 2, 1, 6, 5, 3, 7)
_DEGREE = tuple(bin(s).count("1") for s in _MONOMIAL_SUBSET)


def _check_code(code: int) -> None:
    if not isinstance(code, int) or isinstance(code, bool) or not 0 <= code <= 255:
        raise DomainError(f"rule code must be an integer in 0..255, got {code!r}")


def truth_table(code: int) -> tuple[int, ...]:
    """Outputs for k = 0..7, with k = 4a + 2b + c."""
    _check_code(code)
    return tuple((code >> k) & 1 for k in range(8))


def _mobius(values: list[int]) -> list[int]:
    # subset-sum transform over F2; it is its own inverse
    out = list(values)
    for bit in (1, 2, 4):
        for s in range(8):
            if s & bit:
                out[s] ^= out[s ^ bit]
    return out


def anf_of_rule(code: int) -> int:
    """ANF monomial mask of a rule, computed by Möbius inversion.

    >>> anf_of_rule(22) == 0b10001110   # a + b + c + abc
    True
    """
    coeffs = _mobius(list(truth_table(code)))
    mask = 0
    for pos, subset in enumerate(_MONOMIAL_SUBSET):
        if coeffs[subset]:
            mask |= 1 << pos
    return mask


def zeta(mask: int) -> tuple[int, ...]:
    """Truth table (k = 0..7) of the XOR of the monomials in `mask`."""
    if not 0 <= mask <= 255:
        raise DomainError(f"ANF mask must fit in 8 bits, got {mask!r}")
    coeffs = [0] * 8
    for pos, subset in enumerate(_MONOMIAL_SUBSET):
        coeffs[subset] = (mask >> pos) & 1
    return tuple(_mobius(coeffs))


def evaluate_anf(mask: int, a: int, b: int, c: int) -> int:
    """Evaluate the ANF directly, monomial by monomial."""
    inputs = {4: a, 2: b, 1: c}
    out = 0
    for pos, subset in enumerate(_MONOMIAL_SUBSET):
        if not (mask >> pos) & 1:
            continue
        term = 1
        for var, val in inputs.items():
            if subset & var:
                term &= val
        out ^= term
    return out


def anf_terms(mask: int) -> list[str]:
    return [MONOMIALS[pos] for pos in range(8) if (mask >> pos) & 1]


def anf_string(mask: int) -> str:
    """Human-readable ANF, e.g. ``"a + b + c + a*b*c"``; ``"0"`` if empty."""
    terms = anf_terms(mask)
    return " + ".join(terms) if terms else "0"


def mirror(code: int) -> int:
    """Code of the rule obtained by exchanging the left and right inputs."""
    table = truth_table(code)
    out = 0
    for k in range(8):
        a, b, c = (k >> 2) & 1, (k >> 1) & 1, k & 1
        out |= table[4 * c + 2 * b + a] << k
    return out


def _permutive(table: tuple[int, ...], var: int) -> bool:
    # var is the truth-table weight of the input (4 = a, 2 = b, 1 = c)
    return all(table[k] != table[k | var] for k in range(8) if not k & var)


def _s3_symmetric(table: tuple[int, ...]) -> bool:
    for perm in permutations(range(3)):
        for k in range(8):
            bits = ((k >> 2) & 1, (k >> 1) & 1, k & 1)
            pb = [bits[p] for p in perm]
            if table[4 * pb[0] + 2 * pb[1] + pb[2]] != table[k]:
                return False
    return True


def permutive_from_anf(mask: int, var: int) -> bool:
    """Permutivity in `var` read off the ANF.

    The rule is permutive in a variable iff it can be written as
    ``var XOR h(others)``: the degree-1 monomial is present and no
    higher monomial contains the variable.
    """
    linear_pos = _MONOMIAL_SUBSET.index(var)
    if not (mask >> linear_pos) & 1:
        return False
    for pos, subset in enumerate(_MONOMIAL_SUBSET):
        if (mask >> pos) & 1 and subset & var and _DEGREE[pos] >= 2:
            return False
    return True


@dataclass(frozen=True)
class RuleSpec:
    code: int
    truth_table: tuple[int, ...]
    anf_mask: int
    s3_symmetric: bool
    left_permutive: bool
    right_permutive: bool
    center_permutive: bool
    linear: bool

    @property
    def anf(self) -> list[str]:
        return anf_terms(self.anf_mask)

    @property
    def anf_string(self) -> str:
        return anf_string(self.anf_mask)

    @property
    def affine_constant(self) -> bool:
        return bool(self.anf_mask & 1)

    def as_dict(self) -> dict:
        return {
            "code": self.code,
            "anf": self.anf,
            "s3_symmetric": self.s3_symmetric,
            "left_permutive": self.left_permutive,
            "right_permutive": self.right_permutive,
            "center_permutive": self.center_permutive,
            "linear": self.linear,
        }


def classify(code: int) -> RuleSpec:
    """Truth table, ANF and symmetry/permutivity flags of a rule."""
    table = truth_table(code)
    mask = anf_of_rule(code)
    linear = all(_DEGREE[pos] < 2 for pos in range(8) if (mask >> pos) & 1)
    return RuleSpec(
        code=code,
        truth_table=table,
        anf_mask=mask,
        s3_symmetric=_s3_symmetric(table),
        left_permutive=_permutive(table, 4),
        right_permutive=_permutive(table, 1),
        center_permutive=_permutive(table, 2),
        linear=linear,
    )


def as_rule(rule: RuleSpec | int) -> RuleSpec:
    return rule if isinstance(rule, RuleSpec) else classify(rule)


@dataclass(frozen=True)
class Census:
    rules: tuple[RuleSpec, ...]

    @property
    def symmetric(self) -> list[int]:
        return [r.code for r in self.rules if r.s3_symmetric]

    @property
    def symmetric_nonlinear(self) -> list[int]:
        return [r.code for r in self.rules if r.s3_symmetric and not r.linear]

    def summary(self) -> dict:
        rules = self.rules
        return {
            "total": len(rules),
            "s3_symmetric": len(self.symmetric),
            "s3_symmetric_nonlinear": len(self.symmetric_nonlinear),
            "linear": sum(r.linear for r in rules),
            "left_permutive": sum(r.left_permutive for r in rules),
            "right_permutive": sum(r.right_permutive for r in rules),
            "center_permutive": sum(r.center_permutive for r in rules),
            "symmetric_nonlinear_codes": self.symmetric_nonlinear,
        }


def census() -> Census:
    """Classification of all 256 elementary rules."""
    return Census(tuple(classify(code) for code in range(256)))
