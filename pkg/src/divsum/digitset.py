"""Classification of integers by digit-permutation divisibility by 5.

An integer belongs to the set A when some rearrangement of its decimal
digits (the identity included, leading zeros disallowed) is divisible by 5.
B is the part of A not itself divisible by 5.  Because a number is divisible
by 5 exactly when its last digit is 0 or 5, membership in A reduces to
"contains a digit 0 or 5"; the equivalence is argued in the README and
property-tested against explicit permutation witnesses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import floor, log

# digits allowed in the complement of A
NON_A_DIGITS = frozenset("12346789")

# exponent of the complement's growth: ln 8 / ln 10
NON_A_EXPONENT = log(8.0) / log(10.0)

MAX_CLASSIFY = 1 << 64
MAX_WITNESS = 10**18


class DigitClass(enum.Enum):
    NON_A = "non-A"
    B_MEMBER = "B"
    MULTIPLE_OF_FIVE = "multiple-of-5"


@dataclass(frozen=True)
class DigitMultiset:
    """Digit population of a positive integer's decimal representation."""

    counts: tuple[int, ...]  # occurrences of digits 0..9
    length: int

    @classmethod
    def of_int(cls, n: int) -> "DigitMultiset":
        s = str(n)
        counts = [0] * 10
        for ch in s:
            counts[ord(ch) - 48] += 1
        return cls(tuple(counts), len(s))


def _check_range(n: int, upper: int, what: str) -> None:
    if not isinstance(n, int):
        raise TypeError(f"{what} expects an integer, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"{what} is defined for positive integers only (got {n})")
    if n >= upper:
        raise ValueError(f"{what} supports n < {upper} (got {n})")


def classify(n: int) -> DigitClass:
    """Three-way digit class of n: multiple of 5, B member, or neither."""
    _check_range(n, MAX_CLASSIFY, "classify")
    if n % 5 == 0:
        return DigitClass.MULTIPLE_OF_FIVE
    s = str(n)
    if "0" in s or "5" in s:
        return DigitClass.B_MEMBER
    return DigitClass.NON_A


def _smallest_with_suffix(counts: list[int], last: int) -> str | None:
    """Smallest decimal string over the multiset ending in `last`.

    Leading zeros are disallowed for lengths > 1; returns None when every
    arrangement would need one.
    """
    rest = counts.copy()
    rest[last] -= 1
    n_rest = sum(rest)
    if n_rest == 0:
        return str(last) if last != 0 else None
    lead = next((d for d in range(1, 10) if rest[d] > 0), None)
    if lead is None:
        return None
    rest[lead] -= 1
    middle = "".join(str(d) * rest[d] for d in range(10))
    return f"{lead}{middle}{last}"


def permutation_witness(n: int) -> str | None:
    """Smallest no-leading-zero digit rearrangement of n divisible by 5.

    Returns None exactly when classify(n) is NON_A.  Uses direct digit
    placement, so cost is O(digits), never factorial enumeration.
    """
    _check_range(n, MAX_WITNESS, "permutation_witness")
    ms = DigitMultiset.of_int(n)
    counts = list(ms.counts)
    candidates = []
    for last in (0, 5):
        if counts[last] > 0:
            w = _smallest_with_suffix(counts, last)
            if w is not None:
                candidates.append(w)
    if not candidates:
        return None
    # equal length, so lexicographic order is numeric order
    return min(candidates)


def count_non_a(x: int) -> int:
    """Exact |{n in [1, x] : classify(n) = NON_A}| by digit DP, O(digits)."""
    if not isinstance(x, int):
        raise TypeError("count_non_a expects an integer bound")
    if x < 0:
        raise ValueError("count_non_a expects x >= 0")
    if x == 0:
        return 0
    digits = str(x)
    k = len(digits)
    # all shorter lengths: every digit free over the 8 allowed values
    total = (8**k - 8) // 7  # 8 + 8^2 + ... + 8^(k-1)
    # same length, compare against x digit by digit
    for i, ch in enumerate(digits):
        below = sum(1 for d in NON_A_DIGITS if d < ch)
        total += below * 8 ** (k - 1 - i)
        if ch not in NON_A_DIGITS:
            return total
    return total + 1  # x itself qualifies


def non_a_bound(x: float) -> tuple[float, bool]:
    """Envelope (64/7) * x^(ln8/ln10) and whether the exact count obeys it."""
    if x < 1:
        raise ValueError("non_a_bound expects x >= 1")
    bound = (64.0 / 7.0) * x**NON_A_EXPONENT
    holds = count_non_a(floor(x)) <= bound
    return bound, holds
