"""Rademacher moments S(p) = 2^-N sum_eps |sum_n c_n eps_n|^p.

Two independent routes compute S: exhaustive enumeration of sign vectors in
floating point, and (for even p = 2k) the multinomial expansion in exact
rational arithmetic.  The module also evaluates the combinatorial ratio
constant of the even-moment argument and Haagerup's sharp constant B_p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, NonpositiveP, PLessThanOne, ShapeMismatch

MAX_EXHAUSTIVE_N = 24
MAX_COMPOSITIONS = 10**6
BOUND_SLACK = 1e-9

_GRAY_BLOCK = 8


@dataclass(frozen=True)
class RademacherInstance:
    c: tuple[float, ...]
    p: float

    def __post_init__(self):
        if len(self.c) == 0:
            raise ShapeMismatch("need at least one coefficient")
        if not all(math.isfinite(x) for x in self.c):
            raise ShapeMismatch("coefficients must be finite reals")
        if not self.p >= 1:
            raise PLessThanOne(f"p must be >= 1, got {self.p!r}")

    @property
    def N(self) -> int:
        return len(self.c)

    @property
    def l2_norm(self) -> float:
        return math.hypot(*self.c)


@dataclass(frozen=True)
class MomentReport:
    p: float
    lhs: float
    bound_theorem: float
    bound_haagerup: float
    ratio: float
    ratio_haagerup: float
    verdict: bool
    verdict_haagerup: bool
    # measured multinomial ratio constant C, only for even integer p
    ratio_constant: Fraction | None = None


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def gray_flips(n: int) -> Iterator[tuple[int, int]]:
    """Yield (bit, new_value) for the 2^n - 1 single-bit steps of the Gray walk."""
    prev = 0
    for i in range(1, 1 << n):
        g = gray_code(i)
        bit = (g ^ prev).bit_length() - 1
        yield bit, (g >> bit) & 1
        prev = g


def _gray_block_sums(c: np.ndarray) -> np.ndarray:
    """All 2^n signed sums of a short block, in Gray order.

    Starts from all signs +1 and updates the running sum by +-2 c_b for the
    one flipped coordinate b at each step.
    """
    n = len(c)
    idx = np.arange(1, 1 << n)
    g = idx ^ (idx >> 1)
    flipped = g ^ ((idx - 1) ^ ((idx - 1) >> 1))
    bit = np.log2(flipped).astype(np.int64)
    went_negative = (g >> bit) & 1
    delta = np.where(went_negative == 1, -2.0, 2.0) * c[bit]
    sums = np.empty(1 << n)
    sums[0] = math.fsum(c.tolist())
    np.cumsum(delta, out=sums[1:])
    sums[1:] += sums[0]
    return sums


def signed_sums(c: Sequence[float], max_n: int = MAX_EXHAUSTIVE_N) -> Iterator[np.ndarray]:
    """Chunks covering sum_n c_n eps_n over every eps in {+-1}^N.

    Coordinates are split into blocks of at most 8; each block is walked in
    Gray order (so the running sum only ever drifts over <= 256 steps) and
    blocks are combined by outer addition.
    """
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1 or c.size == 0:
        raise ShapeMismatch("coefficients must be a non-empty flat list")
    if c.size > max_n:
        raise CapExceeded(f"2^{c.size} sign vectors exceeds cap 2^{max_n}")
    blocks = [_gray_block_sums(c[i:i + _GRAY_BLOCK]) for i in range(0, c.size, _GRAY_BLOCK)]
    inner = blocks[-1]
    outer = blocks[:-1]
    # fold all but the outermost block into one inner vector of <= 2^16 entries
    while len(outer) > 1:
        inner = (outer.pop()[:, None] + inner[None, :]).ravel()
    if not outer:
        yield inner
        return
    for h in outer[0]:
        yield h + inner


def khintchine_sum_exhaustive(c: Sequence[float], p: float, max_n: int = MAX_EXHAUSTIVE_N) -> float:
    """S(p) by enumerating all 2^N sign patterns."""
    if not p >= 1:
        raise PLessThanOne(f"p must be >= 1, got {p!r}")
    n = len(c)
    terms = itertools.chain.from_iterable(
        (np.abs(s) ** p).tolist() for s in signed_sums(c, max_n)
    )
    return math.ldexp(math.fsum(terms), -n)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def partitions(total: int, max_parts: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Nonincreasing positive parts summing to `total`, at most `max_parts` of them."""
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions(total - first, max_parts - 1, first):
            yield (first,) + rest


def multinomial(n: int, parts: Sequence[int]) -> int:
    out = math.factorial(n)
    for t in parts:
        out //= math.factorial(t)
    return out


def _composition_count(k: int, n: int) -> int:
    return math.comb(k + n - 1, n - 1)


def khintchine_sum_even_exact(c: Sequence, k: int, cap: int = MAX_COMPOSITIONS) -> Fraction:
    """S(2k) as an exact rational via the multinomial expansion.

    Odd powers of a sign average to zero, so only exponents (2t_1, ..., 2t_N)
    with sum t = k survive:
        S(2k) = sum_t multinomial(2k; 2t) prod_n (c_n^2)^t_n.
    Floats in `c` are converted exactly with ``Fraction``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sq = [Fraction(x) ** 2 for x in c]
    if not sq:
        raise ShapeMismatch("coefficients must be non-empty")
    count = _composition_count(k, len(sq))
    if count > cap:
        raise CapExceeded(f"{count} compositions of {k} into {len(sq)} parts exceeds cap {cap}")
    powers = [[s**j for j in range(k + 1)] for s in sq]
    total = Fraction(0)
    for t in compositions(k, len(sq)):
        term = Fraction(multinomial(2 * k, [2 * x for x in t]))
        for pw, tn in zip(powers, t):
            if tn:
                term *= pw[tn]
        total += term
    return total


def multinomial_ratio(t: Sequence[int]) -> Fraction:
    k = sum(t)
    return Fraction(multinomial(2 * k, [2 * x for x in t]), multinomial(k, t))


def multinomial_ratio_max(k: int, n: int, cap: int = MAX_COMPOSITIONS) -> Fraction:
    """max over compositions t of k into n parts of binom(2k; 2t) / binom(k; t).

    The ratio is invariant under permuting t and ignores zero parts, so the
    maximum is taken over integer partitions of k with at most n parts.
    """
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    best = None
    seen = 0
    for part in partitions(k, n):
        seen += 1
        if seen > cap:
            raise CapExceeded(f"more than {cap} partitions of {k}")
        r = multinomial_ratio(part)
        if best is None or r > best:
            best = r
    return best


def haagerup_constant(p: float) -> float:
    """Sharp upper Khintchine constant B_p (1 for p <= 2)."""
    if not p > 0:
        raise NonpositiveP(f"p must be positive, got {p!r}")
    if p <= 2:
        return 1.0
    log_ratio = math.lgamma((p + 1) / 2) - 0.5 * math.log(math.pi)
    return math.sqrt(2.0) * math.exp(log_ratio / p)


def theorem_bound(l2_norm: float, p: float) -> float:
    return p ** (p / 2) * l2_norm**p


def khintchine_bound_check(inst: RademacherInstance, max_n: int = MAX_EXHAUSTIVE_N) -> MomentReport:
    lhs = khintchine_sum_exhaustive(inst.c, inst.p, max_n)
    norm = inst.l2_norm
    bound = theorem_bound(norm, inst.p)
    bound_h = (haagerup_constant(inst.p) * norm) ** inst.p
    ratio_constant = None
    if float(inst.p).is_integer() and int(inst.p) % 2 == 0:
        k = int(inst.p) // 2
        if _composition_count(k, inst.N) <= MAX_COMPOSITIONS:
            ratio_constant = multinomial_ratio_max(k, inst.N)
    return MomentReport(
        p=inst.p,
        lhs=lhs,
        bound_theorem=bound,
        bound_haagerup=bound_h,
        ratio=lhs / bound if bound else 0.0,
        ratio_haagerup=lhs / bound_h if bound_h else 0.0,
        verdict=lhs <= bound * (1 + BOUND_SLACK),
        verdict_haagerup=lhs <= bound_h * (1 + BOUND_SLACK),
        ratio_constant=ratio_constant,
    )
