"""Both sides of the upper Marcinkiewicz-Zygmund inequality on X^N.

For independent coordinates x_1..x_N drawn from a finite space and centered
functions f_n,

    E |sum_n f_n(x_n)|^p  <=  (4p)^(p/2) E (sum_n |f_n(x_n)|^2)^(p/2).

Integrals over X^N are computed exactly by enumerating the product space, or
estimated by Monte Carlo with index-addressable random draws.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core_space import (
    DiscreteProbabilitySpace,
    as_complex_array,
    compensated_sum,
    weighted_mean,
)
from .errors import CapExceeded, NotCentered, PLessThanOne, ShapeMismatch, TooFewSamples
from .rng import counter_uniforms

MAX_TUPLES = 10**7
CENTER_TOL = 1e-10
BOUND_SLACK = 1e-9
MC_SIGMAS = 3.0
MIN_SAMPLES = 100

_INNER_MAX = 1 << 16
_MC_CHUNK = 1 << 15
_MC_STREAM = 0x4D5A


def center_check(space: DiscreteProbabilitySpace, f_table) -> list[float]:
    """|weighted mean| of every row."""
    rows = np.atleast_2d(as_complex_array(f_table, "function table"))
    return [abs(weighted_mean(space, row)) for row in rows]


@dataclass(frozen=True)
class CenteredFamily:
    space: DiscreteProbabilitySpace
    f: np.ndarray
    p: float

    def __post_init__(self):
        f = np.atleast_2d(as_complex_array(self.f, "family"))
        if f.ndim != 2 or f.shape[1] != self.space.size or f.shape[0] == 0:
            raise ShapeMismatch(f"family must be N x {self.space.size}, got {f.shape}")
        if not self.p >= 1:
            raise PLessThanOne(f"p must be >= 1, got {self.p!r}")
        residuals = center_check(self.space, f)
        worst = int(np.argmax(residuals))
        if residuals[worst] > CENTER_TOL:
            raise NotCentered(f"row {worst} has mean of modulus {residuals[worst]!r}")
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @property
    def N(self) -> int:
        return self.f.shape[0]

    @property
    def constant(self) -> float:
        return (4 * self.p) ** (self.p / 2)


@dataclass(frozen=True)
class MZReport:
    lhs: float
    rhs_core: float
    bound: float
    method: str
    samples: int
    verdict: bool
    lhs_se: float = 0.0
    rhs_se: float = 0.0

    @property
    def ratio(self) -> float:
        return self.lhs / self.bound if self.bound else 0.0

    @property
    def orthogonality_ratio(self) -> float:
        """lhs / rhs_core: equals one at p = 2 for centered independent terms."""
        return self.lhs / self.rhs_core if self.rhs_core else 0.0


def product_chunks(
    space: DiscreteProbabilitySpace, rows: Sequence[np.ndarray], cap: int = MAX_TUPLES
) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Enumerate X^D for D = len(rows), yielding (weight, sum, square_sum) chunks.

    For a tuple (x_1..x_D): weight = prod mu(x_d), sum = sum_d rows[d](x_d),
    square_sum = sum_d |rows[d](x_d)|^2.  The trailing coordinates are
    expanded by broadcasting; the leading ones are walked as an odometer.
    """
    m = space.size
    d = len(rows)
    if m**d > cap:
        raise CapExceeded(f"{m}^{d} tuples exceeds cap {cap}")
    w = space.weights
    inner_dims = 0
    while inner_dims < d and m ** (inner_dims + 1) <= _INNER_MAX:
        inner_dims += 1
    inner_w = np.ones(1)
    inner_s = np.zeros(1, dtype=np.complex128)
    inner_q = np.zeros(1)
    for row in rows[d - inner_dims:]:
        inner_w = (inner_w[:, None] * w[None, :]).ravel()
        inner_s = (inner_s[:, None] + row[None, :]).ravel()
        inner_q = (inner_q[:, None] + (np.abs(row) ** 2)[None, :]).ravel()
    outer_rows = rows[: d - inner_dims]
    for idx in itertools.product(range(m), repeat=len(outer_rows)):
        ow, os_, oq = 1.0, 0j, 0.0
        for row, j in zip(outer_rows, idx):
            ow *= w[j]
            os_ += row[j]
            oq += abs(row[j]) ** 2
        yield ow * inner_w, os_ + inner_s, oq + inner_q


def _fsum_chunks(chunks) -> float:
    return math.fsum(itertools.chain.from_iterable(c.tolist() for c in chunks))


def _lhs_terms(chunks, p):
    for w, s, _ in chunks:
        yield w * np.abs(s) ** p


def _rhs_terms(chunks, p):
    for w, _, q in chunks:
        yield w * q ** (p / 2)


def mz_lhs_exhaustive(fam: CenteredFamily, cap: int = MAX_TUPLES) -> float:
    """E |sum_n f_n(x_n)|^p over the product measure."""
    return _fsum_chunks(_lhs_terms(product_chunks(fam.space, list(fam.f), cap), fam.p))


def mz_rhs_exhaustive(fam: CenteredFamily, cap: int = MAX_TUPLES) -> float:
    """E (sum_n |f_n(x_n)|^2)^(p/2), without the (4p)^(p/2) factor."""
    return _fsum_chunks(_rhs_terms(product_chunks(fam.space, list(fam.f), cap), fam.p))


def mz_exhaustive(fam: CenteredFamily, cap: int = MAX_TUPLES) -> MZReport:
    lhs_parts, rhs_parts = [], []
    for w, s, q in product_chunks(fam.space, list(fam.f), cap):
        lhs_parts.append(w * np.abs(s) ** fam.p)
        rhs_parts.append(w * q ** (fam.p / 2))
    lhs = _fsum_chunks(lhs_parts)
    rhs = _fsum_chunks(rhs_parts)
    bound = fam.constant * rhs
    n_tuples = fam.space.size**fam.N
    return MZReport(lhs, rhs, bound, "exhaustive", n_tuples, lhs <= bound * (1 + BOUND_SLACK))


def symmetrized_rows(f: np.ndarray) -> list[np.ndarray]:
    """Rows (-1)^n f_ceil(n/2) for n = 1..2N: each f_n enters as f_n(x_2n) - f_n(x_2n-1)."""
    out = []
    for row in f:
        out.append(-row)
        out.append(row)
    return out


def symmetrization_lhs(fam: CenteredFamily, cap: int = MAX_TUPLES) -> tuple[float, float]:
    """(E|sum f_n(x_n)|^p, E|sum_n f_n(x_2n) - f_n(x_2n-1)|^p); the first never exceeds the second."""
    original = mz_lhs_exhaustive(fam, cap)
    sym = _fsum_chunks(_lhs_terms(product_chunks(fam.space, symmetrized_rows(fam.f), cap), fam.p))
    return original, sym


def sample_points(space: DiscreteProbabilitySpace, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF map from uniforms to point indices; zero-weight points are never hit."""
    cdf = np.cumsum(space.weights)
    idx = np.searchsorted(cdf, u, side="right")
    last = int(np.flatnonzero(space.weights > 0)[-1])
    return np.minimum(idx, last)


def mean_and_se(values: np.ndarray) -> tuple[float, float]:
    n = len(values)
    mean = compensated_sum(values) / n
    var = compensated_sum((values - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def mz_monte_carlo(fam: CenteredFamily, samples: int, seed: int) -> MZReport:
    """Estimate both sides from `samples` independent tuples.

    Sample i uses the counter block (seed, i), so estimates do not depend on
    chunking.  The verdict is taken on the paired difference
    |S|^p - (4p)^(p/2) Q^(p/2): it passes unless its mean exceeds three
    standard errors.
    """
    if samples < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {samples}")
    n = fam.N
    lhs_vals, rhs_vals = [], []
    for start in range(0, samples, _MC_CHUNK):
        count = min(_MC_CHUNK, samples - start)
        u = counter_uniforms(seed, _MC_STREAM, start, count, n)
        pts = sample_points(fam.space, u)
        vals = fam.f[np.arange(n)[None, :], pts]
        lhs_vals.append(np.abs(vals.sum(axis=1)) ** fam.p)
        rhs_vals.append((np.abs(vals) ** 2).sum(axis=1) ** (fam.p / 2))
    lhs_v = np.concatenate(lhs_vals)
    rhs_v = np.concatenate(rhs_vals)
    lhs, lhs_se = mean_and_se(lhs_v)
    rhs, rhs_se = mean_and_se(rhs_v)
    diff, diff_se = mean_and_se(lhs_v - fam.constant * rhs_v)
    verdict = diff <= MC_SIGMAS * diff_se + BOUND_SLACK * fam.constant * rhs
    return MZReport(lhs, rhs, fam.constant * rhs, "monte-carlo", samples, verdict, lhs_se, rhs_se)
