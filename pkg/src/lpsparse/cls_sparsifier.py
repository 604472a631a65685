"""Sparse L^p approximation of f = sum_k lambda_k g_k by random sampling.

Indices are drawn i.i.d. from nu(k) = |lambda_k| / ||lambda||_1 and the
empirical mean (1/L) sum_l sgn(lambda_{k_l}) g_{k_l} approximates
f0 = f / ||lambda||_1.  With L = floor(16p/eps^2) + 1 the expected p-th power
error is at most (16p/L)^(p/2), so some L-tuple has error at most eps^p.

All indices are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .core_space import (
    CoefficientVector,
    DiscreteProbabilitySpace,
    FunctionTable,
    compensated_sum,
    compensated_sum_rows,
    make_coefficients,
    make_function_table,
)
from .errors import (
    BadEpsilon,
    BadP,
    CapExceeded,
    IndexOutOfRange,
    MaxAttemptsExceeded,
    ShapeMismatch,
    TooFewSamples,
)
from .khintchine import compositions, multinomial
from .marcinkiewicz import mean_and_se
from .rng import counter_uniforms

MAX_TUPLES = 10**6
DEFAULT_MAX_ATTEMPTS = 1000
BOUND_SLACK = 1e-9

_ATTEMPT_BATCH = 16
_SPARSIFY_STREAM = 0x5350
_MC_STREAM = 0x4D43
_MC_CHUNK = 4096


@dataclass(frozen=True)
class SparsificationInstance:
    space: DiscreteProbabilitySpace
    g: FunctionTable
    lam: CoefficientVector
    p: float

    def __post_init__(self):
        if not self.p >= 2:
            raise BadP(f"p must be >= 2, got {self.p!r}")
        if self.g.certified_p != self.p:
            raise ShapeMismatch(
                f"function table certified at p={self.g.certified_p}, instance uses p={self.p}"
            )
        if self.g.K != len(self.lam):
            raise ShapeMismatch(f"{self.g.K} functions but {len(self.lam)} coefficients")

    @property
    def K(self) -> int:
        return self.g.K

    @property
    def signed_rows(self) -> np.ndarray:
        """sgn(lambda_k) g_k, shape K x M."""
        return self.lam.signum[:, None] * self.g.values


def make_instance(space: DiscreteProbabilitySpace, g_values, lam_values, p: float) -> SparsificationInstance:
    if not p >= 2:
        raise BadP(f"p must be >= 2, got {p!r}")
    return SparsificationInstance(
        space, make_function_table(space, g_values, p), make_coefficients(lam_values), float(p)
    )


@dataclass(frozen=True)
class SamplingMeasure:
    probs: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.probs > 0)

    def draw(self, u: np.ndarray) -> np.ndarray:
        """Inverse-CDF sampling; indices with probability zero are never returned."""
        cdf = np.cumsum(self.probs)
        idx = np.searchsorted(cdf, u, side="right")
        return np.minimum(idx, self.support[-1])


@dataclass(frozen=True)
class SparsificationResult:
    tuple: tuple[int, ...]
    L: int
    error_p: float
    eps: float
    attempts: int
    seed: int


def sampling_measure(lam: CoefficientVector) -> SamplingMeasure:
    probs = np.abs(lam.values) / lam.l1_norm
    probs.setflags(write=False)
    return SamplingMeasure(probs)


def _weighted_rows(weights: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """sum_k weights[..., k] * rows[k, :], compensated over k."""
    terms = weights[..., None, :] * rows.T  # (..., M, K)
    return compensated_sum_rows(terms.real) + 1j * compensated_sum_rows(terms.imag)


def target_function(inst: SparsificationInstance) -> np.ndarray:
    """f0 = sum_k nu(k) sgn(lambda_k) g_k = f / ||lambda||_1."""
    return _weighted_rows(sampling_measure(inst.lam).probs, inst.signed_rows)


def choose_L(p: float, eps: float) -> int:
    """Smallest L with 16p / (eps^2 L) < 1, computed in exact arithmetic."""
    if not p >= 2:
        raise BadP(f"p must be >= 2, got {p!r}")
    if not 0 < eps <= 1:
        raise BadEpsilon(f"eps must lie in (0, 1], got {eps!r}")
    L = math.floor(16 * Fraction(p) / Fraction(eps) ** 2) + 1
    assert L <= math.ceil(20 * Fraction(p) / Fraction(eps) ** 2)
    return L


def _counts(tuples: np.ndarray, K: int) -> np.ndarray:
    tuples = np.atleast_2d(tuples)
    out = np.zeros((tuples.shape[0], K))
    for i, row in enumerate(tuples):
        out[i] = np.bincount(row, minlength=K)
    return out


def _check_tuple(tup: Sequence[int], K: int) -> np.ndarray:
    arr = np.asarray(tup, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeMismatch("tuple must be a non-empty flat list of indices")
    bad = np.flatnonzero((arr < 0) | (arr >= K))
    if bad.size:
        raise IndexOutOfRange(f"index {arr[bad[0]]} at position {bad[0]} not in 0..{K - 1}")
    return arr


def _approximants(inst: SparsificationInstance, counts: np.ndarray, L: int) -> np.ndarray:
    return _weighted_rows(counts / L, inst.signed_rows)


def _errors(inst: SparsificationInstance, approx: np.ndarray, f0: np.ndarray) -> np.ndarray:
    """Row-wise sum_j mu_j |approx_j - f0_j|^p."""
    return compensated_sum_rows(inst.space.weights * np.abs(approx - f0) ** inst.p)


def empirical_approximant(tup: Sequence[int], inst: SparsificationInstance) -> np.ndarray:
    arr = _check_tuple(tup, inst.K)
    return _approximants(inst, _counts(arr, inst.K), len(arr))[0]


def approximation_error(tup: Sequence[int], inst: SparsificationInstance) -> float:
    """integral of |f0 - (1/L) sum_l sgn(lambda_{k_l}) g_{k_l}|^p dmu (p-th power, not the norm)."""
    arr = _check_tuple(tup, inst.K)
    approx = _approximants(inst, _counts(arr, inst.K), len(arr))
    return float(_errors(inst, approx, target_function(inst))[0])


def sparsify(
    inst: SparsificationInstance,
    eps: float,
    seed: int,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> SparsificationResult:
    """Rejection-sample L-tuples from nu^L until one has error at most eps^p.

    Attempt a draws its L indices from counter block (seed, a), so the
    accepted witness (the lowest successful attempt index) depends on the
    seed alone.
    """
    L = choose_L(inst.p, eps)
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    nu = sampling_measure(inst.lam)
    f0 = target_function(inst)
    target = eps**inst.p
    for start in range(0, max_attempts, _ATTEMPT_BATCH):
        count = min(_ATTEMPT_BATCH, max_attempts - start)
        tuples = nu.draw(counter_uniforms(seed, _SPARSIFY_STREAM, start, count, L))
        errs = _errors(inst, _approximants(inst, _counts(tuples, inst.K), L), f0)
        hits = np.flatnonzero(errs <= target)
        if hits.size:
            i = int(hits[0])
            return SparsificationResult(
                tuple(int(k) for k in tuples[i]), L, float(errs[i]), float(eps), start + i + 1, seed
            )
    raise MaxAttemptsExceeded(
        f"no {L}-tuple with error <= {target!r} in {max_attempts} attempts (seed {seed})"
    )


def expected_error_bound(p: float, L: int) -> float:
    return (16 * p / L) ** (p / 2)


def bad_set_bound(p: float, eps: float, L: int) -> float:
    """min(1, sqrt(16p / (eps^2 L)))."""
    return min(1.0, math.sqrt(16 * p / (eps**2 * L)))


def markov_bound(p: float, eps: float, L: int) -> float:
    """(16p / (eps^2 L))^(p/2): Markov applied directly to the p-th power bound."""
    return min(1.0, (16 * p / (eps**2 * L)) ** (p / 2))


@dataclass(frozen=True)
class ErrorDistribution:
    """Exact law of error_p under nu^L, grouped by index multiset."""

    L: int
    counts: np.ndarray
    weights: np.ndarray
    errors: np.ndarray

    def expected(self) -> float:
        return compensated_sum(self.weights * self.errors)

    def bad_measure(self, eps: float, p: float) -> float:
        return compensated_sum(np.where(self.errors > eps**p, self.weights, 0.0))


def _multisets(support: np.ndarray, K: int, L: int) -> Iterator[np.ndarray]:
    for comp in compositions(L, len(support)):
        row = np.zeros(K)
        row[support] = comp
        yield row


def error_distribution(inst: SparsificationInstance, L: int, cap: int = MAX_TUPLES) -> ErrorDistribution:
    """Enumerate nu^L through index multisets.

    A tuple's error depends only on how often each index occurs, so the
    K^L tuples collapse to multisets weighted by multinomial(L; c) prod nu^c.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if inst.K**L > cap:
        raise CapExceeded(f"{inst.K}^{L} tuples exceeds cap {cap}")
    nu = sampling_measure(inst.lam)
    support = nu.support
    counts = np.array(list(_multisets(support, inst.K, L)))
    weights = np.array([
        multinomial(L, c[support].astype(int).tolist()) * math.prod(nu.probs[support] ** c[support])
        for c in counts
    ])
    errors = _errors(inst, _approximants(inst, counts, L), target_function(inst))
    return ErrorDistribution(L, counts, weights, errors)


def expected_error_exhaustive(inst: SparsificationInstance, L: int, cap: int = MAX_TUPLES) -> float:
    return error_distribution(inst, L, cap).expected()


def bad_set_measure_exhaustive(
    inst: SparsificationInstance, eps: float, L: int, cap: int = MAX_TUPLES
) -> float:
    """nu^L-measure of tuples with error_p > eps^p; eps > 1 is allowed here."""
    if not eps > 0:
        raise BadEpsilon(f"eps must be positive, got {eps!r}")
    return error_distribution(inst, L, cap).bad_measure(eps, inst.p)


@dataclass(frozen=True)
class ErrorEstimate:
    samples: int
    expected: float
    expected_se: float
    bad_frequency: float


def error_monte_carlo(
    inst: SparsificationInstance, L: int, eps: float, samples: int, seed: int
) -> ErrorEstimate:
    """Sampled counterpart of :func:`error_distribution`; sample i uses counter block (seed, i)."""
    if samples < 100:
        raise TooFewSamples(f"need at least 100 samples, got {samples}")
    nu = sampling_measure(inst.lam)
    f0 = target_function(inst)
    parts = []
    for start in range(0, samples, _MC_CHUNK):
        count = min(_MC_CHUNK, samples - start)
        tuples = nu.draw(counter_uniforms(seed, _MC_STREAM, start, count, L))
        parts.append(_errors(inst, _approximants(inst, _counts(tuples, inst.K), L), f0))
    errs = np.concatenate(parts)
    mean, se = mean_and_se(errs)
    bad = float(np.count_nonzero(errs > eps**inst.p)) / samples
    return ErrorEstimate(samples, mean, se, bad)
