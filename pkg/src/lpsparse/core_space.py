"""Finite probability spaces, complex function tables and L^p norms.

Everything here is immutable after construction. Complex scalars are plain
Python ``complex`` / numpy ``complex128``; NaN and infinity are rejected at
every public entry point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    EmptySpace,
    NegativeWeight,
    NonFiniteValue,
    NormExceeded,
    PLessThanOne,
    ShapeMismatch,
    WeightSumNotOne,
    ZeroCoefficients,
)

WEIGHT_SUM_TOL = 1e-12
NORM_SLACK = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def as_complex_array(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue(f"{what} contains NaN or infinity")
    return arr


def compensated_sum(values) -> float | complex:
    """Exactly rounded sum of a 1-D array (real or complex).

    ``math.fsum`` tracks every partial exactly, which subsumes Kahan
    summation and makes the result independent of reduction order.
    """
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))
    return math.fsum(arr.tolist())


def compensated_sum_rows(values: np.ndarray) -> np.ndarray:
    """Neumaier-compensated sums along the last axis, vectorized over rows."""
    values = np.asarray(values, dtype=np.float64)
    total = np.zeros(values.shape[:-1])
    comp = np.zeros(values.shape[:-1])
    for j in range(values.shape[-1]):
        x = values[..., j]
        t = total + x
        big = np.abs(total) >= np.abs(x)
        comp += np.where(big, (total - t) + x, (x - t) + total)
        total = t
    return total + comp


@dataclass(frozen=True)
class DiscreteProbabilitySpace:
    labels: tuple
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.labels)


def make_space(labels: Sequence, weights: Sequence[float]) -> DiscreteProbabilitySpace:
    """Validate and build a finite probability space.

    Weights must be nonnegative and sum to one within 1e-12; they are never
    renormalized here (see :func:`renormalize`).
    """
    labels = tuple(labels)
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1:
        raise ShapeMismatch("weights must be a flat list")
    if len(labels) != len(w):
        raise ShapeMismatch(f"{len(labels)} labels but {len(w)} weights")
    if len(w) == 0:
        raise EmptySpace("a probability space needs at least one point")
    if not np.all(np.isfinite(w)):
        raise NonFiniteValue("weights contain NaN or infinity")
    neg = np.flatnonzero(w < 0)
    if neg.size:
        raise NegativeWeight(f"weight at index {neg[0]} is negative ({w[neg[0]]!r})")
    total = compensated_sum(w)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise WeightSumNotOne(f"weights sum to {total!r}, not 1 (tolerance {WEIGHT_SUM_TOL})")
    return DiscreteProbabilitySpace(labels, _frozen(w))


def renormalize(weights: Sequence[float]) -> list[float]:
    """Explicitly rescale nonnegative weights to sum to one."""
    w = np.asarray(weights, dtype=np.float64)
    total = compensated_sum(w)
    if not total > 0:
        raise WeightSumNotOne("cannot renormalize weights with nonpositive sum")
    return (w / total).tolist()


def uniform_space(m: int) -> DiscreteProbabilitySpace:
    return make_space(range(m), np.full(m, 1.0 / m))


def signum(z: complex) -> complex:
    """z/|z| for nonzero z, and 0 at the origin."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteValue(f"signum of non-finite value {z!r}")
    if z == 0:
        return 0j
    return z / abs(z)


def signum_array(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    mod = np.abs(z)
    out = np.zeros_like(z)
    nz = mod > 0
    out[nz] = z[nz] / mod[nz]
    return out


def _check_row(space: DiscreteProbabilitySpace, f) -> np.ndarray:
    f = as_complex_array(f, "function row")
    if f.shape != (space.size,):
        raise ShapeMismatch(f"row has shape {f.shape}, space has {space.size} points")
    return f


def lp_norm(space: DiscreteProbabilitySpace, f, p: float) -> float:
    """(sum_j w_j |f_j|^p)^(1/p) with compensated accumulation."""
    if not p >= 1:
        raise PLessThanOne(f"p must be >= 1, got {p!r}")
    f = _check_row(space, f)
    mod = np.abs(f)
    scale = mod.max(initial=0.0)
    if scale == 0:
        return 0.0
    # factor out the largest modulus so |f|^p cannot overflow for large p
    total = compensated_sum(space.weights * (mod / scale) ** p)
    return scale * total ** (1.0 / p)


def weighted_mean(space: DiscreteProbabilitySpace, f) -> complex:
    f = _check_row(space, f)
    return complex(compensated_sum(space.weights * f))


@dataclass(frozen=True)
class FunctionTable:
    """K x M table of values g_k(x_j), certified to have L^p norm at most one."""

    values: np.ndarray
    certified_p: float
    norms: np.ndarray = field(repr=False)

    @property
    def K(self) -> int:
        return self.values.shape[0]


def make_function_table(space: DiscreteProbabilitySpace, values, p: float) -> FunctionTable:
    vals = as_complex_array(values, "function table")
    if vals.ndim != 2 or vals.shape[1] != space.size:
        raise ShapeMismatch(
            f"function table must be K x {space.size}, got shape {vals.shape}"
        )
    if vals.shape[0] == 0:
        raise ShapeMismatch("function table has no rows")
    norms = np.array([lp_norm(space, row, p) for row in vals])
    bad = np.flatnonzero(norms > 1 + NORM_SLACK)
    if bad.size:
        k = int(bad[0])
        raise NormExceeded(f"row {k} has L^{p} norm {norms[k]!r} > 1", row=k)
    return FunctionTable(_frozen(vals), float(p), _frozen(norms))


@dataclass(frozen=True)
class CoefficientVector:
    values: np.ndarray
    l1_norm: float
    signum: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def make_coefficients(values) -> CoefficientVector:
    lam = as_complex_array(values, "coefficients")
    if lam.ndim != 1 or lam.size == 0:
        raise ShapeMismatch("coefficients must be a non-empty flat list")
    l1 = compensated_sum(np.abs(lam))
    if l1 == 0:
        raise ZeroCoefficients("all coefficients are zero")
    return CoefficientVector(_frozen(lam), float(l1), _frozen(signum_array(lam)))
