"""Seeded random instance recipes and the batch verification suites.

Trial i of a suite draws its instance from the Philox stream (seed, i), so a
single report row can be regenerated from (seed, trial index) alone.

Recipes:
  * weights: i.i.d. uniform(0, 1) draws normalized onto the simplex;
  * function rows: complex Gaussian rows projected onto the unit L^p sphere,
    then scaled by a uniform factor in [1/2, 1];
  * coefficients: uniform in the box [-1, 1] + i[-1, 1], each zeroed with
    probability 1/5, redrawn if all vanish.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import cls_sparsifier as cls
from . import khintchine as kh
from . import marcinkiewicz as mz
from .core_space import DiscreteProbabilitySpace, lp_norm, make_space, weighted_mean
from .errors import BadP, InputError, MaxAttemptsExceeded, PLessThanOne
from .io import ReportRow
from .rng import generator

SLACK = 1e-9

DEFAULT_P = {
    "khintchine": (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0),
    "mz": (1.0, 2.0, 3.0, 4.0, 6.0),
    "cls": (2.0, 4.0),
}
DEFAULT_SIZE = {"khintchine": 12, "mz": 5, "cls": 6}
DEFAULT_TRIALS = {"khintchine": 200, "mz": 100, "cls": 20}
DEFAULT_CAP = {"khintchine": 1 << kh.MAX_EXHAUSTIVE_N, "mz": mz.MAX_TUPLES, "cls": cls.MAX_TUPLES}


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    seed: int = 0
    trials: int | None = None
    p_list: tuple[float, ...] | None = None
    n_max: int | None = None
    cap: int | None = None
    eps_list: tuple[float, ...] = (0.25, 0.5, 1.0)
    m_max: int | None = None
    l_max: int = 8
    max_attempts: int = cls.DEFAULT_MAX_ATTEMPTS

    def __post_init__(self):
        if self.suite not in DEFAULT_P:
            raise InputError(f"unknown suite {self.suite!r}")
        for name, default in (("trials", DEFAULT_TRIALS), ("p_list", DEFAULT_P),
                              ("n_max", DEFAULT_SIZE), ("cap", DEFAULT_CAP)):
            if getattr(self, name) is None:
                object.__setattr__(self, name, default[self.suite])
        if self.m_max is None:
            object.__setattr__(self, "m_max", 3 if self.suite == "mz" else 4)
        if self.trials < 1:
            raise InputError("trials must be >= 1")
        if self.n_max < 1 or self.m_max < 1:
            raise InputError("size limits must be >= 1")
        if not self.p_list:
            raise InputError("p list is empty")
        for p in self.p_list:
            if not p >= 1:
                raise PLessThanOne(f"p must be >= 1, got {p!r}")
            if self.suite == "cls" and not p >= 2:
                raise BadP(f"the sparsification suite needs p >= 2, got {p!r}")
        for eps in self.eps_list:
            if not eps > 0:
                raise InputError(f"eps must be positive, got {eps!r}")


def instance_hash(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()[:12]


def random_rademacher(rng: np.random.Generator, n_max: int) -> np.ndarray:
    """Standard Gaussian coefficients, N uniform in [1, n_max]."""
    return rng.normal(size=int(rng.integers(1, n_max + 1)))


def random_space(rng: np.random.Generator, m: int) -> DiscreteProbabilitySpace:
    w = rng.uniform(size=m)
    return make_space(range(m), w / w.sum())


def random_unit_rows(rng: np.random.Generator, space: DiscreteProbabilitySpace, k: int, p: float) -> np.ndarray:
    rows = rng.normal(size=(k, space.size)) + 1j * rng.normal(size=(k, space.size))
    for row in rows:
        row *= rng.uniform(0.5, 1.0) / lp_norm(space, row, p)
    return rows


def random_coefficients(rng: np.random.Generator, k: int) -> np.ndarray:
    while True:
        lam = rng.uniform(-1, 1, size=k) + 1j * rng.uniform(-1, 1, size=k)
        lam[rng.uniform(size=k) < 0.2] = 0
        if np.any(lam != 0):
            return lam


def random_centered_family(rng: np.random.Generator, m_max: int, n_max: int):
    """(space, f) with M in [2, m_max] (1 if m_max is 1) and N in [1, n_max]."""
    m = int(rng.integers(min(2, m_max), m_max + 1))
    n = int(rng.integers(1, n_max + 1))
    space = random_space(rng, m)
    f = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    if rng.uniform() < 0.5:
        f = f.real.astype(np.complex128)
    for row in f:
        row -= weighted_mean(space, row)
    return space, f


def random_sparsification(rng: np.random.Generator, p: float, k_max: int, m_max: int):
    k = int(rng.integers(1, k_max + 1))
    m = int(rng.integers(1, m_max + 1))
    space = random_space(rng, m)
    return cls.make_instance(space, random_unit_rows(rng, space, k, p), random_coefficients(rng, k), p)


def _row(suite, cfg, iid, p, lhs, bound, N=None, K=None, L=None) -> ReportRow:
    if bound > 0:
        ratio = lhs / bound
    else:
        ratio = 0.0 if lhs == 0 else float("inf")
    return ReportRow(suite, cfg.seed, iid, float(p), N, K, L, float(lhs), float(bound), ratio,
                     bool(lhs <= bound * (1 + SLACK)))


def run_khintchine(cfg: SuiteConfig) -> list[ReportRow]:
    rows = []
    max_n = min(kh.MAX_EXHAUSTIVE_N, cfg.cap.bit_length() - 1)
    for trial in range(cfg.trials):
        rng = generator(cfg.seed, trial)
        c = random_rademacher(rng, cfg.n_max)
        iid = f"{trial}-{instance_hash(c)}"
        for p in cfg.p_list:
            rep = kh.khintchine_bound_check(kh.RademacherInstance(tuple(c.tolist()), p), max_n)
            rows.append(_row("khintchine", cfg, iid, p, rep.lhs, rep.bound_theorem, N=len(c)))
            rows.append(_row("khintchine-haagerup", cfg, iid, p, rep.lhs, rep.bound_haagerup, N=len(c)))
    return rows


def run_mz(cfg: SuiteConfig) -> list[ReportRow]:
    rows = []
    for trial in range(cfg.trials):
        rng = generator(cfg.seed, trial)
        space, f = random_centered_family(rng, cfg.m_max, cfg.n_max)
        iid = f"{trial}-{instance_hash(space.weights, f)}"
        n = f.shape[0]
        for p in cfg.p_list:
            fam = mz.CenteredFamily(space, f, p)
            rep = mz.mz_exhaustive(fam, cfg.cap)
            rows.append(_row("mz", cfg, iid, p, rep.lhs, rep.bound, N=n))
            original, sym = mz.symmetrization_lhs(fam, cfg.cap)
            rows.append(_row("mz-symmetrization", cfg, iid, p, original, sym, N=n))
    return rows


def run_cls(cfg: SuiteConfig) -> list[ReportRow]:
    rows = []
    for trial in range(cfg.trials):
        for p in cfg.p_list:
            rng = generator(cfg.seed, trial)
            inst = random_sparsification(rng, p, cfg.n_max, cfg.m_max)
            k = inst.K
            iid = f"{trial}-{instance_hash(inst.space.weights, inst.g.values, inst.lam.values)}"
            for L in range(1, cfg.l_max + 1):
                if k**L > cfg.cap:
                    break
                dist = cls.error_distribution(inst, L, cfg.cap)
                expected = dist.expected()
                rows.append(_row("cls-expected", cfg, iid, p, expected,
                                 cls.expected_error_bound(p, L), K=k, L=L))
                for eps in cfg.eps_list:
                    bad = dist.bad_measure(eps, p)
                    rows.append(_row("cls-badset", cfg, iid, p, bad,
                                     cls.bad_set_bound(p, eps, L), K=k, L=L))
                    rows.append(_row("cls-markov", cfg, iid, p, bad,
                                     expected / eps**p, K=k, L=L))
            for eps in cfg.eps_list:
                if eps > 1:
                    continue
                try:
                    res = cls.sparsify(inst, eps, cfg.seed, cfg.max_attempts)
                    err, L = res.error_p, res.L
                except MaxAttemptsExceeded:
                    err, L = float("inf"), cls.choose_L(p, eps)
                rows.append(_row("cls-sparsify", cfg, iid, p, err, eps**p, K=k, L=L))
    return rows


SUITES = {"khintchine": run_khintchine, "mz": run_mz, "cls": run_cls}


def run_suite(cfg: SuiteConfig) -> list[ReportRow]:
    return SUITES[cfg.suite](cfg)
