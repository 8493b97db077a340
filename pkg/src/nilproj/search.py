"""Seeded random-walk search for the nearest rank-r projections.

A rank-r projection is parameterized as ``P = V V*`` for an n x r isometry V.
Each start draws a random V and then runs greedy descent on the largest corner
norm of ``V V*``. A proposal adds Gaussian noise to V and retracts by QR, and
is kept only if it strictly lowers the objective. After ``patience``
consecutive rejections the step is multiplied by ``decay``.

Randomness: start ``s`` uses ``numpy.random.Generator(PCG64(seed ^ s))``, so
results depend only on the configuration and replay identically across runs
and platforms.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .arveson import CornerProfile, corner_norms_batched, corner_profile
from .corank1 import lower_bound, nu_conjecture
from .errors import DomainError, NotIsometry, RankDeficient
from .matcore import as_matrix, max_abs, qr_isometry

log = logging.getLogger(__name__)

DEFAULT_SEED = 20190917
MAX_RETRIES = 10


@dataclass(frozen=True)
class SearchConfig:
    r: int
    n: int
    seed: int = DEFAULT_SEED
    starts: int = 8
    steps_per_start: int = 20000
    initial_step: float = 0.1
    decay: float = 0.5
    patience: int = 500
    min_step: float = 1e-7
    real_only: bool = False
    persymmetric_bias: bool = False

    def __post_init__(self):
        if not 1 <= self.r <= self.n:
            raise DomainError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        if self.starts < 1 or self.steps_per_start < 1 or self.patience < 1:
            raise DomainError("starts, steps_per_start and patience must be positive")
        if not 0 < self.decay < 1:
            raise DomainError(f"decay must lie in (0, 1), got {self.decay}")
        if self.initial_step <= 0 or self.min_step <= 0:
            raise DomainError("step sizes must be positive")


@dataclass(frozen=True)
class SearchResult:
    best_objective: float
    best_isometry: np.ndarray
    best_projection: np.ndarray
    profile: CornerProfile
    evaluations: int
    per_start_bests: tuple[float, ...]
    traces: tuple[tuple[float, ...], ...] | None = None


def _check_isometry(V: np.ndarray) -> None:
    defect = max_abs(V.conj().T @ V - np.eye(V.shape[1]))
    if defect > 1e-8:
        raise NotIsometry(f"max|V*V - I| = {defect:.3e}")


def objective(V) -> float:
    """Distance from ``V V*`` to the nilpotents (largest corner norm)."""
    V = as_matrix(V, "V")
    _check_isometry(V)
    return _objective(V)


def _objective(V: np.ndarray) -> float:
    return float(corner_norms_batched(V @ V.conj().T).max())


def propose(V, step: float, rng: np.random.Generator,
            real_only: bool = False, persymmetric_bias: bool = False) -> np.ndarray:
    """One random-walk move: Gaussian perturbation of scale ``step``, then QR retraction.

    With ``persymmetric_bias`` the perturbation is averaged with its
    row-reversed conjugate, the image under which ``V V*`` maps to its
    reflection about the anti-diagonal.
    """
    V = np.asarray(V, dtype=complex)
    for _ in range(MAX_RETRIES):
        G = rng.standard_normal(V.shape)
        if not real_only:
            G = G + 1j * rng.standard_normal(V.shape)
        if persymmetric_bias:
            G = (G + np.conj(G[::-1, :])) / 2
        try:
            return qr_isometry(V + step * G)
        except RankDeficient:
            continue
    raise RankDeficient(f"{MAX_RETRIES} consecutive proposals were rank deficient")


def _random_start(config: SearchConfig, rng: np.random.Generator) -> np.ndarray:
    shape = (config.n, config.r)
    M = rng.standard_normal(shape)
    if not config.real_only:
        M = M + 1j * rng.standard_normal(shape)
    return qr_isometry(M)


def _run_start(config: SearchConfig, start: int, record_trace: bool):
    rng = np.random.Generator(np.random.PCG64(config.seed ^ start))
    V = _random_start(config, rng)
    best = _objective(V)
    evals = 1
    trace = [best] if record_trace else None
    step, rejects = config.initial_step, 0
    for _ in range(config.steps_per_start):
        W = propose(V, step, rng, config.real_only, config.persymmetric_bias)
        val = _objective(W)
        evals += 1
        if val < best:
            V, best, rejects = W, val, 0
            if record_trace:
                trace.append(val)
            continue
        rejects += 1
        if rejects >= config.patience:
            step *= config.decay
            rejects = 0
            if step < config.min_step:
                break
    return best, V, evals, trace


def random_walk_minimize(config: SearchConfig, workers: int = 1, record_trace: bool = False) -> SearchResult:
    """Multistart greedy random walk; the best start wins, ties go to the lowest index.

    ``workers > 1`` runs starts in separate processes; the result does not
    depend on it.
    """
    args = [(config, s, record_trace) for s in range(config.starts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_start, *zip(*args)))
    else:
        runs = [_run_start(*a) for a in args]

    bests = [run[0] for run in runs]
    winner = int(np.argmin(bests))
    V = runs[winner][1]
    P = V @ V.conj().T
    profile = corner_profile(P)
    result = SearchResult(
        best_objective=profile.max_norm,
        best_isometry=V,
        best_projection=P,
        profile=profile,
        evaluations=sum(run[2] for run in runs),
        per_start_bests=tuple(bests),
        traces=tuple(tuple(run[3]) for run in runs) if record_trace else None,
    )
    floor = lower_bound(config.r, config.n)
    if result.best_objective < floor - 1e-9:
        log.error("objective %.12g is below the lower bound %.12g", result.best_objective, floor)
    return result


@dataclass(frozen=True)
class TableRow:
    r: int
    n: int
    nu_estimate: float
    nu_formula: float
    abs_diff: float
    below_formula: bool


def conjecture_table(n_max: int, template: SearchConfig | None = None, workers: int = 1) -> list[TableRow]:
    """Search every ``1 <= r <= n <= n_max`` and compare with the conjectured formula.

    Estimates more than 2e-3 below the formula are flagged in ``below_formula``
    and logged; they are never dropped.
    """
    if n_max < 2:
        raise DomainError(f"need n_max >= 2, got {n_max}")
    template = template or SearchConfig(r=1, n=1)
    rows = []
    for n in range(1, n_max + 1):
        for r in range(1, n + 1):
            res = random_walk_minimize(replace(template, r=r, n=n), workers=workers)
            formula = nu_conjecture(r, n)
            est = res.best_objective
            below = est < formula - 2e-3
            if below:
                log.warning("(r=%d, n=%d): estimate %.6f is below the formula %.6f", r, n, est, formula)
            rows.append(TableRow(r, n, est, formula, abs(est - formula), below))
    return rows
