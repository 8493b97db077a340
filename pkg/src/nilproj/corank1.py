"""Closed forms for projections of rank n-1.

A rank n-1 projection is ``Q = I - e e*`` for a unit vector ``e``; it is
determined up to diagonal phases by the partial traces
``a_k = |e_1|^2 + ... + |e_k|^2``. The corner norms of ``Q`` depend only on
consecutive pairs ``(a_{k-1}, a_k)``, and at the optimum they all equal
``nu``, which turns the sequence into the orbit of 0 under a Moebius map.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import BracketFailure, DomainError, PoleError, OutOfRange, NotTerminal, SelectionFailure

_SLACK = 1e-12
_POLE_TOL = 1e-12


@dataclass(frozen=True)
class PartialTraceSequence:
    n: int
    t: float
    a: tuple[float, ...]


@dataclass(frozen=True)
class SpectralParams:
    """Roots of ``z^2 - (3t-1) z + t^3``, the characteristic polynomial of the q-recurrence."""

    t: float
    y: float
    lambda1: complex
    lambda2: complex


@dataclass(frozen=True)
class CandidateSet:
    n: int
    m: int
    entries: tuple[tuple[int, float], ...]
    selected_k: int
    lower_bound_sq: float

    @property
    def selected_t(self) -> float:
        return dict(self.entries)[self.selected_k]


def _check_unit(name: str, v: float) -> None:
    if not -_SLACK <= v <= 1 + _SLACK:
        raise DomainError(f"{name}={v!r} is outside [0, 1]")


def g_disc(x: float, y: float) -> float:
    """Discriminant under the square root of :func:`f_norm_sq`."""
    _check_unit("x", x)
    _check_unit("y", y)
    return (x * x * y * y - 4 * x * x * y + 2 * x * y * y + 4 * x * x
            - 2 * x * y + y * y - 2 * y + 1)


def f_norm_sq(x: float, y: float) -> float:
    """Squared corner norm of a rank n-1 projection from consecutive partial traces.

    If ``a_{k-1} = x`` and ``a_k = y`` then ``||E_{k-1}^perp Q E_k||^2 = f(x, y)``.
    """
    g = g_disc(x, y)
    if g < 0:
        if g < -1e-14:
            raise DomainError(f"negative discriminant {g!r} at ({x}, {y})")
        g = 0.0
    return (math.sqrt(g) - x * y - y + 2 * x + 1) / 2


def h_step(t: float, x: float) -> float:
    """One step of the partial-trace recursion at squared distance ``t``."""
    den = t * x + t - x
    if abs(den) <= _POLE_TOL:
        raise PoleError(f"h_t has a pole at t={t!r}, x={x!r}")
    return (-t * t + 2 * t * x + t - x) / den


def h_inverse(t: float, v: float) -> float:
    """Solve ``h_step(t, x) = v`` for ``x``."""
    den = v * t - v - 2 * t + 1
    if abs(den) <= _POLE_TOL:
        raise PoleError(f"h_t^-1 has a pole at t={t!r}, v={v!r}")
    x = (t - t * t - v * t) / den
    try:
        back = h_step(t, x)
    except PoleError as exc:
        raise OutOfRange(f"{v!r} is not a value of h_t") from exc
    if abs(back - v) > 1e-10:
        raise OutOfRange(f"back-substitution residual {abs(back - v):.3e} for v={v!r}")
    return x


def lower_bound(r: int, n: int) -> float:
    """Lower bound on ||P - N|| over rank-r projections P and nilpotents N."""
    if not 1 <= r <= n:
        raise DomainError(f"need 1 <= r <= n, got r={r}, n={n}")
    return math.sqrt(r / (2 * n) * (1 + r / n))


def _half_sec(angle: float) -> float:
    return 0.5 / math.cos(angle)


def nu_corank1(n: int) -> float:
    """Distance from the rank n-1 projections to the nilpotents."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    return _half_sec((n - 1) * math.pi / (3 * n - 2))


def nu_rank1(n: int) -> float:
    """Distance from the rank-one projections to the nilpotents."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return _half_sec(math.pi / (n + 2))


def nu_conjecture(r: int, n: int) -> float:
    """Conjectured distance ``sec(pi / (n/r + 2)) / 2`` for rank-r projections."""
    if not 1 <= r <= n:
        raise DomainError(f"need 1 <= r <= n, got r={r}, n={n}")
    return _half_sec(math.pi * r / (n + 2 * r))


def _orbit(n: int, t: float) -> list[float]:
    a = [0.0]
    for _ in range(n):
        a.append(h_step(t, a[-1]))
    return a


def partial_trace_sequence(n: int, t: float, require_terminal: bool = False) -> PartialTraceSequence:
    """Iterate ``a_k = h_step(t, a_{k-1})`` from ``a_0 = 0``.

    With ``require_terminal`` the sequence must end at 1 (within 1e-9), which
    happens exactly when ``t`` is the squared optimal distance.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if not 0.25 - _SLACK <= t <= 1 + _SLACK:
        raise DomainError(f"t={t!r} is outside [1/4, 1]")
    a = _orbit(n, t)
    for k, ak in enumerate(a):
        if not -_SLACK <= ak <= 1 + 1e-9:
            raise DomainError(f"a_{k}={ak!r} left [0, 1] at t={t!r}")
    if require_terminal and abs(a[-1] - 1) > 1e-9:
        raise NotTerminal(f"a_n={a[-1]!r} at t={t!r}")
    return PartialTraceSequence(n=n, t=t, a=tuple(a))


def optimal_projection(n: int, phases=None) -> np.ndarray:
    """An optimal rank n-1 projection ``I - e e*``.

    ``e_k = z_k sqrt(a_k - a_{k-1})`` for the terminal partial trace sequence.
    With the default phases (all 1) every off-diagonal entry is nonpositive.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if phases is None:
        z = np.ones(n, dtype=complex)
    else:
        z = np.asarray(phases, dtype=complex).reshape(-1)
        if z.size != n:
            raise DomainError(f"expected {n} phases, got {z.size}")
        if np.max(np.abs(np.abs(z) - 1)) > 1e-12:
            raise DomainError("phases must have modulus 1")
    seq = partial_trace_sequence(n, nu_corank1(n) ** 2, require_terminal=True)
    gaps = np.clip(np.diff(seq.a), 0.0, None)
    e = z * np.sqrt(gaps)
    return np.eye(n, dtype=complex) - np.outer(e, e.conj())


def spectral_params(t: float) -> SpectralParams:
    if not 0.25 <= t <= 1:
        raise DomainError(f"t={t!r} is outside [1/4, 1]")
    y = math.sqrt(4 * t - 1)
    l1 = complex(3 * t - 1, (1 - t) * y) / 2
    return SpectralParams(t=t, y=y, lambda1=l1, lambda2=l1.conjugate())


def q_poly_sequence(n: int, t: float) -> list[float]:
    """``q_0(t), ..., q_{n-1}(t)`` from the three-term recurrence."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    q = [1.0, -t * t + 3 * t - 1]
    while len(q) < n:
        q.append((3 * t - 1) * q[-1] - t ** 3 * q[-2])
    return q


def _q_closed(j: int, sp: SpectralParams) -> float:
    t, l1, l2 = sp.t, sp.lambda1, sp.lambda2
    p1, p2 = l1 ** (j + 1), l2 ** (j + 1)
    val = (t * (p1 - p2) - l2 * p1 + l1 * p2) / (t * (1 - t) * 1j * sp.y)
    if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"closed form left the real axis: {val!r}")
    return val.real


def q_poly_closed_form(n: int, t: float) -> tuple[float, float]:
    """``(q_{n-1}(t), q_{n-2}(t))`` through powers of the characteristic roots."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if not 0.25 < t < 1:
        raise DomainError(f"closed form needs 1/4 < t < 1, got {t!r}")
    sp = spectral_params(t)
    return _q_closed(n - 1, sp), _q_closed(n - 2, sp)


def _sec2_quarter(k: int, m: int) -> float | None:
    c = math.cos(k * math.pi / m)
    if abs(c) < 1e-15:
        return None
    return 0.25 / (c * c)


def candidate_values(n: int) -> CandidateSet:
    """Enumerate the possible squared distances and select the admissible one.

    Candidates are ``t = sec^2(k pi / m) / 4`` with ``m = 3n - 2``; only
    ``k = 1..floor(m/2)`` are distinct and only ``t <= 1`` is kept. Exactly one
    must clear the squared lower bound, and it must be ``k = n - 1``.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    m = 3 * n - 2
    entries = []
    for k in range(1, m // 2 + 1):
        t = _sec2_quarter(k, m)
        if t is not None and t <= 1 + 1e-15:
            entries.append((k, t))
    lb_sq = lower_bound(n - 1, n) ** 2
    passing = [k for k, t in entries if t >= lb_sq]
    if 0.25 >= lb_sq:
        passing.insert(0, 0)
    if len(passing) != 1:
        raise SelectionFailure(f"n={n}: candidates passing the bound: {passing}")
    if passing[0] != n - 1:
        raise SelectionFailure(f"n={n}: selected k={passing[0]}, expected {n - 1}")
    return CandidateSet(n=n, m=m, entries=tuple(entries), selected_k=passing[0], lower_bound_sq=lb_sq)


def _terminal_residual(n: int, t: float) -> float:
    # a_n - 1 in homogeneous coordinates a = p/q, which has no poles
    p, q = 1 - t, 1.0
    for _ in range(n - 1):
        p, q = t * (1 - t) * q + (2 * t - 1) * p, t * q - (1 - t) * p
    return p - q


def shoot_for_t(n: int) -> float:
    """Find the squared distance by bisection on ``a_n(t) = 1``.

    The bracket is centred on the closed-form value and reaches halfway to
    the nearest competing root, so exactly one root lies inside it.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    m = 3 * n - 2
    target = nu_corank1(n) ** 2
    others = [t for k in range(0, m // 2 + 1) if k != n - 1
              and (t := _sec2_quarter(k, m)) is not None]
    half = min(abs(t - target) for t in others) / 2
    lo, hi = target - half, target + half
    f_lo, f_hi = _terminal_residual(n, lo), _terminal_residual(n, hi)
    if f_lo * f_hi >= 0:
        raise BracketFailure(f"n={n}: no sign change on [{lo}, {hi}]")
    root = bisect(lambda t: _terminal_residual(n, t), lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    a_n = _orbit(n, root)[-1]
    if abs(a_n - 1) > 1e-8:
        raise BracketFailure(f"n={n}: root t={root!r} gives a_n={a_n!r}")
    return root
