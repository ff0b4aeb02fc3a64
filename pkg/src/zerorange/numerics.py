"""Shared numerical kernels.

Real root scanning with bisection refinement, adaptive quadrature,
propagation of second-order linear ODEs in self-adjoint form, the
symmetric tridiagonal eigensolver, and small helpers for complex 2x2
matrices. Everything here is pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from .errors import InvalidInputError, NumericalFailureError, SingularCoefficientError

__all__ = [
    "RealInterval",
    "c2x2",
    "det2",
    "find_roots",
    "quadrature",
    "propagate",
    "tridiag_eigs",
]


@dataclass(frozen=True)
class RealInterval:
    """A finite interval [lo, hi] with a sampling resolution for root scans."""

    lo: float
    hi: float
    grid_n: int = 257

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidInputError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise InvalidInputError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.grid_n < 2:
            raise InvalidInputError("grid_n must be at least 2")


def c2x2(a11: complex, a12: complex, a21: complex, a22: complex) -> np.ndarray:
    """Build a complex 2x2 matrix, rejecting non-finite entries."""
    m = np.array([[a11, a12], [a21, a22]], dtype=complex)
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidInputError("matrix entries must be finite")
    return m


def det2(m: np.ndarray) -> complex:
    """Closed-form determinant of a 2x2 matrix."""
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _bisect(f: Callable[[float], float], a: float, b: float, fa: float, tol: float) -> float:
    """Shrink a sign-change bracket [a, b] below tol and return its midpoint."""
    while (b - a) > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = f(mid)
        if not math.isfinite(fm):
            raise NumericalFailureError(f"function not finite at bracket midpoint x={mid}")
        if fm == 0.0:
            return mid
        if fa * fm < 0.0:
            b = mid
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def find_roots(
    f: Callable[[float], float],
    interval: RealInterval,
    refine_tol: float,
    poles: Sequence[float] = (),
    extra_points: Sequence[float] = (),
) -> list[float]:
    """Locate the sign-change roots of a scalar function on an interval.

    The interval is sampled on a uniform grid of ``interval.grid_n`` points
    (optionally augmented by ``extra_points``), every sign change is refined
    by bisection until the bracket is narrower than ``refine_tol``, and the
    resulting roots are sorted and deduplicated within ``10 * refine_tol``.

    Tangential zeros that do not change sign are not detected; callers that
    expect them must test those locations structurally.

    Parameters
    ----------
    f : callable
        Real-valued function of one real variable.
    interval : RealInterval
        Scan range and grid resolution.
    refine_tol : float
        Final bracket width, > 0.
    poles : sequence of float, optional
        Locations where f diverges. A small guard region around each pole is
        excluded from the scan so the sign flip across the pole is not
        mistaken for a root.
    extra_points : sequence of float, optional
        Additional sample abscissae merged into the grid.
    """
    if refine_tol <= 0.0:
        raise InvalidInputError("refine_tol must be positive")
    lo, hi = interval.lo, interval.hi
    guard = max(100.0 * refine_tol, (hi - lo) * 1e-13)

    segments = []
    start = lo
    for pole in sorted(p for p in poles if lo < p < hi):
        segments.append((start, pole - guard))
        start = pole + guard
    segments.append((start, hi))

    roots: list[float] = []
    for seg_lo, seg_hi in segments:
        if not seg_lo < seg_hi:
            continue
        n = max(2, round(interval.grid_n * (seg_hi - seg_lo) / (hi - lo)))
        xs = np.linspace(seg_lo, seg_hi, n)
        extras = [x for x in extra_points if seg_lo < x < seg_hi]
        if extras:
            xs = np.unique(np.concatenate([xs, np.asarray(extras, dtype=float)]))
        fs = np.array([f(x) for x in xs], dtype=float)
        for i in range(len(xs) - 1):
            fa, fb = fs[i], fs[i + 1]
            if not (math.isfinite(fa) and math.isfinite(fb)):
                continue
            if fa == 0.0:
                roots.append(float(xs[i]))
            elif fa * fb < 0.0:
                roots.append(_bisect(f, float(xs[i]), float(xs[i + 1]), fa, refine_tol))
        if math.isfinite(fs[-1]) and fs[-1] == 0.0:
            roots.append(float(xs[-1]))

    roots.sort()
    merged: list[float] = []
    for r in roots:
        if not merged or r - merged[-1] > 10.0 * refine_tol:
            merged.append(r)
    return merged


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return (h / 6.0) * (fa + 4.0 * fm + fb)


def quadrature(f: Callable[[float], float], interval: RealInterval, tol: float) -> float:
    """Adaptive-Simpson integral of f over the interval to absolute accuracy tol.

    The local error is estimated by comparing each panel against its two
    halves; panels are split until the comparison passes or the recursion
    depth limit trips, which raises NumericalFailureError.
    """
    if tol <= 0.0:
        raise InvalidInputError("tol must be positive")

    def eval_f(x: float) -> float:
        v = f(x)
        if not math.isfinite(v):
            raise NumericalFailureError(f"integrand not finite at x={x}")
        return v

    max_depth = 60

    def recurse(a: float, b: float, fa: float, fm: float, fb: float, whole: float,
                eps: float, depth: int) -> float:
        mid = 0.5 * (a + b)
        lm = 0.5 * (a + mid)
        rm = 0.5 * (mid + b)
        flm = eval_f(lm)
        frm = eval_f(rm)
        left = _simpson(fa, flm, fm, mid - a)
        right = _simpson(fm, frm, fb, b - mid)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise NumericalFailureError("quadrature subdivision limit exceeded")
        half = 0.5 * eps
        return (recurse(a, mid, fa, flm, fm, left, half, depth + 1)
                + recurse(mid, b, fm, frm, fb, right, half, depth + 1))

    a, b = interval.lo, interval.hi
    fa, fb = eval_f(a), eval_f(b)
    fm = eval_f(0.5 * (a + b))
    whole = _simpson(fa, fm, fb, b - a)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def propagate(
    p: Callable[[float], float],
    q: Callable[[float], float],
    k: float,
    y0: tuple[float, float],
    interval: RealInterval,
    tol: float,
) -> tuple[float, float]:
    """Propagate -(p(x) psi')' + q(x) psi = k^2 psi across an interval.

    The state is integrated in the variables (psi, p psi') so the flux stays
    smooth through steep coefficient regions; the returned pair is
    (psi, psi') at the right endpoint. ``y0`` is (psi, psi') at the left
    endpoint. Local error is controlled below ``tol`` by an adaptive
    Runge-Kutta stepper.
    """
    if tol <= 0.0:
        raise InvalidInputError("tol must be positive")
    a, b = interval.lo, interval.hi

    def p_checked(x: float) -> float:
        px = p(x)
        if px <= 0.0:
            raise SingularCoefficientError(f"coefficient p(x) <= 0 at x={x}")
        return px

    kk = k * k

    def rhs(x, v):
        return (v[1] / p_checked(x), (q(x) - kk) * v[0])

    v0 = (float(y0[0]), p_checked(a) * float(y0[1]))
    solver_tol = max(1e-2 * tol, 1e-13)
    sol = solve_ivp(rhs, (a, b), v0, method="DOP853", rtol=solver_tol, atol=solver_tol)
    if not sol.success:
        raise NumericalFailureError(f"ODE propagation failed: {sol.message}")
    psi = float(sol.y[0, -1])
    dpsi = float(sol.y[1, -1]) / p_checked(b)
    return psi, dpsi


def tridiag_eigs(diagonal, offdiagonal, n_lowest: int) -> np.ndarray:
    """Lowest eigenvalues of a real symmetric tridiagonal matrix, ascending."""
    d = np.asarray(diagonal, dtype=float)
    e = np.asarray(offdiagonal, dtype=float)
    if d.ndim != 1 or e.ndim != 1 or e.size != d.size - 1:
        raise InvalidInputError("need len(offdiagonal) == len(diagonal) - 1")
    if not 1 <= n_lowest <= d.size:
        raise InvalidInputError("n_lowest out of range")
    if d.size == 1:
        return d.copy()
    w = eigh_tridiagonal(d, e, eigvals_only=True, select="i",
                         select_range=(0, n_lowest - 1))
    return np.asarray(w, dtype=float)
