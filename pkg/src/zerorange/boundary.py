"""Boundary matrices of the four singular point interactions.

A point interaction at x = 0 is a 2x2 matrix M connecting boundary data
across the singular point,

    (psi, psi')(0+) = M (psi, psi')(0-).

Four one-parameter families cover the self-adjoint possibilities:

    x1  delta potential            [[1, 0], [X1, 1]]
    x4  mass bump                  [[1, -X4], [0, 1]]
    x3  localized magnetic flux    phase * identity, phase = (2+iX3)/(2-iX3)
    x2  mass jump                  diag((2+X2)/(2-X2), (2-X2)/(2+X2))

This module builds the matrices and converts between the extension
parameters and their physical counterparts (mass ratio mu for x2, flux
gamma for x3).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .numerics import c2x2, det2

__all__ = [
    "KINDS",
    "ExtensionKind",
    "BoundaryMatrix",
    "MassRatio",
    "FluxParam",
    "x1",
    "x2",
    "x3",
    "x4",
    "boundary_matrix",
    "custom_boundary_matrix",
    "mass_ratio_to_x2",
    "x2_to_mass_ratio",
    "flux_to_x3",
    "x3_to_flux",
    "balian_bc",
    "x2_x3_reparam",
]

KINDS = ("x1", "x2", "x3", "x4")


@dataclass(frozen=True)
class ExtensionKind:
    """One of the four interaction families together with its parameter."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown extension kind {self.kind!r}")
        if not math.isfinite(self.param):
            raise InvalidInputError("extension parameter must be finite")
        if self.kind == "x2" and abs(self.param) == 2.0:
            raise InvalidInputError("x2 parameter must satisfy |param| != 2")


def x1(strength: float) -> ExtensionKind:
    return ExtensionKind("x1", strength)


def x2(param: float) -> ExtensionKind:
    return ExtensionKind("x2", param)


def x3(param: float) -> ExtensionKind:
    return ExtensionKind("x3", param)


def x4(param: float) -> ExtensionKind:
    return ExtensionKind("x4", param)


@dataclass(frozen=True)
class BoundaryMatrix:
    """A boundary-condition matrix with its provenance and cached determinant."""

    matrix: np.ndarray
    kind: ExtensionKind | str
    det: complex


@dataclass(frozen=True)
class MassRatio:
    """Dimensionless mass ratio m(-)/m(+) across a mass jump."""

    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise InvalidInputError("mass ratio must be finite and positive")


@dataclass(frozen=True)
class FluxParam:
    """Magnetic flux through the singular point in units of the flux quantum."""

    gamma: float

    def __post_init__(self):
        if not math.isfinite(self.gamma):
            raise InvalidInputError("flux must be finite")

    def reduced(self) -> float:
        """Flux folded into [-1/2, 1/2). Integer flux is kept explicit otherwise."""
        return self.gamma - math.floor(self.gamma + 0.5)


def _mu_value(mu: MassRatio | float) -> float:
    value = mu.mu if isinstance(mu, MassRatio) else float(mu)
    if not (math.isfinite(value) and value > 0.0):
        raise InvalidInputError("mass ratio must be finite and positive")
    return value


def _gamma_value(gamma: FluxParam | float) -> float:
    value = gamma.gamma if isinstance(gamma, FluxParam) else float(gamma)
    if not math.isfinite(value):
        raise InvalidInputError("flux must be finite")
    return value


def boundary_matrix(kind: ExtensionKind) -> BoundaryMatrix:
    """Closed-form boundary matrix of an interaction family.

    The x1, x2 and x4 matrices are real with determinant exactly 1; the x3
    matrix is a unimodular phase times the identity with det = phase^2.
    """
    p = kind.param
    if kind.kind == "x1":
        m = c2x2(1.0, 0.0, p, 1.0)
        det: complex = 1.0
    elif kind.kind == "x4":
        m = c2x2(1.0, -p, 0.0, 1.0)
        det = 1.0
    elif kind.kind == "x2":
        a = (2.0 + p) / (2.0 - p)
        m = c2x2(a, 0.0, 0.0, 1.0 / a)
        det = 1.0
    else:
        phase = (2.0 + 1j * p) / (2.0 - 1j * p)
        m = c2x2(phase, 0.0, 0.0, phase)
        det = phase * phase
    return BoundaryMatrix(matrix=m, kind=kind, det=det)


def custom_boundary_matrix(matrix: np.ndarray) -> BoundaryMatrix:
    """Wrap an arbitrary 2x2 matrix (for numerically extracted conditions)."""
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise InvalidInputError("boundary matrix must be 2x2")
    m = c2x2(m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    return BoundaryMatrix(matrix=m, kind="custom", det=det2(m))


def mass_ratio_to_x2(mu: MassRatio | float, branch: str = "+") -> float:
    """Map a mass ratio onto the x2 parameter, X2 = +-2 (sqrt(mu)-1)/(sqrt(mu)+1).

    Both sign branches describe the same physics (the spectra depend only on
    even functions of the entry ratio); "+" is the default.
    """
    value = _mu_value(mu)
    if branch not in ("+", "-"):
        raise InvalidInputError("branch must be '+' or '-'")
    s = math.sqrt(value)
    result = 2.0 * (s - 1.0) / (s + 1.0)
    return result if branch == "+" else -result


def x2_to_mass_ratio(x2_param: float) -> MassRatio:
    """Invert the mass-ratio map, sqrt(mu) = (2+X2)/(2-X2); needs |X2| < 2."""
    if not (math.isfinite(x2_param) and abs(x2_param) < 2.0):
        raise InvalidInputError("x2 parameter must satisfy |X2| < 2")
    s = (2.0 + x2_param) / (2.0 - x2_param)
    return MassRatio(s * s)


def flux_to_x3(gamma: FluxParam | float) -> float:
    """Map flux to the x3 parameter, X3 = 2 tan(pi gamma).

    Half-integer flux makes X3 diverge and is rejected.
    """
    value = _gamma_value(gamma)
    frac = value - math.floor(value)
    if abs(frac - 0.5) < 1e-12:
        raise InvalidInputError("flux congruent to 1/2 has no finite x3 parameter")
    return 2.0 * math.tan(math.pi * value)


def x3_to_flux(x3_param: float) -> FluxParam:
    """Invert the flux map onto gamma in (-1/2, 1/2)."""
    if not math.isfinite(x3_param):
        raise InvalidInputError("x3 parameter must be finite")
    return FluxParam(math.atan2(x3_param, 2.0) / math.pi)


def balian_bc(mu: MassRatio | float, scaled: bool = True) -> BoundaryMatrix:
    """Boundary matrix of a sharp mass jump with ratio mu.

    The unscaled form diag(mu^(1/4), mu^(-5/4)) has determinant 1/mu; it
    refers to unequal length scales on the two half lines. Rescaling the
    positive half axis by lambda = sqrt(mu) equalizes the scales and yields
    the unimodular form diag(sqrt(mu), 1/sqrt(mu)), which coincides with the
    x2 matrix at X2 = mass_ratio_to_x2(mu).
    """
    value = _mu_value(mu)
    if scaled:
        s = math.sqrt(value)
        m = c2x2(s, 0.0, 0.0, 1.0 / s)
        return BoundaryMatrix(matrix=m, kind=ExtensionKind("x2", mass_ratio_to_x2(value)), det=1.0)
    q = value ** 0.25
    m = c2x2(q, 0.0, 0.0, 1.0 / value ** 1.25)
    return BoundaryMatrix(matrix=m, kind="custom", det=1.0 / value)


def x2_x3_reparam(mu: MassRatio | float) -> FluxParam:
    """Flux value whose ring spectrum matches that of a mass jump.

    Solves cos(2 pi gamma) = 2 sqrt(mu) / (1 + mu) on gamma in [0, 1/4].
    The map sees only the mu <-> 1/mu symmetric combination, so reciprocal
    ratios give the same flux.
    """
    value = _mu_value(mu)
    c = 2.0 * math.sqrt(value) / (1.0 + value)
    c = min(c, 1.0)
    return FluxParam(math.acos(c) / (2.0 * math.pi))
