"""Plane-wave scattering on the line through chains of point defects.

A chain is an ordered list of (position, boundary matrix) defects. The
transfer matrix of the chain at wavenumber k is the left-to-right product
of the defect matrices interleaved with free propagators over the gaps,
and the scattering amplitudes follow from matching plane waves on both
sides. Energies are E = k^2 with k > 0.
"""

from __future__ import annotations

import cmath
import json
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryMatrix, ExtensionKind, boundary_matrix, mass_ratio_to_x2
from .errors import InvalidInputError, NumericalFailureError
from .numerics import c2x2, det2

__all__ = [
    "TransferMatrix",
    "SMatrix",
    "DefectChain",
    "free_propagator",
    "chain_transfer",
    "smatrix",
    "transmission_curve",
    "chain_from_spec",
    "load_chain",
]


@dataclass(frozen=True)
class TransferMatrix:
    """Matrix propagating (psi, psi') at fixed wavenumber k."""

    matrix: np.ndarray
    k: float

    @property
    def det(self) -> complex:
        return det2(self.matrix)


@dataclass(frozen=True)
class SMatrix:
    """Scattering amplitudes: r, t for left incidence, r', t' for right."""

    r: complex
    t: complex
    r_prime: complex
    t_prime: complex

    @property
    def transmission(self) -> float:
        return abs(self.t) ** 2

    @property
    def reflection(self) -> float:
        return abs(self.r) ** 2

    def as_matrix(self) -> np.ndarray:
        """Amplitudes arranged as [[r, t], [t', r']]."""
        return c2x2(self.r, self.t, self.t_prime, self.r_prime)


@dataclass(frozen=True)
class DefectChain:
    """Ordered point defects on the line; may be empty."""

    defects: tuple[tuple[float, BoundaryMatrix], ...] = ()

    def __post_init__(self):
        positions = [pos for pos, _ in self.defects]
        if any(not math.isfinite(p) for p in positions):
            raise InvalidInputError("defect positions must be finite")
        if any(b >= a for a, b in zip(positions[1:], positions)):
            raise InvalidInputError("defect positions must be strictly increasing")


def free_propagator(k: float, length: float) -> TransferMatrix:
    """Transfer matrix of a free segment: -psi'' = k^2 psi over the given length."""
    if not (math.isfinite(k) and k > 0.0):
        raise InvalidInputError("free propagation needs k > 0; the k -> 0 limit "
                                "is not taken implicitly")
    if not (math.isfinite(length) and length >= 0.0):
        raise InvalidInputError("segment length must be non-negative")
    c = math.cos(k * length)
    s = math.sin(k * length)
    return TransferMatrix(c2x2(c, s / k, -k * s, c), k)


def chain_transfer(chain: DefectChain, k: float) -> TransferMatrix:
    """Total transfer matrix of a defect chain; identity for the empty chain."""
    if not (math.isfinite(k) and k > 0.0):
        raise InvalidInputError("chain transfer needs k > 0")
    total = np.eye(2, dtype=complex)
    prev_pos = None
    for pos, bc in chain.defects:
        if prev_pos is not None:
            total = free_propagator(k, pos - prev_pos).matrix @ total
        total = bc.matrix @ total
        prev_pos = pos
    return TransferMatrix(total, k)


def _plane_wave(sign: float, k: float, x: float) -> np.ndarray:
    phase = cmath.exp(sign * 1j * k * x)
    return np.array([phase, sign * 1j * k * phase])


def smatrix(chain: DefectChain, k: float) -> SMatrix:
    """Scattering amplitudes of a chain at wavenumber k.

    Left incidence matches exp(ikx) + r exp(-ikx) on the left of the chain
    to t exp(ikx) on the right; right incidence is the mirror problem giving
    r' and t'. Amplitudes carry the absolute positions of the outermost
    defects, so disjoint chains compose by the usual two-media rule.
    """
    if not (math.isfinite(k) and k > 0.0):
        raise InvalidInputError("scattering needs k > 0")
    if not chain.defects:
        return SMatrix(0.0, 1.0, 0.0, 1.0)
    transfer = chain_transfer(chain, k).matrix
    x_left = chain.defects[0][0]
    x_right = chain.defects[-1][0]
    e_plus_l = _plane_wave(+1.0, k, x_left)
    e_minus_l = _plane_wave(-1.0, k, x_left)
    e_plus_r = _plane_wave(+1.0, k, x_right)
    e_minus_r = _plane_wave(-1.0, k, x_right)
    try:
        lhs = np.column_stack([transfer @ e_minus_l, -e_plus_r])
        r, t = np.linalg.solve(lhs, -(transfer @ e_plus_l))
        lhs = np.column_stack([-e_plus_r, transfer @ e_minus_l])
        r_prime, t_prime = np.linalg.solve(lhs, e_minus_r)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"degenerate matching system at k={k}") from exc
    return SMatrix(complex(r), complex(t), complex(r_prime), complex(t_prime))


def transmission_curve(
    chain: DefectChain, k_grid: Sequence[float]
) -> list[tuple[float, float, float, float]]:
    """Rows (k, T, R, arg t) over a grid of wavenumbers, in grid order."""
    rows = []
    for k in k_grid:
        s = smatrix(chain, float(k))
        rows.append((float(k), s.transmission, s.reflection, cmath.phase(s.t)))
    return rows


def chain_from_spec(items: Sequence[dict]) -> DefectChain:
    """Build a chain from parsed JSON objects.

    Each object is {"position": x, "kind": "x1"|"x2"|"x3"|"x4", "param": v}
    or, for mass jumps, {"position": x, "kind": "x2", "mu": ratio}.
    """
    defects = []
    for item in items:
        try:
            pos = float(item["position"])
            kind = str(item["kind"]).lower()
            if kind == "x2" and "mu" in item:
                param = mass_ratio_to_x2(float(item["mu"]))
            else:
                param = float(item["param"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed chain entry {item!r}") from exc
        defects.append((pos, boundary_matrix(ExtensionKind(kind, param))))
    return DefectChain(tuple(defects))


def load_chain(path: str) -> DefectChain:
    """Read a defect chain from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        try:
            items = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"chain file {path} is not valid JSON") from exc
    if not isinstance(items, list):
        raise InvalidInputError("chain file must contain a JSON array")
    return chain_from_spec(items)
