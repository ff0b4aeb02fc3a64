"""Ring spectra of point interactions.

The geometry is an interval of circumference L with its ends glued and a
single defect at the joint. An eigen-wavenumber k > 0 satisfies the
secular condition

    det(M P(kL) - I) = 0,

where M is the defect's boundary matrix and P the free propagator around
the ring. Free-ring levels k = 2 pi n / L are doubly degenerate; a defect
generically leaves one level per doublet untouched (the state that does
not feel the defect) and shifts the partner, while a magnetic defect
splits the doublet into counter-propagating branches.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .boundary import (
    BoundaryMatrix,
    ExtensionKind,
    FluxParam,
    MassRatio,
    boundary_matrix,
    flux_to_x3,
    x2_to_mass_ratio,
    x3,
    x3_to_flux,
)
from .errors import InvalidInputError, NumericalFailureError
from .numerics import RealInterval, det2, find_roots
from .scattering import free_propagator

__all__ = [
    "CircleSpec",
    "SpectrumRoot",
    "SpectrumResult",
    "ZeemanLevel",
    "DegeneracyReport",
    "secular_value",
    "circle_spectrum",
    "closed_form_residual",
    "zeeman_levels",
    "degeneracy_report",
]

# Scan roots closer than this to a structurally detected level are the
# level itself found again by the sign scan and get merged away.
_STRUCT_MERGE = 1e-7
# Offset of the auxiliary sample points placed next to each candidate
# level, so that near-degenerate partners are bracketed by sign changes.
_CANDIDATE_OFFSET = 1e-6


@dataclass(frozen=True)
class CircleSpec:
    """A ring of given circumference with one defect at the glued point."""

    circumference: float
    bc: BoundaryMatrix

    def __post_init__(self):
        if not (math.isfinite(self.circumference) and self.circumference > 0.0):
            raise InvalidInputError("circumference must be finite and positive")


@dataclass(frozen=True)
class SpectrumRoot:
    k: float
    energy: float
    multiplicity: int
    branch: str


@dataclass(frozen=True)
class SpectrumResult:
    """Sorted eigen-wavenumbers of a ring with branch labels."""

    circumference: float
    roots: tuple[SpectrumRoot, ...]

    def ks(self) -> np.ndarray:
        """Root wavenumbers repeated according to multiplicity."""
        return np.array([r.k for r in self.roots for _ in range(r.multiplicity)])


@dataclass(frozen=True)
class ZeemanLevel:
    """Flux-split partner energies of the angular-momentum pair +-m."""

    m: int
    gamma: float
    e_plus: float
    e_minus: float
    splitting: float


@dataclass(frozen=True)
class DegeneracyReport:
    degenerate_pairs: tuple[tuple[SpectrumRoot, SpectrumRoot], ...]
    split_pairs: tuple[tuple[SpectrumRoot, SpectrumRoot], ...]
    max_split: float


def secular_value(spec: CircleSpec, k: float) -> complex:
    """det(M P(kL) - I); zeros over k > 0 are the ring spectrum.

    For a real matrix with unit determinant this equals 2 - tr(M P(kL)).
    """
    around = spec.bc.matrix @ free_propagator(k, spec.circumference).matrix
    return det2(around - np.eye(2))


def _phase_angle(m: np.ndarray) -> float:
    """Overall phase of a matrix of the form exp(i phi) * (real, det 1)."""
    d = det2(m)
    if abs(abs(d) - 1.0) > 1e-6:
        raise InvalidInputError("ring spectrum needs a boundary matrix with |det| = 1")
    phi = cmath.phase(d) / 2.0
    rotated = m * cmath.exp(-1j * phi)
    scale = max(1.0, float(np.abs(rotated).max()))
    if float(np.abs(rotated.imag).max()) > 1e-8 * scale:
        raise InvalidInputError("ring spectrum needs a boundary matrix that is a "
                                "phase times a real matrix")
    return phi


def _branch_family(bc: BoundaryMatrix, phi: float) -> str:
    if isinstance(bc.kind, ExtensionKind):
        return "pm" if bc.kind.kind in ("x2", "x3") else "shift"
    return "pm" if abs(phi) > 1e-12 else "shift"


def circle_spectrum(
    spec: CircleSpec,
    k_max: float,
    refine_tol: float = 1e-12,
    grid: RealInterval | None = None,
) -> SpectrumResult:
    """All eigen-wavenumbers of the ring in (0, k_max].

    Sign-changing zeros of the secular function are found by a grid scan
    with bisection refinement. The free-ring levels k = pi n / L (where the
    propagator is +-identity) are additionally tested structurally, because
    there the secular function can vanish tangentially: if M P(kL) - I is
    the zero matrix the level is a surviving doublet (multiplicity 2), and
    if only its determinant vanishes the level is a simple root whose state
    does not feel the defect. Branch labels are "unshifted"/"shifted" for
    non-magnetic defects and "plus"/"minus" (state above or below the free
    level) for magnetic ones; mass-jump branches are labelled through their
    equivalent flux.
    """
    if not (math.isfinite(k_max) and k_max > 0.0):
        raise InvalidInputError("k_max must be finite and positive")
    length = spec.circumference
    m = spec.bc.matrix
    phi = _phase_angle(m)
    family = _branch_family(spec.bc, phi)
    target = 2.0 * math.cos(phi)
    rot = cmath.exp(-1j * phi)
    mnorm = max(1.0, float(np.abs(m).max()))

    def scan_fn(k: float) -> float:
        around = m @ free_propagator(k, length).matrix
        return (rot * (around[0, 0] + around[1, 1])).real - target

    # Structural pass over the free-ring candidates k = pi n / L.
    eye = np.eye(2)
    struct: list[SpectrumRoot] = []
    n = 1
    while True:
        kc = math.pi * n / length
        if kc > k_max * (1.0 + 1e-12):
            break
        b = (m if n % 2 == 0 else -m) - eye
        if float(np.abs(b).max()) <= 1e-9 * mnorm:
            label = "unshifted" if n % 2 == 0 else "shifted"
            struct.append(SpectrumRoot(kc, kc * kc, 2, label))
        elif abs(det2(b)) <= 1e-9 * mnorm * mnorm:
            struct.append(SpectrumRoot(kc, kc * kc, 1, "unshifted"))
        n += 1

    # Sign scan with extra sample points near every candidate, so partners
    # that sit close to a free level are still bracketed.
    k_lo = min(math.pi / length, k_max) * 1e-9
    if grid is None:
        spacing = min(math.pi / 8.0, math.pi / (8.0 * length))
        grid_n = max(16, int(math.ceil((k_max - k_lo) / spacing)) + 1)
        grid = RealInterval(k_lo, k_max, grid_n)
    extra: list[float] = []
    n = 1
    while True:
        kc = math.pi * n / length
        if kc > k_max:
            break
        for point in (kc - _CANDIDATE_OFFSET, kc, kc + _CANDIDATE_OFFSET):
            if grid.lo < point < grid.hi:
                extra.append(point)
        n += 1
    scanned = find_roots(scan_fn, grid, refine_tol, extra_points=extra)

    merge = max(_STRUCT_MERGE, 10.0 * refine_tol)
    struct_ks = [r.k for r in struct]
    roots = list(struct)
    for k in scanned:
        if any(abs(k - ks) <= merge for ks in struct_ks):
            continue
        nu = k * length / (2.0 * math.pi)
        frac = nu - round(nu)
        if family == "pm":
            label = "plus" if frac > 0.0 else "minus"
        else:
            label = "shifted"
        roots.append(SpectrumRoot(k, k * k, 1, label))
    roots.sort(key=lambda r: r.k)
    return SpectrumResult(length, tuple(roots))


def closed_form_residual(param: ExtensionKind | MassRatio | FluxParam, k: float) -> float:
    """Residual of the per-family spectral condition on the circumference-2 ring.

    Evaluates, verbatim for each family,

        x1:  sin k (X1 cos k - 2 k sin k)
        x4:  sin k (X4 k cos k - 2 sin k)
        x2:  cos 2k - 2 sqrt(mu) / (1 + mu)
        x3:  cos 2 pi gamma - cos 2k

    where a bare MassRatio selects the x2 form and a bare FluxParam the x3
    form. Zeros over k > 0 reproduce circle_spectrum at L = 2.
    """
    if not (math.isfinite(k) and k > 0.0):
        raise InvalidInputError("k must be finite and positive")
    if isinstance(param, ExtensionKind):
        p = param.param
        if param.kind == "x1":
            return math.sin(k) * (p * math.cos(k) - 2.0 * k * math.sin(k))
        if param.kind == "x4":
            return math.sin(k) * (p * k * math.cos(k) - 2.0 * math.sin(k))
        if param.kind == "x2":
            param = x2_to_mass_ratio(p)
        else:
            param = x3_to_flux(p)
    if isinstance(param, MassRatio):
        mu = param.mu
        return math.cos(2.0 * k) - 2.0 * math.sqrt(mu) / (1.0 + mu)
    if isinstance(param, FluxParam):
        return math.cos(2.0 * math.pi * param.gamma) - math.cos(2.0 * k)
    raise InvalidInputError(f"unsupported parameter {param!r}")


def zeeman_levels(
    gamma: FluxParam | float, m_max: int, circumference: float
) -> list[ZeemanLevel]:
    """Flux-split level pairs of a ring threaded by flux gamma.

    The energies are taken from the computed ring spectrum of the flux
    defect, not from a closed formula: for each 1 <= m <= m_max the roots
    nearest (2 pi / L)(m +- gamma) are paired, giving

        E_(+-) = ((2 pi / L) (m +- gamma))^2

    so on a ring of circumference 2 pi the splitting is 4 m gamma. Integer
    flux reduces to zero splitting (hidden flux, degenerate doublets).
    """
    if m_max < 1:
        raise InvalidInputError("m_max must be at least 1")
    if not (math.isfinite(circumference) and circumference > 0.0):
        raise InvalidInputError("circumference must be finite and positive")
    flux = gamma if isinstance(gamma, FluxParam) else FluxParam(float(gamma))
    g_red = flux.reduced()
    spec = CircleSpec(circumference, boundary_matrix(x3(flux_to_x3(flux))))
    unit = 2.0 * math.pi / circumference
    k_max = unit * (m_max + abs(g_red)) + 0.5 * math.pi / circumference
    ks = circle_spectrum(spec, k_max).ks()
    levels = []
    for m in range(1, m_max + 1):
        pair = []
        for nu_target in (m + g_red, m - g_red):
            k_target = unit * nu_target
            idx = int(np.argmin(np.abs(ks - k_target)))
            if abs(ks[idx] - k_target) > 0.25 * unit:
                raise NumericalFailureError(
                    f"no ring level found near m={m}, gamma={flux.gamma}")
            pair.append(float(ks[idx]))
        e_plus, e_minus = pair[0] ** 2, pair[1] ** 2
        levels.append(ZeemanLevel(m, flux.gamma, e_plus, e_minus, e_plus - e_minus))
    return levels


def degeneracy_report(result: SpectrumResult, tol: float | None = None) -> DegeneracyReport:
    """Classify the near-coincidence structure of a ring spectrum.

    Roots are grouped by the free level they descend from (nearest integer
    of k L / 2 pi). Within a group, a pair closer than tol (or a surviving
    multiplicity-2 root) counts as degenerate; a pair with both members
    displaced from the free level counts as magnetically split; a pair with
    one member pinned at the free level is an ordinary non-magnetic shift
    and is classified as neither.
    """
    if tol is None:
        tol = 1e-8 * (math.pi / result.circumference)
    if tol <= 0.0:
        raise InvalidInputError("tol must be positive")
    unit = 2.0 * math.pi / result.circumference
    groups: dict[int, list[SpectrumRoot]] = {}
    for root in result.roots:
        groups.setdefault(round(root.k / unit), []).append(root)

    degenerate: list[tuple[SpectrumRoot, SpectrumRoot]] = []
    split: list[tuple[SpectrumRoot, SpectrumRoot]] = []
    for m, members in sorted(groups.items()):
        members = sorted(members, key=lambda r: r.k)
        singles = []
        for root in members:
            if root.multiplicity >= 2:
                degenerate.append((root, root))
            else:
                singles.append(root)
        for i in range(0, len(singles) - 1, 2):
            r1, r2 = singles[i], singles[i + 1]
            if r2.k - r1.k <= tol:
                degenerate.append((r1, r2))
                continue
            center = unit * m
            if min(abs(r1.k - center), abs(r2.k - center)) <= tol:
                continue
            split.append((r1, r2))
    max_split = max((abs(r2.energy - r1.energy) for r1, r2 in split), default=0.0)
    return DegeneracyReport(tuple(degenerate), tuple(split), max_split)
