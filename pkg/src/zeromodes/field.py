"""Magnetic field model: radial bulk bumps plus one delta flux per hole.

Fluxes may be given as plain floats or as :class:`PiFlux`, an exact rational
multiple of pi.  The exact form keeps the staircase thresholds (strict-floor
jumps at half-integer values of flux/2pi) free of float drift; everything that
feeds quadrature converts to float at the point of use.

The flux through each hole is only defined up to integer multiples of 2*pi
(gauge freedom), so :func:`normalize_flux` folds it into the canonical
interval determined by the boundary-operator shift q and the kernel choice:

    default kernel:   flux/2pi in [-q - 1/2, -q + 1/2)
    alternate kernel: flux/2pi in (-1/2, 1/2]       (defined for q = 0)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Sequence, Union

import numpy as np

from .errors import SphereFluxMismatch
from .geometry import DomainKind, DomainSpec

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PiFlux:
    """A flux value equal to exactly ``multiplier * pi``."""

    multiplier: Fraction

    def __float__(self) -> float:
        return float(self.multiplier) * math.pi

    @property
    def over_2pi(self) -> Fraction:
        return self.multiplier / 2

    def __add__(self, other: "PiFlux") -> "PiFlux":
        return PiFlux(self.multiplier + other.multiplier)

    def __neg__(self) -> "PiFlux":
        return PiFlux(-self.multiplier)

    def __repr__(self) -> str:
        return f"PiFlux({self.multiplier}*pi)"


FluxLike = Union[float, int, PiFlux]


def pi_flux(multiplier) -> PiFlux:
    """Exact flux ``multiplier * pi``; multiplier is anything Fraction accepts."""
    return PiFlux(Fraction(multiplier))


def flux_over_2pi(phi: FluxLike) -> Union[float, Fraction]:
    """phi / 2pi, exact for PiFlux inputs."""
    if isinstance(phi, PiFlux):
        return phi.over_2pi
    return float(phi) / TWO_PI


def as_float(phi: FluxLike) -> float:
    return float(phi)


class Profile(Enum):
    UNIFORM_DISC = "uniform"
    SMOOTH_COMPACT = "smooth"


class KernelChoice(Enum):
    DEFAULT = "default"
    ALTERNATE = "alternate"


@dataclass(frozen=True)
class RadialBump:
    """Radial bulk-field component of compact support."""

    center: complex
    support_radius: float
    flux: FluxLike
    profile: Profile = Profile.SMOOTH_COMPACT

    def __post_init__(self):
        if not self.support_radius > 0:
            raise ValueError("bump support radius must be positive")


@dataclass(frozen=True)
class FieldSpec:
    bumps: List[RadialBump] = field(default_factory=list)
    hole_fluxes: List[FluxLike] = field(default_factory=list)
    q_shift: Union[float, Fraction] = 0
    kernel_choice: KernelChoice = KernelChoice.DEFAULT


@dataclass(frozen=True)
class NormalizedFlux:
    value: FluxLike
    gauge_integer: int


def _q_exact(q: Union[float, Fraction]) -> Union[float, Fraction]:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if float(q) == int(q):
        return Fraction(int(q))
    return float(q)


def normalize_flux(
    phi: FluxLike,
    q: Union[float, Fraction] = 0,
    kernel_choice: KernelChoice = KernelChoice.DEFAULT,
) -> NormalizedFlux:
    """Fold phi by multiples of 2*pi into the canonical interval for (q, kernel)."""
    x = flux_over_2pi(phi)
    qv = _q_exact(q)
    if kernel_choice is KernelChoice.ALTERNATE:
        if qv != 0:
            raise ValueError("alternate kernel choice is defined for q = 0 only")
        # target (-1/2, 1/2]: ties at +1/2 stay
        m = math.ceil(x - Fraction(1, 2) if isinstance(x, Fraction) else x - 0.5)
    else:
        # target [-q-1/2, -q+1/2): ties at the lower end stay
        if isinstance(x, Fraction) and isinstance(qv, Fraction):
            m = math.floor(x + qv + Fraction(1, 2))
        else:
            m = math.floor(float(x) + float(qv) + 0.5)
    if isinstance(phi, PiFlux):
        value: FluxLike = PiFlux(phi.multiplier - 2 * m)
    else:
        value = float(phi) - TWO_PI * m
    return NormalizedFlux(value=value, gauge_integer=m)


def normalized_hole_fluxes(fld: FieldSpec) -> List[NormalizedFlux]:
    return [normalize_flux(p, fld.q_shift, fld.kernel_choice) for p in fld.hole_fluxes]


def _sum_fluxes(parts: Sequence[FluxLike]) -> FluxLike:
    """Sum that stays exact when every part is a PiFlux."""
    if parts and all(isinstance(p, PiFlux) for p in parts):
        total = Fraction(0)
        for p in parts:
            total += p.multiplier
        return PiFlux(total)
    return float(sum(float(p) for p in parts))


def bulk_flux(fld: FieldSpec) -> FluxLike:
    return _sum_fluxes([b.flux for b in fld.bumps]) if fld.bumps else 0.0


def total_flux(fld: FieldSpec, domain: DomainSpec) -> FluxLike:
    """Bulk flux plus normalized hole fluxes; semi-total for sphere domains.

    On the sphere the raw fluxes must sum to zero (the potential one-form is
    globally defined), and the designated omitted hole is excluded from the
    normalized sum.
    """
    if len(fld.hole_fluxes) != domain.n_holes:
        raise ValueError(
            f"field carries {len(fld.hole_fluxes)} hole fluxes for {domain.n_holes} holes"
        )
    if domain.kind is DomainKind.SPHERE:
        check_sphere_flux_balance(fld)
        return semi_total_flux(fld, domain.omitted_hole)
    parts: List[FluxLike] = [b.flux for b in fld.bumps]
    parts += [normalize_flux(p, fld.q_shift, fld.kernel_choice).value for p in fld.hole_fluxes]
    return _sum_fluxes(parts) if parts else 0.0


def semi_total_flux(fld: FieldSpec, omitted_hole: int) -> FluxLike:
    """Bulk flux plus normalized fluxes of every hole except the omitted one."""
    if not 0 <= omitted_hole < len(fld.hole_fluxes):
        raise ValueError(f"omitted hole {omitted_hole} out of range")
    parts: List[FluxLike] = [b.flux for b in fld.bumps]
    parts += [
        normalize_flux(p, fld.q_shift, fld.kernel_choice).value
        for j, p in enumerate(fld.hole_fluxes)
        if j != omitted_hole
    ]
    return _sum_fluxes(parts) if parts else 0.0


def check_sphere_flux_balance(fld: FieldSpec, tol: float = 1e-9) -> None:
    """Raise SphereFluxMismatch unless bulk + all raw hole fluxes sum to zero."""
    total = float(bulk_flux(fld)) + sum(float(p) for p in fld.hole_fluxes)
    if abs(total) > tol:
        raise SphereFluxMismatch(
            f"total flux on the sphere must vanish, got {total:.3e}"
        )


def validate_field(fld: FieldSpec, domain: DomainSpec) -> List[str]:
    """Containment checks for bump supports; violations returned as messages."""
    bad: List[str] = []
    if len(fld.hole_fluxes) != domain.n_holes:
        bad.append(
            f"field carries {len(fld.hole_fluxes)} hole fluxes for {domain.n_holes} holes"
        )
    holes = list(enumerate(domain.holes))
    if domain.kind is DomainKind.SPHERE:
        om = domain.omitted_hole
        outer_c = domain.holes[om].center
        outer_r = domain.holes[om].radius
        holes = [(i, h) for i, h in holes if i != om]
    for bi, b in enumerate(fld.bumps):
        for hi, h in holes:
            if not abs(b.center - h.center) > b.support_radius + h.radius:
                bad.append(f"bump {bi} support touches hole {hi}")
        if domain.kind is DomainKind.DISC:
            if not abs(b.center) + b.support_radius < domain.radius_out:
                bad.append(f"bump {bi} support not inside the outer boundary")
        elif domain.kind is DomainKind.SPHERE:
            if not abs(b.center - outer_c) + b.support_radius < outer_r:
                bad.append(f"bump {bi} support not inside the projected outer circle")
    return bad


def smooth_profile_shape(r: np.ndarray, rho: float) -> np.ndarray:
    """Unnormalized bump shape exp(-1/(1-(r/rho)^2)) for r < rho, 0 beyond."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < rho
    x2 = (r[inside] / rho) ** 2
    out[inside] = np.exp(-1.0 / (1.0 - x2))
    return out


def _smooth_norm_integral(rho: float) -> float:
    # 2*pi * int_0^rho exp(-1/(1-(r/rho)^2)) r dr, via substitution r = rho*u
    from scipy.integrate import quad

    val, _ = quad(lambda u: math.exp(-1.0 / (1.0 - u * u)) * u, 0.0, 1.0,
                  epsabs=1e-14, epsrel=1e-13)
    return TWO_PI * rho * rho * val


_SMOOTH_NORM_UNIT = None


def smooth_profile_amplitude(bump: RadialBump) -> float:
    """Central density constant C with C * integral(shape) = flux."""
    global _SMOOTH_NORM_UNIT
    if _SMOOTH_NORM_UNIT is None:
        _SMOOTH_NORM_UNIT = _smooth_norm_integral(1.0)
    return float(bump.flux) / (_SMOOTH_NORM_UNIT * bump.support_radius ** 2)


def eval_B(fld: FieldSpec, z) -> np.ndarray:
    """Smooth field value at z; the hole deltas contribute nothing pointwise."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=float)
    for b in fld.bumps:
        r = np.abs(z - b.center)
        if b.profile is Profile.UNIFORM_DISC:
            out += np.where(r < b.support_radius,
                            float(b.flux) / (math.pi * b.support_radius ** 2), 0.0)
        else:
            out += smooth_profile_amplitude(b) * smooth_profile_shape(r, b.support_radius)
    return out if out.shape else float(out)


def support_radii_from(fld: FieldSpec, center: complex) -> List[float]:
    """Distances from ``center`` at which bump supports begin (for annulus probes)."""
    return [abs(b.center - center) - b.support_radius for b in fld.bumps]


def support_extents_from(fld: FieldSpec, center: complex) -> List[float]:
    """Distances from ``center`` at which bump supports end (outer probes)."""
    return [abs(b.center - center) + b.support_radius for b in fld.bumps]
