"""Boundary operator spectra on circles and the spectral boundary condition.

On the circle of hole j (radius R, flux phi through it, shift q) the boundary
operator acts diagonally on the two spin components in the basis psi_l,
l integer, with eigenvalues

    up:   ( phi/2pi - 1/2 - l + q ) / R
    down: ( l - 1/2 - phi/2pi - q ) / R

and on the outer circle with the overall sign flipped

    up:   ( l + 1/2 - phi/2pi - q ) / R
    down: ( phi/2pi + 1/2 - l + q ) / R.

The admissible subspace takes, per spin, the eigenvectors with negative
eigenvalue plus one chosen half of the kernel: the spin-down kernel vector by
default, the spin-up one for the alternate choice.  Spelled out as index sets
(default kernel), with x = phi/2pi + q:

    hole:  up allowed iff l > x - 1/2,   down allowed iff l <= x + 1/2
    outer: up allowed iff l < x - 1/2,   down allowed iff l >= x + 1/2.

Kernel vectors exist only when x + 1/2 is an integer; that case is detected
exactly for rational fluxes and within 1e-12 for floats.

Trace membership is measured in the weighted norm

    ||sum c_l v_l||^2 = sum_{lambda<0} |c|^2 (1+lambda^2)^{1/2}
                      + sum_{lambda>=0} |c|^2 (1+lambda^2)^{-1/2},

and the leakage of a trace is that weight restricted to the forbidden index
set.  Traces are extracted from boundary samples by dividing out the explicit
winding phase of psi_l and taking a discrete Fourier transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Tuple, Union

import numpy as np

from .field import FluxLike, KernelChoice, flux_over_2pi
from .geometry import OUTER
from .numutil import INT_DETECTION_TOL

HALF = Fraction(1, 2)


class Spin(Enum):
    UP = "up"
    DOWN = "down"


def _exact_or_float(x) -> Union[float, Fraction]:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if float(x) == int(x):
        return Fraction(int(x))
    return float(x)


@dataclass(frozen=True)
class BoundarySpectrum:
    """Eigenvalue table of the (possibly q-shifted) boundary operator on one circle."""

    boundary: int  # hole index, or OUTER for the outer circle
    radius: float
    flux_through: FluxLike
    q: Union[float, Fraction] = 0
    kernel_choice: KernelChoice = KernelChoice.DEFAULT

    @property
    def is_outer(self) -> bool:
        return self.boundary == OUTER

    def _x(self) -> Union[float, Fraction]:
        """phi/2pi + q, exact when both parts are rational."""
        c = flux_over_2pi(self.flux_through)
        q = _exact_or_float(self.q)
        if isinstance(c, Fraction) and isinstance(q, Fraction):
            return c + q
        return float(c) + float(q)

    def eigenvalue(self, spin: Spin, ell: int) -> float:
        x = float(self._x())
        if self.is_outer:
            if spin is Spin.UP:
                return (ell + 0.5 - x) / self.radius
            return (x + 0.5 - ell) / self.radius
        if spin is Spin.UP:
            return (x - 0.5 - ell) / self.radius
        return (ell - 0.5 - x) / self.radius

    def _threshold(self, spin: Spin) -> Tuple[Union[float, Fraction], bool, int]:
        """(threshold, is_at_integer, integer value) for the allowed-set inequality."""
        x = self._x()
        t = x - (HALF if isinstance(x, Fraction) else 0.5) if spin is Spin.UP \
            else x + (HALF if isinstance(x, Fraction) else 0.5)
        if isinstance(t, Fraction):
            return t, t.denominator == 1, int(t) if t.denominator == 1 else 0
        k = round(t)
        return t, abs(t - k) <= INT_DETECTION_TOL, int(k)

    def allowed(self, spin: Spin, ell: int) -> bool:
        """Membership of the (spin, ell) basis vector in the admissible subspace."""
        t, at_int, k = self._threshold(spin)
        alternate = self.kernel_choice is KernelChoice.ALTERNATE
        if self.is_outer:
            if spin is Spin.UP:
                if at_int:
                    return ell <= k - (0 if alternate else 1)
                return ell < t
            if at_int:
                return ell >= k + (1 if alternate else 0)
            return ell > t
        if spin is Spin.UP:
            if at_int:
                return ell >= k + (0 if alternate else 1)
            return ell > t
        if at_int:
            return ell <= k - (1 if alternate else 0)
        return ell < t

    def allowed_set(self, spin: Spin) -> Callable[[int], bool]:
        """Membership predicate over the integer label l."""
        return lambda ell: self.allowed(spin, ell)


def hcheck_weight(eigenvalue: float) -> float:
    w = math.sqrt(1.0 + eigenvalue * eigenvalue)
    return w if eigenvalue < 0 else 1.0 / w


@dataclass
class TraceFourier:
    """Boundary-trace coefficients in the psi_l basis, per spin component.

    Coefficients with |l| <= l_max are the trace proper; the sampled remainder
    up to the Nyquist index is kept so leakage reports carry an honest
    truncation tail instead of an estimate.
    """

    up: Dict[int, complex]
    down: Dict[int, complex]
    l_max: int
    up_tail: Dict[int, complex] = field(default_factory=dict)
    down_tail: Dict[int, complex] = field(default_factory=dict)


def trace_from_samples(
    spec: BoundarySpectrum,
    phis: np.ndarray,
    up_samples: np.ndarray,
    down_samples: np.ndarray,
    phase_exponent: np.ndarray,
    l_max: int = 64,
) -> TraceFourier:
    """Fourier trace of boundary samples after dividing out the psi_l phase.

    ``phis`` must be a uniform grid of 2^k angles starting at 0;
    ``phase_exponent`` is int_gamma a.ds from angle 0 to each phi.  psi_l
    equals exp(i l phi) times exp(i(phase_exponent - (phi/2pi)_enclosed phi)),
    so after dividing by that unimodular factor a plain DFT yields the
    coefficients.
    """
    m = len(phis)
    if m < 2 or m & (m - 1):
        raise ValueError("trace sampling needs a power-of-two number of angles")
    c_enc = float(flux_over_2pi(spec.flux_through))
    phase = np.exp(1j * (phase_exponent - c_enc * phis))
    coeff_up = np.fft.fft(np.asarray(up_samples, dtype=complex) / phase) / m
    coeff_down = np.fft.fft(np.asarray(down_samples, dtype=complex) / phase) / m

    up: Dict[int, complex] = {}
    down: Dict[int, complex] = {}
    up_tail: Dict[int, complex] = {}
    down_tail: Dict[int, complex] = {}
    for ell in range(-m // 2, m // 2):
        cu = complex(coeff_up[ell % m])
        cd = complex(coeff_down[ell % m])
        if abs(ell) <= l_max:
            up[ell] = cu
            down[ell] = cd
        else:
            up_tail[ell] = cu
            down_tail[ell] = cd
    return TraceFourier(up=up, down=down, l_max=l_max,
                        up_tail=up_tail, down_tail=down_tail)


def check_norm(coeffs: TraceFourier, spec: BoundarySpectrum) -> float:
    """Weighted squared trace norm over the stored coefficients."""
    total = 0.0
    for spin, table in ((Spin.UP, coeffs.up), (Spin.DOWN, coeffs.down)):
        for ell, c in table.items():
            total += abs(c) ** 2 * hcheck_weight(spec.eigenvalue(spin, ell))
    return total


def leakage(coeffs: TraceFourier, spec: BoundarySpectrum) -> float:
    """Weighted norm of the trace projected onto the forbidden index sets.

    Includes the sampled truncation tail beyond l_max, so the value is zero
    (up to rounding) exactly when the trace lies in the admissible subspace.
    """
    total = 0.0
    for spin, tables in (
        (Spin.UP, (coeffs.up, coeffs.up_tail)),
        (Spin.DOWN, (coeffs.down, coeffs.down_tail)),
    ):
        for table in tables:
            for ell, c in table.items():
                if not spec.allowed(spin, ell):
                    total += abs(c) ** 2 * hcheck_weight(spec.eigenvalue(spin, ell))
    return total
