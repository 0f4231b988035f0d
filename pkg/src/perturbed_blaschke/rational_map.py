"""Pole-safe evaluation of the perturbed Blaschke family.

The map is ``B(z) = z**3 * (z - a) / (1 - conj(a) * z) + lam / z**2``.
Values on the Riemann sphere are plain ``complex`` numbers or the
:data:`INFINITY` sentinel; an overflowed float never leaks out of
:func:`evaluate`.

The scalar kernels prefixed with an underscore are numba-compiled and shared
with the orbit, grid and rendering code.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numba

from .errors import DomainError

__all__ = [
    "INFINITY",
    "INF_THRESHOLD",
    "ExtendedComplex",
    "ParameterPair",
    "evaluate",
    "eval_derivative",
    "eval_second_derivative",
    "eval_blaschke",
    "is_infinite",
]

# Finite results above this modulus are reported as the point at infinity.
INF_THRESHOLD = 1e150


class _Infinity:
    """The point at infinity of the Riemann sphere (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __abs__(self):
        return math.inf

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

ExtendedComplex = Union[complex, _Infinity]


def is_infinite(z) -> bool:
    return z is INFINITY


@dataclass(frozen=True)
class ParameterPair:
    """Coordinates ``(a, lam)`` of the family, with ``0 < |a| < 1``."""

    a: complex
    lam: complex = 0j

    def __post_init__(self):
        a = complex(self.a)
        lam = complex(self.lam)
        if not (0.0 < abs(a) < 1.0) or not cmath.isfinite(a):
            raise DomainError(f"a must lie in the punctured unit disk, got {a!r}")
        if not cmath.isfinite(lam):
            raise DomainError(f"lambda must be finite, got {lam!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "lam", lam)

    @property
    def pole(self) -> complex:
        """The pole ``1/conj(a)`` carried over from the Blaschke product."""
        return 1.0 / self.a.conjugate()

    @property
    def is_perturbed(self) -> bool:
        return self.lam != 0


# -- numba kernels ----------------------------------------------------------

@numba.njit(cache=True, nogil=True)
def _map(a, lam, z):
    """B(z) for finite nonzero z off the pole; callers handle the poles."""
    return z * z * z * ((z - a) / (1.0 - a.conjugate() * z)) + lam / (z * z)


@numba.njit(cache=True, nogil=True)
def _map_safe(a, lam, z):
    """B(z) returning ``(value, is_infinite)``."""
    if z == 0:
        if lam == 0:
            return 0j, False
        return 0j, True
    den = 1.0 - a.conjugate() * z
    if den == 0:
        return 0j, True
    w = z * z * z * ((z - a) / den)
    if lam != 0:
        w += lam / (z * z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        return 0j, True
    if abs(w) > 1e150:
        return 0j, True
    return w, False


@numba.njit(cache=True, nogil=True)
def _deriv(a, lam, z):
    ab = a.conjugate()
    den = 1.0 - ab * z
    h = (z - a) / den
    hp = (1.0 - (a.real * a.real + a.imag * a.imag)) / (den * den)
    return 3.0 * z * z * h + z * z * z * hp - 2.0 * lam / (z * z * z)


@numba.njit(cache=True, nogil=True)
def _deriv2(a, lam, z):
    ab = a.conjugate()
    den = 1.0 - ab * z
    s = 1.0 - (a.real * a.real + a.imag * a.imag)
    h = (z - a) / den
    hp = s / (den * den)
    hpp = 2.0 * ab * s / (den * den * den)
    z2 = z * z
    return 6.0 * z * h + 6.0 * z2 * hp + z2 * z * hpp + 6.0 * lam / (z2 * z2)


# -- public API -------------------------------------------------------------

def evaluate(p: ParameterPair, z: ExtendedComplex) -> ExtendedComplex:
    """Return ``B_{a,lam}(z)`` on the extended plane.

    Infinity is returned at ``z = 0`` (when ``lam != 0``), at ``z = 1/conj(a)``
    and at ``z = INFINITY``; finite results with modulus above
    :data:`INF_THRESHOLD` are promoted to infinity as well.
    """
    if z is INFINITY:
        return INFINITY
    z = complex(z)
    if not cmath.isfinite(z):
        return INFINITY
    a, lam = p.a, p.lam
    if z == 0:
        return INFINITY if lam != 0 else 0j
    den = 1.0 - a.conjugate() * z
    if den == 0:
        return INFINITY
    try:
        w = z * z * z * ((z - a) / den)
        if lam != 0:
            w += lam / (z * z)
    except OverflowError:
        return INFINITY
    if not cmath.isfinite(w) or abs(w) > INF_THRESHOLD:
        return INFINITY
    return w


def eval_blaschke(a: complex, z: ExtendedComplex) -> ExtendedComplex:
    """Unperturbed product ``z**3 (z - a)/(1 - conj(a) z)``."""
    return evaluate(ParameterPair(a, 0j), z)


def _check_regular(p: ParameterPair, z: complex) -> complex:
    if z is INFINITY:
        raise DomainError("derivative requested at infinity")
    z = complex(z)
    if z == 0 or 1.0 - p.a.conjugate() * z == 0:
        raise DomainError(f"derivative undefined at pole z={z!r}")
    return z


def eval_derivative(p: ParameterPair, z: complex) -> complex:
    """``B'(z)``; raises :class:`DomainError` at ``z = 0`` and at the pole."""
    z = _check_regular(p, z)
    return complex(_deriv(p.a, p.lam, z))


def eval_second_derivative(p: ParameterPair, z: complex) -> complex:
    z = _check_regular(p, z)
    return complex(_deriv2(p.a, p.lam, z))
